#!/usr/bin/env python3
"""Frequency experiments for the two deterministic printers.

Usage: python3 scripts/run_printer_experiments.py [log2_horizon]

Simulates both printers under the power-of-two coin, prints exact prefix
frequencies at dyadic checkpoints and the min/max of each frequency over the
tail window [horizon/2, horizon].  The tail gaps printed by a horizon-2^20
run are the committed oracle values used by the demo suite.
"""

import sys
from fractions import Fraction

from qprob.demos import (
    power_of_two_coin,
    printer_joint,
    printer_single,
)
from qprob.values import format_rational


def main() -> int:
    log2_horizon = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    horizon = 1 << log2_horizon

    single = printer_single(power_of_two_coin, horizon)
    print(f"single printer, horizon 2^{log2_horizon}")
    for k in range(4, log2_horizon + 1, 2):
        n = 1 << k
        print(f"  freq(0, 2^{k:2}) = {format_rational(single.freq(0, n)):>18}"
              f"  ~ {float(single.freq(0, n)):.6f}")
    lo, hi = horizon // 2, horizon
    low, high = single.window_extremes(0, lo, hi)
    print(f"  tail window [{lo}, {hi}]:"
          f" min {format_rational(low)}, max {format_rational(high)},"
          f" gap {format_rational(high - low)}")
    above = single.always_above(0, Fraction(1, 2), start=2)
    print(f"  freq(0, n) > 1/2 for every n >= 2: {above}")

    run = printer_joint(power_of_two_coin, horizon)
    print(f"joint printer, horizon 2^{log2_horizon}")
    for name, series, symbol in (
        ("left  0", run.left, 0),
        ("right 0", run.right, 0),
    ):
        print(f"  {name} marginal at horizon:"
              f" {format_rational(series.freq(symbol, horizon))}"
              f" ~ {float(series.freq(symbol, horizon)):.6f}")
    for symbol in run.joint.symbols():
        low, high = run.joint.window_extremes(symbol, lo, hi)
        print(f"  joint {symbol}: freq {format_rational(run.joint.freq(symbol, horizon)):>18}"
              f"  tail gap {format_rational(high - low)} ~ {float(high - low):.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
