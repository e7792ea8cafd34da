"""Executable worked examples, including the printer frequency experiments.

Everything here is exact: coin sequences and printer outputs are
deterministic, and frequencies are rationals.  Each demo builds its
valuation, runs the relevant operations and compares against the expected
values inline; a mismatch makes the report (and the CLI) fail loudly.

Non-convergence of the printer frequencies is witnessed, not proven: the
committed gap constants below were produced by a first run of this very
simulation at horizon 2^20 and are asserted as lower bounds ever since.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable

from .conditioning import (
    LocalPreProb,
    StableCell,
    UnstableCell,
    InvariantCell,
    conditional_quasi,
    relative_preprob,
    relative_quasi,
    total_quasi,
)
from .errors import RelativisationUnstable, SizeCapExceeded
from .lattice import Partition, Universe, product_universe
from .valuation import (
    PreProb,
    QuasiProb,
    apply_gauge,
    canonical_split,
    components_basis,
    semantic_dimension,
)
from .values import (
    Basis,
    GaugeMap,
    SemValue,
    Sign,
    format_rational,
    sv_sign,
)

MAX_HORIZON = 1 << 22
DEFAULT_HORIZON = 1 << 20

#: frozen by the first horizon-2^20 run; the tail window is [2^19, 2^20]
SINGLE_TAIL_GAP = Fraction(262145, 1572864)
JOINT_TAIL_GAP = Fraction(262145, 1572864)
JOINT_MARGINAL_SLACK = Fraction(1, 100)

Symbol = Hashable
Coin = Callable[[int], bool]


def all_tails_coin(n: int) -> bool:
    """The coin that never shows head."""
    if n < 1:
        raise ValueError("coin flips are indexed from 1")
    return False


def power_of_two_coin(n: int) -> bool:
    """Head exactly at the powers of two (including 1 = 2^0)."""
    if n < 1:
        raise ValueError("coin flips are indexed from 1")
    return n & (n - 1) == 0


@dataclass
class FrequencySeries:
    """Exact prefix frequencies of a deterministic symbol stream.

    Stores, per symbol, the increasing list of times at which it occurred;
    prefix counts and frequencies fall out by bisection, which keeps a
    horizon-2^22 run affordable.
    """

    horizon: int
    times: dict[Symbol, array]

    def count(self, symbol: Symbol, n: int) -> int:
        if not 1 <= n <= self.horizon:
            raise ValueError(f"prefix length {n} outside 1..{self.horizon}")
        return bisect_right(self.times[symbol], n)

    def freq(self, symbol: Symbol, n: int) -> Fraction:
        return Fraction(self.count(symbol, n), n)

    def symbols(self) -> list[Symbol]:
        return list(self.times.keys())

    def always_above(self, symbol: Symbol, threshold: Fraction, start: int) -> bool:
        """freq(symbol, n) > threshold for every n in [start, horizon].

        Between occurrences the frequency only decays, so it is enough to
        test the end of every constant-count stretch.
        """
        p, q = threshold.numerator, threshold.denominator
        occurrences = self.times[symbol]
        for index, time in enumerate(occurrences):
            n = time - 1
            if n >= start and q * index <= p * n:
                return False
        if q * len(occurrences) <= p * self.horizon:
            return False
        return True

    def window_extremes(
        self, symbol: Symbol, lo: int, hi: int
    ) -> tuple[Fraction, Fraction]:
        """Exact min and max of freq(symbol, n) over lo <= n <= hi."""
        if not 1 <= lo <= hi <= self.horizon:
            raise ValueError("window outside the simulated horizon")
        occurrences = self.times[symbol]

        best_min = (self.count(symbol, hi), hi)
        best_max = (self.count(symbol, lo), lo)

        def consider(count: int, n: int) -> None:
            nonlocal best_min, best_max
            if count * best_min[1] < best_min[0] * n:
                best_min = (count, n)
            if count * best_max[1] > best_max[0] * n:
                best_max = (count, n)

        start = bisect_right(occurrences, lo)
        for index in range(start, len(occurrences)):
            time = occurrences[index]
            if time > hi:
                break
            consider(index + 1, time)      # just after the occurrence
            if time - 1 >= lo:
                consider(index, time - 1)  # end of the previous stretch
        return Fraction(*best_min), Fraction(*best_max)


def _check_horizon(horizon: int) -> None:
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if horizon > MAX_HORIZON:
        raise SizeCapExceeded("horizon above the 2^22 cap")


def printer_single(coin: Coin, horizon: int) -> FrequencySeries:
    """One symbol per tick: parity printing in state A, zeros in state B.

    The coin is flipped before each print; head toggles the internal state.
    The printer starts in state A.
    """
    _check_horizon(horizon)
    zeros = array("I")
    ones = array("I")
    in_state_b = False
    for t in range(1, horizon + 1):
        if coin(t):
            in_state_b = not in_state_b
        if in_state_b or t % 2 == 0:
            zeros.append(t)
        else:
            ones.append(t)
    return FrequencySeries(horizon, {0: zeros, 1: ones})


@dataclass
class JointFrequencies:
    """Two-column printer output: joint symbols plus per-column marginals."""

    joint: FrequencySeries
    left: FrequencySeries
    right: FrequencySeries


def printer_joint(coin: Coin, horizon: int) -> JointFrequencies:
    """Two symbols per tick: state A prints (0,1)/(1,0) by parity, state B
    prints (0,0)/(1,1) by parity; same switching rule as the single printer."""
    _check_horizon(horizon)
    joint_times: dict[Symbol, array] = {
        (0, 0): array("I"), (0, 1): array("I"),
        (1, 0): array("I"), (1, 1): array("I"),
    }
    left_times: dict[Symbol, array] = {0: array("I"), 1: array("I")}
    right_times: dict[Symbol, array] = {0: array("I"), 1: array("I")}
    in_state_b = False
    for t in range(1, horizon + 1):
        if coin(t):
            in_state_b = not in_state_b
        even = t % 2 == 0
        if in_state_b:
            pair = (0, 0) if even else (1, 1)
        else:
            pair = (0, 1) if even else (1, 0)
        joint_times[pair].append(t)
        left_times[pair[0]].append(t)
        right_times[pair[1]].append(t)
    return JointFrequencies(
        FrequencySeries(horizon, joint_times),
        FrequencySeries(horizon, left_times),
        FrequencySeries(horizon, right_times),
    )


# -- demo reports ---------------------------------------------------------------

@dataclass
class DemoReport:
    name: str
    rows: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def expect(self, label: str, actual: object, expected: object) -> None:
        self.rows.append(
            {
                "label": label,
                "value": _render(actual),
                "expected": _render(expected),
                "ok": actual == expected,
            }
        )

    def expect_true(self, label: str, ok: bool, detail: str = "") -> None:
        self.rows.append(
            {
                "label": label,
                "value": detail or str(ok).lower(),
                "expected": detail if ok else "(violated)",
                "ok": ok,
            }
        )

    @property
    def ok(self) -> bool:
        return all(row["ok"] for row in self.rows)

    def table_lines(self) -> list[str]:
        width_label = max(len(r["label"]) for r in self.rows)
        width_value = max(len(r["value"]) for r in self.rows)
        lines = [f"demo {self.name}"]
        for row in self.rows:
            mark = "ok " if row["ok"] else "FAIL"
            lines.append(
                f"  {mark} {row['label']:<{width_label}}  {row['value']:<{width_value}}"
                f"  expected {row['expected']}"
            )
        lines.extend(f"  note: {note}" for note in self.notes)
        lines.append(f"  result: {'ok' if self.ok else 'MISMATCH'}")
        return lines

    def to_mapping(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "rows": self.rows,
            "notes": self.notes,
        }


def _render(value: object) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, SemValue):
        return format_semvalue(value)
    if isinstance(value, tuple):
        return "(" + ", ".join(_render(v) for v in value) + ")"
    return str(value)


def format_semvalue(v: SemValue) -> str:
    terms = []
    for symbol, coeff in zip(v.basis.symbols, v.coeffs):
        if coeff == 0:
            continue
        magnitude = format_rational(abs(coeff))
        body = magnitude if symbol == "1" else (
            symbol if abs(coeff) == 1 else f"{magnitude}*{symbol}"
        )
        terms.append(("-" if coeff < 0 else "+", body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# -- fixture valuations -----------------------------------------------------------

RATIONAL = Basis(("1",))

SQRT2_ENCLOSURE = (
    (Fraction(707, 500), Fraction(283, 200)),
    (Fraction(0), Fraction(0)),
)
SQRT2_BASIS = Basis(
    ("1", "sqrt2"),
    (((Fraction(1), Fraction(1)), (Fraction(0), Fraction(0))), SQRT2_ENCLOSURE),
)


def two_binary_universe():
    return product_universe([2, 2], ["A", "B"])


def standard_conditionals_quasi() -> QuasiProb:
    """The two-binary-variables quasi-probability whose A=0 margin vanishes."""
    universe = two_binary_universe()
    return QuasiProb(
        universe,
        (Fraction(3, 10), Fraction(-3, 10), Fraction(3, 5), Fraction(2, 5)),
    )


def irrational_pair_valuation() -> PreProb:
    """Two atoms at 1/2 -+ sqrt2/10: a probability of semantic dimension two."""
    universe = Universe(("a", "b"))
    atomic = (
        SemValue(SQRT2_BASIS, (Fraction(1, 2), Fraction(-1, 10))),
        SemValue(SQRT2_BASIS, (Fraction(1, 2), Fraction(1, 10))),
    )
    return PreProb(universe, SQRT2_BASIS, atomic)


# -- worked-example demos -----------------------------------------------------------

def demo_standard_conditionals() -> DemoReport:
    report = DemoReport("standard-conditionals")
    universe = two_binary_universe()
    q = standard_conditionals_quasi()
    a0, a1 = universe.event("A=0"), universe.event("A=1")
    b0, b1 = universe.event("B=0"), universe.event("B=1")

    report.expect("Q(A=0,B=0)", q(universe.event("A=0,B=0")), Fraction(3, 10))
    report.expect("Q(A=0,B=1)", q(universe.event("A=0,B=1")), Fraction(-3, 10))
    report.expect("Q(A=1,B=0)", q(universe.event("A=1,B=0")), Fraction(3, 5))
    report.expect("Q(A=1,B=1)", q(universe.event("A=1,B=1")), Fraction(2, 5))
    report.expect("Q(A=0)", q(a0), Fraction(0))
    report.expect("Q(A=1)", q(a1), Fraction(1))
    report.expect("Q(B=0)", q(b0), Fraction(9, 10))
    report.expect("Q(B=1)", q(b1), Fraction(1, 10))
    report.expect("Q(A=0|B=0)", conditional_quasi(q, a0, b0), Fraction(1, 3))
    report.expect("Q(A=1|B=0)", conditional_quasi(q, a1, b0), Fraction(2, 3))
    report.expect("Q(B=0|A=1)", conditional_quasi(q, b0, a1), Fraction(3, 5))
    report.expect("Q(B=1|A=1)", conditional_quasi(q, b1, a1), Fraction(2, 5))

    try:
        relative_quasi(q, a0)
    except RelativisationUnstable:
        report.expect_true(
            "conditioning on A=0", True, "RelativisationUnstable raised"
        )
    else:
        report.expect_true("conditioning on A=0", False, "no error raised")
    local = relative_preprob(q.as_preprob(RATIONAL), a0)
    report.expect(
        "restriction to A=0",
        tuple(v.coeffs[0] for v in local.values),
        (Fraction(3, 10), Fraction(-3, 10)),
    )
    return report


def demo_total_rule(case: int) -> DemoReport:
    if case not in (1, 2, 3):
        raise ValueError("total-rule demo cases are 1, 2 and 3")
    report = DemoReport(f"total-rule-{case}")
    universe = two_binary_universe()
    a0, a1 = universe.event("A=0"), universe.event("A=1")
    b0, b1 = universe.event("B=0"), universe.event("B=1")
    partition = Partition.of(universe, (a0, a1))

    if case == 1:
        q = QuasiProb(
            universe,
            (Fraction(1, 5), Fraction(3, 10), Fraction(1, 10), Fraction(2, 5)),
        )
        data = [
            StableCell(relative_quasi(q, a0), q(a0)),
            StableCell(relative_quasi(q, a1), q(a1)),
        ]
        report.notes.append(
            "Q(B) = Q(B|A=0) Q(A=0) + Q(B|A=1) Q(A=1), both cells stable"
        )
    elif case == 2:
        q = QuasiProb(
            universe,
            (Fraction(3, 5), Fraction(2, 5), Fraction(3, 10), Fraction(-3, 10)),
        )
        report.expect("Q(A=1)", q(a1), Fraction(0))
        anchor = universe.event("A=1,B=1")
        report.expect("Q(A=1,B=1)", q(anchor), Fraction(-3, 10))
        # the unstable cell only publishes its own gauge of the restriction;
        # here it is scaled by 7, which the anchor value cancels exactly
        local = relative_preprob(q.as_preprob(RATIONAL), a1)
        gauged = LocalPreProb(
            universe, RATIONAL, a1, tuple(v.scale(7) for v in local.values)
        )
        data = [
            StableCell(relative_quasi(q, a0), q(a0)),
            UnstableCell(gauged, anchor, q(anchor)),
        ]
        report.notes.append(
            "Q(B) = Q(B|A=0) Q(A=0) + R(B|A=1) Q(A=1,B=1) / R(B=1|A=1)"
        )
    else:
        q = QuasiProb(
            universe, (Fraction(3, 5), Fraction(2, 5), Fraction(0), Fraction(0))
        )
        report.expect("Q(A=1)", q(a1), Fraction(0))
        report.expect("Q(A=1,B=0)", q(universe.event("A=1,B=0")), Fraction(0))
        report.expect("Q(A=1,B=1)", q(universe.event("A=1,B=1")), Fraction(0))
        data = [
            StableCell(relative_quasi(q, a0), q(a0)),
            InvariantCell(),
        ]
        report.notes.append("Q(B) = Q(B|A=0): the A=1 cell is invariant")

    for label, s in (("B=0", b0), ("B=1", b1)):
        report.expect(f"total rule at {label}", total_quasi(partition, data, s), q(s))
    if case == 3:
        for label, s in (("B=0", b0), ("B=1", b1)):
            report.expect(
                f"Q({label}) vs Q({label}|A=0)",
                conditional_quasi(q, s, a0),
                q(s),
            )
    return report


def demo_irrational_gauge() -> DemoReport:
    report = DemoReport("irrational-gauge")
    p = irrational_pair_valuation()
    universe = p.universe
    top = universe.top()
    one = SQRT2_BASIS.from_rational(1)

    report.expect("P(top)", p(top), one)
    report.expect("semantic dimension", semantic_dimension(p), 2)

    rational_part, irrational_part = components_basis(p)
    report.expect(
        "rational part",
        tuple(v.coeffs[0] for v in rational_part.atomic),
        (Fraction(1, 2), Fraction(1, 2)),
    )
    report.expect(
        "irrational part",
        tuple(v.coeffs[1] for v in irrational_part.atomic),
        (Fraction(-1, 10), Fraction(1, 10)),
    )
    report.expect("irrational part at top", irrational_part(top), SQRT2_BASIS.zero())

    gauge = GaugeMap.diagonal([Fraction(1), Fraction(2)])
    rescaled = apply_gauge(p, gauge)
    report.expect(
        "P'(a)",
        rescaled.atomic[0],
        SemValue(SQRT2_BASIS, (Fraction(1, 2), Fraction(-1, 5))),
    )
    report.expect("P'(top)", rescaled(top), one)
    report.expect("sign of P'(a)", sv_sign(rescaled.atomic[0]), Sign.POSITIVE)

    quasi, rest = canonical_split(p)
    report.expect("split quasi part", quasi.atomic, (Fraction(0), Fraction(1)))
    report.expect("split residual count", len(rest), 1)
    report.expect(
        "split residual", rest[0].atomic, (p.atomic[0], -p.atomic[0])
    )
    report.expect("residual at top", rest[0](top), SQRT2_BASIS.zero())
    return report


def demo_printer_single(horizon: int = DEFAULT_HORIZON) -> DemoReport:
    report = DemoReport("printer-single")
    steady = printer_single(all_tails_coin, min(horizon, 10_000))
    report.expect(
        "all-tails freq of 0 at 10^4",
        steady.freq(0, min(horizon, 10_000)),
        Fraction(1, 2),
    )
    series = printer_single(power_of_two_coin, horizon)
    report.expect_true(
        "freq of 0 above 1/2 from n=2 on",
        series.always_above(0, Fraction(1, 2), start=2),
        f"checked every n in [2, {horizon}]",
    )
    lo, hi = horizon // 2, horizon
    low, high = series.window_extremes(0, lo, hi)
    gap = high - low
    report.expect_true(
        "tail oscillation gap",
        gap >= SINGLE_TAIL_GAP if horizon == DEFAULT_HORIZON else gap > 0,
        f"gap {format_rational(gap)} on [{lo}, {hi}]",
    )
    report.notes.append(
        f"freq(0, {horizon}) = {format_rational(series.freq(0, horizon))}"
    )
    return report


def demo_printer_joint(horizon: int = DEFAULT_HORIZON) -> DemoReport:
    report = DemoReport("printer-joint")
    frozen = printer_joint(all_tails_coin, min(horizon, 10_000))
    even_horizon = min(horizon, 10_000)
    report.expect(
        "all-tails joint freq of (0,1)",
        frozen.joint.freq((0, 1), even_horizon),
        Fraction(1, 2),
    )
    report.expect(
        "all-tails joint freq of (0,0)",
        frozen.joint.freq((0, 0), even_horizon),
        Fraction(0),
    )

    run = printer_joint(power_of_two_coin, horizon)
    half = Fraction(1, 2)
    for label, series in (("left", run.left), ("right", run.right)):
        drift = abs(series.freq(0, horizon) - half)
        report.expect_true(
            f"{label} marginal near 1/2",
            drift <= JOINT_MARGINAL_SLACK,
            f"|freq - 1/2| = {format_rational(drift)}",
        )
    lo, hi = horizon // 2, horizon
    gaps = {}
    for symbol in run.joint.symbols():
        low, high = run.joint.window_extremes(symbol, lo, hi)
        gaps[symbol] = high - low
    widest = max(gaps.values())
    report.expect_true(
        "some joint symbol keeps oscillating",
        widest >= JOINT_TAIL_GAP if horizon == DEFAULT_HORIZON else widest > 0,
        f"widest gap {format_rational(widest)} on [{lo}, {hi}]",
    )
    return report


DEMOS: dict[str, Callable[[], DemoReport]] = {
    "standard-conditionals": demo_standard_conditionals,
    "total-rule-1": lambda: demo_total_rule(1),
    "total-rule-2": lambda: demo_total_rule(2),
    "total-rule-3": lambda: demo_total_rule(3),
    "irrational-gauge": demo_irrational_gauge,
    "printer-single": demo_printer_single,
    "printer-joint": demo_printer_joint,
}
