#!/usr/bin/env python3
"""Run the whole verification suite from the command line.

Usage: python3 scripts/run_checks.py [seed]

Prints one line per check and exits nonzero on any failure.
"""

import sys

from qprob.verify import render_text, run_suite


def main() -> int:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    reports = run_suite(seed)
    print(render_text(reports))
    failed = [r for r in reports if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
