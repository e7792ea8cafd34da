"""Brute-force verification suite.

Every structural law of the calculus is checked exhaustively on small
universes and by seeded randomisation beyond.  The checks accept an optional
explicit value table precisely so that corrupted tables can be fed in:
additivity is true by construction for the valuation types, and a check that
cannot fail would be worthless.

All randomness flows through `random.Random` seeded per check, so the whole
suite is deterministic given the root seed, and every failure report carries
a serialised counterexample that replays bit for bit.
"""

from __future__ import annotations

import itertools
import random
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .conditioning import relative_preprob, relative_probability, relative_quasi, total_probability
from .errors import RelativisationUnstable, SingularMatrix, TableIncomplete
from .lattice import Partition, Statement, Universe, enumerate_statements
from .valuation import (
    PreProb,
    QuasiProb,
    apply_gauge,
    canonical_frame,
    is_probability,
    semantic_dimension,
)
from .values import (
    Basis,
    GaugeMap,
    SemValue,
    ZERO,
    format_rational,
    q_coords,
    q_rank,
)

EXHAUSTIVE_ATOMS = 5


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check; failures always carry a replayable witness."""

    name: str
    passed: bool
    cases_run: int
    counterexample: Optional[dict] = None
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.passed and self.counterexample is None:
            raise ValueError("a failing report must carry a counterexample")

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_mapping(self) -> dict:
        doc: dict = {
            "verdict": self.verdict,
            "cases_run": self.cases_run,
        }
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc


def render_text(reports: Sequence[CheckReport]) -> str:
    lines = []
    for report in reports:
        line = f"{report.verdict.upper():4} {report.name} cases={report.cases_run}"
        if report.notes:
            line += "  [" + "; ".join(report.notes) + "]"
        if report.counterexample is not None:
            line += f"  counterexample={report.counterexample}"
        lines.append(line)
    return "\n".join(lines)


def render_structured(reports: Sequence[CheckReport]) -> dict:
    return {report.name: report.to_mapping() for report in reports}


# -- serialisation helpers for counterexamples --------------------------------

def _stmt_doc(universe: Universe, s: Statement) -> list[str]:
    return universe.labels_of(s)


def _value_doc(v: SemValue) -> dict[str, str]:
    return v.to_mapping()


ValueTable = Mapping[Statement, SemValue]


def _table_for(r: PreProb, table: Optional[ValueTable]) -> Callable[[Statement], SemValue]:
    if table is None:
        return r
    return lambda s: table[s]


# -- elementary law checks -----------------------------------------------------

def check_additivity(r: PreProb, table: Optional[ValueTable] = None) -> CheckReport:
    """value(s OR t) == value(s) + value(t) for every disjoint pair."""
    value = _table_for(r, table)
    universe = r.universe
    if universe.atom_count > EXHAUSTIVE_ATOMS:
        raise ValueError("exhaustive additivity check is capped at 5 atoms")
    cases = 0
    for s in enumerate_statements(universe):
        complement_bits = universe.top().bits & ~s.bits
        t_bits = complement_bits
        while True:
            t = Statement(t_bits, s.width)
            joined = Statement(s.bits | t_bits, s.width)
            cases += 1
            if value(joined) != value(s) + value(t):
                return CheckReport(
                    "additivity",
                    False,
                    cases,
                    {
                        "s": _stmt_doc(universe, s),
                        "t": _stmt_doc(universe, t),
                        "lhs": _value_doc(value(joined)),
                        "rhs": _value_doc(value(s) + value(t)),
                    },
                )
            if t_bits == 0:
                break
            t_bits = (t_bits - 1) & complement_bits
    return CheckReport("additivity", True, cases)


def check_negation(r: PreProb, table: Optional[ValueTable] = None) -> CheckReport:
    """value(not s) == value(top) - value(s) for every statement."""
    value = _table_for(r, table)
    universe = r.universe
    top = universe.top()
    cases = 0
    for s in enumerate_statements(universe):
        negated = Statement(top.bits & ~s.bits, s.width)
        cases += 1
        if value(negated) != value(top) - value(s):
            return CheckReport(
                "negation",
                False,
                cases,
                {
                    "s": _stmt_doc(universe, s),
                    "lhs": _value_doc(value(negated)),
                    "rhs": _value_doc(value(top) - value(s)),
                },
            )
    return CheckReport("negation", True, cases)


def check_levels(r: PreProb, table: Optional[ValueTable] = None) -> CheckReport:
    """With all atoms equal, the value of a statement depends only on its
    level; additively that means value(s) == level(s) * atom value."""
    value = _table_for(r, table)
    universe = r.universe
    x = value(universe.atom(0))
    if any(value(a) != x for a in universe.atoms()):
        return CheckReport(
            "level-constancy", True, 0, notes=("atoms differ; premise is vacuous",)
        )
    cases = 0
    for s in enumerate_statements(universe):
        cases += 1
        if value(s) != x.scale(s.level):
            return CheckReport(
                "level-constancy",
                False,
                cases,
                {
                    "s": _stmt_doc(universe, s),
                    "lhs": _value_doc(value(s)),
                    "rhs": _value_doc(x.scale(s.level)),
                },
            )
    return CheckReport("level-constancy", True, cases)


# -- the frame lemma -------------------------------------------------------------

def check_frame_lemma(r: PreProb, seeds: Sequence[int]) -> CheckReport:
    """Gauge invariance of semantic frames, dimension constancy, nonzero
    frame values, and frame agreement forcing global agreement."""
    universe = r.universe
    dim = semantic_dimension(r)
    base_frame = canonical_frame(r)
    atoms = list(range(universe.atom_count))
    cases = 0
    for seed in seeds:
        rng = random.Random(seed)
        gauge = random_gauge(rng, r.basis.dimension)
        gauged = apply_gauge(r, gauge)
        cases += 1
        witness = {"seed": seed, "gauge": [[format_rational(x) for x in row] for row in gauge.matrix]}
        if semantic_dimension(gauged) != dim:
            return CheckReport("frame-lemma", False, cases, {**witness, "reason": "dimension changed"})
        gauged_frame = canonical_frame(gauged)
        if gauged_frame.statements != base_frame.statements:
            return CheckReport("frame-lemma", False, cases, {**witness, "reason": "canonical frame moved"})
        if any(v.is_zero() for v in gauged_frame.values):
            return CheckReport("frame-lemma", False, cases, {**witness, "reason": "zero-valued frame statement"})
        # independence pattern over every atom subset is gauge invariant
        for size in range(1, len(atoms) + 1):
            for subset in itertools.combinations(atoms, size):
                before = q_rank([r.atomic[i] for i in subset])
                after = q_rank([gauged.atomic[i] for i in subset])
                if before != after:
                    return CheckReport(
                        "frame-lemma",
                        False,
                        cases,
                        {**witness, "reason": "rank pattern changed", "subset": list(subset)},
                    )
        # matching the gauged valuation on the frame recovers it everywhere
        frame_values = [gauged(s) for s in base_frame.statements]
        rebuilt = []
        for i in atoms:
            coords = q_coords(gauged.atomic[i], frame_values)
            combined = r.basis.zero()
            for q, original in zip(coords, base_frame.values):
                combined = combined + original.scale(q)
            rebuilt.append(combined)
        if tuple(rebuilt) != r.atomic:
            return CheckReport(
                "frame-lemma", False, cases, {**witness, "reason": "frame agreement did not force global agreement"}
            )
    return CheckReport("frame-lemma", True, cases)


# -- the desk-scale representation check -----------------------------------------

@dataclass(frozen=True)
class GaugeTable:
    """A finite bijection between sampled values and their transformed images.

    The forward direction feeds the additive side; the backward direction
    recovers the untransformed valuation.  The transformed side must contain
    zero (the image of the always-false statement).
    """

    pairs: tuple[tuple[SemValue, SemValue], ...]

    def __post_init__(self) -> None:
        domain = [v for v, _ in self.pairs]
        image = [r for _, r in self.pairs]
        if len(set(domain)) != len(domain) or len(set(image)) != len(image):
            raise ValueError("gauge table must be a bijection")
        if not any(r.is_zero() for r in image):
            raise ValueError("gauge table must cover zero on the transformed side")

    @staticmethod
    def identity(values: Sequence[SemValue]) -> "GaugeTable":
        return GaugeTable(tuple((v, v) for v in values))

    def forward(self, v: SemValue) -> SemValue:
        for dom, img in self.pairs:
            if dom == v:
                return img
        raise TableIncomplete(f"value {v!r} missing from the table domain")

    def backward(self, r: SemValue) -> SemValue:
        for dom, img in self.pairs:
            if img == r:
                return dom
        raise TableIncomplete(f"value {r!r} missing from the table image")

    def neutral(self) -> SemValue:
        zero = next(img for _, img in self.pairs if img.is_zero())
        return self.backward(zero)


def check_representation(
    table: GaugeTable, r: PreProb, value_table: Optional[ValueTable] = None
) -> CheckReport:
    """Desk-scale additive representation check.

    Transport the valuation backward through the table and verify that the
    induced binary composition reproduces it on every disjoint join, and that
    the composition is a commutative monoid with the transported zero as
    neutral element on the sampled values.  Cancellativity and divisibility
    hold on all of the value space but are only sampled here.
    """
    value = _table_for(r, value_table)
    universe = r.universe
    cases = 0

    def compose(x: SemValue, y: SemValue) -> SemValue:
        return table.backward(table.forward(x) + table.forward(y))

    untransformed = {}
    for s in enumerate_statements(universe):
        untransformed[s] = table.backward(value(s))
    for s in enumerate_statements(universe):
        complement_bits = universe.top().bits & ~s.bits
        t_bits = complement_bits
        while True:
            t = Statement(t_bits, s.width)
            joined = Statement(s.bits | t_bits, s.width)
            cases += 1
            if untransformed[joined] != compose(untransformed[s], untransformed[t]):
                return CheckReport(
                    "representation",
                    False,
                    cases,
                    {
                        "s": _stmt_doc(universe, s),
                        "t": _stmt_doc(universe, t),
                        "reason": "composition disagrees with the join",
                    },
                )
            if t_bits == 0:
                break
            t_bits = (t_bits - 1) & complement_bits

    sample = [dom for dom, _ in table.pairs]
    neutral = table.neutral()
    for x in sample:
        cases += 1
        try:
            if compose(x, neutral) != x:
                return CheckReport(
                    "representation", False, cases,
                    {"x": _value_doc(x), "reason": "neutral element fails"},
                )
        except TableIncomplete:
            pass  # the neutral sum left the sample; nothing to test
    for x, y in itertools.combinations(sample, 2):
        cases += 1
        try:
            if compose(x, y) != compose(y, x):
                return CheckReport(
                    "representation", False, cases,
                    {"x": _value_doc(x), "y": _value_doc(y), "reason": "commutativity fails"},
                )
        except TableIncomplete:
            continue
    for x, y, z in itertools.combinations(sample, 3):
        cases += 1
        try:
            if compose(compose(x, y), z) != compose(x, compose(y, z)):
                return CheckReport(
                    "representation", False, cases,
                    {
                        "x": _value_doc(x),
                        "y": _value_doc(y),
                        "z": _value_doc(z),
                        "reason": "associativity fails",
                    },
                )
        except TableIncomplete:
            continue
    return CheckReport(
        "representation", True, cases,
        notes=("cancellativity and divisibility sampled, not universal",),
    )


# -- seeded random generators -----------------------------------------------------

def random_rational(rng: random.Random, span: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def random_preprob(rng: random.Random, universe: Universe, basis: Basis) -> PreProb:
    atomic = tuple(
        SemValue(basis, tuple(random_rational(rng) for _ in range(basis.dimension)))
        for _ in range(universe.atom_count)
    )
    return PreProb(universe, basis, atomic)


def random_quasi(rng: random.Random, universe: Universe) -> QuasiProb:
    """A random rational quasi-probability: the last atom absorbs the rest."""
    head = [random_rational(rng) for _ in range(universe.atom_count - 1)]
    last = Fraction(1) - sum(head, ZERO)
    return QuasiProb(universe, tuple(head + [last]))


def random_probability(rng: random.Random, universe: Universe) -> QuasiProb:
    weights = [Fraction(rng.randint(0, 9)) for _ in range(universe.atom_count)]
    total = sum(weights, ZERO)
    if total == 0:
        return QuasiProb(
            universe,
            tuple(Fraction(1, universe.atom_count) for _ in range(universe.atom_count)),
        )
    return QuasiProb(universe, tuple(w / total for w in weights))


def random_gauge(rng: random.Random, dim: int) -> GaugeMap:
    while True:
        rows = [
            [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(dim)]
            for _ in range(dim)
        ]
        try:
            return GaugeMap.from_rows(rows)
        except SingularMatrix:
            continue


def random_partition(rng: random.Random, universe: Universe) -> Partition:
    n = universe.atom_count
    k = rng.randint(1, n)
    assignment = [rng.randrange(k) for _ in range(n)]
    cells = []
    for cell_id in range(k):
        bits = 0
        for i, a in enumerate(assignment):
            if a == cell_id:
                bits |= 1 << i
        if bits:
            cells.append(Statement(bits, n))
    return Partition.of(universe, cells)


def random_statement(rng: random.Random, universe: Universe) -> Statement:
    return Statement(rng.randrange(1 << universe.atom_count), universe.atom_count)


def random_universe(rng: random.Random, min_atoms: int = 2, max_atoms: int = 5) -> Universe:
    n = rng.randint(min_atoms, max_atoms)
    return Universe(tuple(f"a{i}" for i in range(n)))


# -- stability of the classical regime ---------------------------------------------

def check_stability_suite(seed: int, rounds: int = 50) -> CheckReport:
    """Probabilities restrict to probabilities and satisfy the total rule;
    an engineered zero-margin quasi-probability fails to relativise."""
    rng = random.Random(seed)
    cases = 0
    for _ in range(rounds):
        universe = random_universe(rng)
        p = random_probability(rng, universe)
        for t in enumerate_statements(universe):
            if t.is_bottom():
                continue
            cases += 1
            relative = relative_probability(p, t)
            if not is_probability(relative):
                return CheckReport(
                    "stability",
                    False,
                    cases,
                    {"p": p.to_mapping(), "t": _stmt_doc(universe, t)},
                )
        partition = random_partition(rng, universe)
        for _ in range(4):
            s = random_statement(rng, universe)
            cases += 1
            if total_probability(p, partition, s) != p(s):
                return CheckReport(
                    "stability",
                    False,
                    cases,
                    {
                        "p": p.to_mapping(),
                        "cells": [_stmt_doc(universe, c) for c in partition.cells],
                        "s": _stmt_doc(universe, s),
                    },
                )
        # engineered unstable margin: cancel two atoms, conditioning on them fails
        if universe.atom_count >= 3:
            v = random_rational(rng)
            if v != 0:
                atoms = [v, -v] + [ZERO] * (universe.atom_count - 3) + [Fraction(1)]
                unstable = QuasiProb(universe, tuple(atoms))
                margin = Statement(0b11, universe.atom_count)
                cases += 1
                try:
                    relative_quasi(unstable, margin)
                except RelativisationUnstable:
                    restriction = relative_preprob(
                        unstable.as_preprob(Basis(("1",))), margin
                    )
                    if restriction.is_invariant():
                        return CheckReport(
                            "stability", False, cases,
                            {"q": unstable.to_mapping(), "reason": "restriction vanished"},
                        )
                else:
                    return CheckReport(
                        "stability",
                        False,
                        cases,
                        {"q": unstable.to_mapping(), "reason": "normalised a zero margin"},
                    )
    return CheckReport("stability", True, cases)


# -- the full suite -------------------------------------------------------------------

def _child_seed(root_seed: int, name: str) -> int:
    return root_seed ^ zlib.crc32(name.encode())


def _example_valuation() -> PreProb:
    """The running two-binary-variables example with a vanishing margin."""
    from .lattice import product_universe

    universe = product_universe([2, 2], ["A", "B"])
    basis = Basis(("1",))
    atomic = tuple(
        basis.from_rational(q)
        for q in (Fraction(3, 10), Fraction(-3, 10), Fraction(3, 5), Fraction(2, 5))
    )
    return PreProb(universe, basis, atomic)


def _irrational_valuation() -> PreProb:
    basis = Basis(
        ("1", "sqrt2"),
        (
            ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(0))),
            ((Fraction(707, 500), Fraction(283, 200)), (Fraction(0), Fraction(0))),
        ),
    )
    universe = Universe(("a", "b"))
    atomic = (
        SemValue(basis, (Fraction(1, 2), Fraction(-1, 10))),
        SemValue(basis, (Fraction(1, 2), Fraction(1, 10))),
    )
    return PreProb(universe, basis, atomic)


def _corrupted_table(r: PreProb) -> dict[Statement, SemValue]:
    """Break additivity at the top by a unit bump; used by the mutation checks."""
    table = {s: r(s) for s in enumerate_statements(r.universe)}
    top = r.universe.top()
    table[top] = table[top] + r.basis.from_rational(1)
    return table


def _miswired_table(r: PreProb) -> dict[Statement, SemValue]:
    """Send the top to an atom's value: stays inside any table image that
    covers the honest values, but additivity is broken."""
    table = {s: r(s) for s in enumerate_statements(r.universe)}
    table[r.universe.top()] = r(r.universe.atom(0))
    return table


def _meta(name: str, inner: CheckReport) -> CheckReport:
    """A mutation check passes exactly when the inner check fails."""
    if inner.passed:
        return CheckReport(name, False, inner.cases_run, {"reason": "corruption went undetected"})
    return CheckReport(name, True, inner.cases_run, notes=("corruption detected as expected",))


def run_suite(root_seed: int = 0) -> list[CheckReport]:
    """Run every check deterministically; reports come back sorted by name."""
    reports: list[CheckReport] = []
    example = _example_valuation()
    irrational = _irrational_valuation()
    rng = random.Random(_child_seed(root_seed, "suite"))
    randoms = [
        random_preprob(rng, random_universe(rng, 2, 4), Basis(("1", "x"))) for _ in range(3)
    ]

    additivity_targets = [example, irrational, *randoms]
    merged_cases = 0
    for r in additivity_targets:
        report = check_additivity(r)
        merged_cases += report.cases_run
        if not report.passed:
            reports.append(report)
            break
    else:
        reports.append(CheckReport("additivity", True, merged_cases))

    merged_cases = 0
    for r in additivity_targets:
        report = check_negation(r)
        merged_cases += report.cases_run
        if not report.passed:
            reports.append(report)
            break
    else:
        reports.append(CheckReport("negation", True, merged_cases))

    uniform = PreProb(
        example.universe,
        example.basis,
        tuple(example.basis.from_rational(Fraction(1, 4)) for _ in range(4)),
    )
    reports.append(check_levels(uniform))

    frame_rng = random.Random(_child_seed(root_seed, "frame"))
    frame_seeds = [frame_rng.randrange(1 << 30) for _ in range(25)]
    wide = random_preprob(
        frame_rng, Universe(("a", "b", "c", "d")), Basis(("1", "x"))
    )
    merged_cases = 0
    for r in (irrational, wide):
        report = check_frame_lemma(r, frame_seeds)
        merged_cases += report.cases_run
        if not report.passed:
            reports.append(report)
            break
    else:
        reports.append(CheckReport("frame-lemma", True, merged_cases))

    sample = sorted({uniform(s) for s in enumerate_statements(uniform.universe)},
                    key=lambda v: v.coeffs)
    reports.append(check_representation(GaugeTable.identity(sample), uniform))

    reports.append(check_stability_suite(_child_seed(root_seed, "stability")))

    reports.append(_meta(
        "additivity-mutation",
        check_additivity(example, table=_corrupted_table(example)),
    ))
    reports.append(_meta(
        "representation-mutation",
        check_representation(
            GaugeTable.identity(sample), uniform, value_table=_miswired_table(uniform)
        ),
    ))
    return sorted(reports, key=lambda rep: rep.name)
