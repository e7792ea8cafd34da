"""Additive valuations on a universe and their canonical representatives.

A pre-probability stores one value per atom; every other statement gets the
sum of its atoms, so additivity is structural and never re-checked at use
sites.  A quasi-probability is the canonical rational representative with
value one at the top (or identically zero).  Semantic frames track the
rational-independence structure that survives gauge reparametrisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    BasisMismatch,
    BottomNotZero,
    DependentFrame,
    HigherDimension,
    Inconsistent,
    TopIsZero,
    Underdetermined,
    WidthMismatch,
)
from .lattice import Statement, Universe, enumerate_statements
from .values import (
    Basis,
    GaugeMap,
    SemValue,
    ZERO,
    q_coords,
    q_independent,
    q_rank,
    solve_exact,
    sv_ratio,
)

#: an incomplete assignment of values to statements; bottom must map to zero
PartialValuation = Mapping[Statement, SemValue]


@dataclass(frozen=True)
class PreProb:
    """A finitely additive valuation, determined by its atomic values."""

    universe: Universe
    basis: Basis
    atomic: tuple[SemValue, ...]

    def __post_init__(self) -> None:
        if len(self.atomic) != self.universe.atom_count:
            raise WidthMismatch("one atomic value per atom is required")
        for v in self.atomic:
            if v.basis != self.basis:
                raise BasisMismatch("atomic value over a foreign basis")

    def __call__(self, s: Statement) -> SemValue:
        """Evaluate by additivity: the sum of the atomic values below s."""
        if s.width != self.universe.atom_count:
            raise WidthMismatch("statement from a different universe")
        total = self.basis.zero()
        for i in s.atoms():
            total = total + self.atomic[i]
        return total

    def top_value(self) -> SemValue:
        return self(self.universe.top())

    def is_invariant(self) -> bool:
        """True for the identically zero valuation, fixed by every gauge."""
        return all(v.is_zero() for v in self.atomic)

    def to_mapping(self) -> dict:
        return {
            "atoms": list(self.universe.atom_labels),
            "basis": list(self.basis.symbols),
            "values": {
                label: value.to_mapping()
                for label, value in zip(self.universe.atom_labels, self.atomic)
            },
        }


@dataclass(frozen=True)
class QuasiProb:
    """The canonical dimension-one representative: rational atomic values
    summing to one, or the invariant (all-zero) valuation."""

    universe: Universe
    atomic: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.atomic) != self.universe.atom_count:
            raise WidthMismatch("one atomic value per atom is required")
        total = sum(self.atomic, ZERO)
        if total != 1 and any(q != 0 for q in self.atomic):
            raise ValueError("quasi-probability must sum to 1 or be zero")

    @staticmethod
    def zero(universe: Universe) -> "QuasiProb":
        return QuasiProb(universe, (ZERO,) * universe.atom_count)

    def __call__(self, s: Statement) -> Fraction:
        if s.width != self.universe.atom_count:
            raise WidthMismatch("statement from a different universe")
        return sum((self.atomic[i] for i in s.atoms()), ZERO)

    def is_zero(self) -> bool:
        return all(q == 0 for q in self.atomic)

    def as_preprob(self, basis: Basis) -> PreProb:
        return PreProb(
            self.universe, basis, tuple(basis.from_rational(q) for q in self.atomic)
        )

    def to_mapping(self) -> dict[str, str]:
        from .values import format_rational

        return {
            label: format_rational(q)
            for label, q in zip(self.universe.atom_labels, self.atomic)
        }


@dataclass(frozen=True)
class SemanticFrame:
    """Statements whose values form a maximal rationally independent set."""

    statements: tuple[Statement, ...]
    values: tuple[SemValue, ...]

    def __post_init__(self) -> None:
        if len(self.statements) != len(self.values):
            raise ValueError("one value per frame statement")

    def __len__(self) -> int:
        return len(self.statements)


def apply_gauge(r: PreProb, gauge: GaugeMap) -> PreProb:
    """Reparametrise by an invertible rational map on coefficients.

    The result is again additive, and evaluation commutes with the gauge.
    """
    return PreProb(r.universe, r.basis, tuple(gauge.apply(v) for v in r.atomic))


def semantic_dimension(r: PreProb) -> int:
    """The size of every semantic frame: the rank of the atomic values."""
    return q_rank(r.atomic)


def canonical_frame(r: PreProb, include_top: bool = False) -> SemanticFrame:
    """The deterministic frame: top first (when requested), then atoms in
    ascending index, each kept when it preserves rational independence."""
    statements: list[Statement] = []
    values: list[SemValue] = []
    if include_top:
        top_value = r.top_value()
        if top_value.is_zero():
            raise TopIsZero("cannot include a zero-valued top in a frame")
        statements.append(r.universe.top())
        values.append(top_value)
    for i in range(r.universe.atom_count):
        candidate = r.atomic[i]
        if q_rank(values + [candidate]) == len(values) + 1:
            statements.append(r.universe.atom(i))
            values.append(candidate)
    return SemanticFrame(tuple(statements), tuple(values))


def components_frame(r: PreProb, frame: SemanticFrame) -> list[PreProb]:
    """Split r along a frame: component k of a statement is its k-th rational
    coordinate times the k-th frame value.

    The components sum back to r exactly and each has semantic dimension one.
    """
    values = list(frame.values)
    if not q_independent(values) or len(values) != semantic_dimension(r):
        raise DependentFrame("statements do not form a semantic frame of r")
    for stmt, value in zip(frame.statements, frame.values):
        if r(stmt) != value:
            raise DependentFrame("frame values do not match the valuation")
    per_atom = [q_coords(v, values) for v in r.atomic]
    components = []
    for k in range(len(values)):
        atomic = tuple(values[k].scale(per_atom[i][k]) for i in range(len(per_atom)))
        components.append(PreProb(r.universe, r.basis, atomic))
    return components


def components_basis(r: PreProb) -> list[PreProb]:
    """Split r along the declared basis directions, one component per symbol."""
    components = []
    for j in range(r.basis.dimension):
        atomic = []
        for v in r.atomic:
            coeffs = [ZERO] * r.basis.dimension
            coeffs[j] = v.coeffs[j]
            atomic.append(SemValue(r.basis, tuple(coeffs)))
        components.append(PreProb(r.universe, r.basis, tuple(atomic)))
    return components


def to_quasi(r: PreProb) -> QuasiProb:
    """Normalise a dimension-at-most-one valuation at the top.

    The invariant valuation maps to the zero quasi-probability.  A nonzero
    valuation with zero top admits no normalisation at all.
    """
    if r.is_invariant():
        return QuasiProb.zero(r.universe)
    if semantic_dimension(r) > 1:
        raise HigherDimension("use canonical_split above dimension one")
    top = r.top_value()
    if top.is_zero():
        raise TopIsZero("pure pre-probability: the top has value zero")
    return QuasiProb(r.universe, tuple(sv_ratio(v, top) for v in r.atomic))


def canonical_split(r: PreProb) -> tuple[QuasiProb, list[PreProb]]:
    """Split into the normalised quasi-probability plus top-zero rest.

    The frame is the canonical top-first frame; the quasi part is the
    top-coordinate function (so it always has value one at the top), and
    every residual component evaluates to zero at the top.  Scaling the
    quasi part by the top value and adding the residuals reconstructs r.
    """
    if r.is_invariant():
        return QuasiProb.zero(r.universe), []
    top = r.top_value()
    if top.is_zero():
        raise TopIsZero("pure pre-probability: the top has value zero")
    frame = canonical_frame(r, include_top=True)
    values = list(frame.values)
    per_atom = [q_coords(v, values) for v in r.atomic]
    quasi = QuasiProb(r.universe, tuple(coords[0] for coords in per_atom))
    rest = []
    for k in range(1, len(values)):
        atomic = tuple(values[k].scale(coords[k]) for coords in per_atom)
        rest.append(PreProb(r.universe, r.basis, atomic))
    for i, v in enumerate(r.atomic):
        rebuilt = top.scale(quasi.atomic[i])
        for component in rest:
            rebuilt = rebuilt + component.atomic[i]
        if rebuilt != v:
            raise AssertionError("canonical split failed to reconstruct")
    return quasi, rest


def is_probability(q: QuasiProb) -> bool:
    """All values non-negative; by additivity it is enough to look at atoms."""
    return all(value >= 0 for value in q.atomic)


def classify(r: PreProb) -> tuple[str, int]:
    """Name the most specific class of the valuation, with its dimension."""
    dim = semantic_dimension(r)
    if r.is_invariant():
        return "invariant", dim
    if dim == 1 and not r.top_value().is_zero():
        quasi = to_quasi(r)
        if is_probability(quasi):
            return "probability", dim
        return "quasi-probability", dim
    return "pre-probability", dim


def _constraint_rows(
    universe: Universe, basis: Basis, partial: PartialValuation
) -> tuple[list[list[Fraction]], list[list[Fraction]], list[Statement]]:
    bottom = universe.bottom()
    if bottom not in partial:
        raise BottomNotZero("partial valuation must assign the bottom statement")
    if not partial[bottom].is_zero():
        raise BottomNotZero("the bottom statement must be assigned zero")
    statements = sorted(partial.keys())
    rows = []
    for s in statements:
        if s.width != universe.atom_count:
            raise WidthMismatch("assigned statement from a different universe")
        value = partial[s]
        if value.basis != basis:
            raise BasisMismatch("assigned value over a foreign basis")
        rows.append(
            [Fraction(1 if s.bits >> i & 1 else 0) for i in range(universe.atom_count)]
        )
    rhs = [
        [partial[s].coeffs[j] for s in statements] for j in range(basis.dimension)
    ]
    return rows, rhs, statements


def extend_partial(
    universe: Universe, basis: Basis, partial: PartialValuation
) -> tuple[PreProb, int]:
    """Extend a partial valuation to a full one, or prove it inconsistent.

    Atomic values are the unknowns; each assignment is one additivity
    constraint per basis coordinate.  The returned extension sets every free
    atomic unknown to zero; the second result is how many were free.
    """
    rows, rhs, _ = _constraint_rows(universe, basis, partial)
    solved = solve_exact(rows, rhs)
    if solved is None:
        raise Inconsistent("assignments violate additivity")
    solutions, free = solved
    atomic = tuple(
        SemValue(basis, tuple(solutions[j][i] for j in range(basis.dimension)))
        for i in range(universe.atom_count)
    )
    return PreProb(universe, basis, atomic), free


def restrict_to(assignments: PartialValuation, r: PreProb) -> dict[Statement, SemValue]:
    """Evaluate r at exactly the statements of a partial valuation."""
    return {s: r(s) for s in assignments}


def deduce_missing(
    universe: Universe, basis: Basis, partial: PartialValuation
) -> SemValue:
    """The value forced by additivity at the single unassigned statement.

    Every statement of the universe except one non-bottom statement must be
    assigned; with at least two atoms the answer is always unique.
    """
    if universe.atom_count > 12:
        raise ValueError("deduction is a desk-scale operation (at most 12 atoms)")
    missing = [
        s for s in enumerate_statements(universe) if s not in partial
    ]
    if len(missing) != 1:
        raise ValueError(
            f"exactly one statement may be unassigned, found {len(missing)}"
        )
    target = missing[0]
    if target.is_bottom():
        raise BottomNotZero("the bottom statement is always assigned zero")
    extension, free = extend_partial(universe, basis, partial)
    if free > 0:
        # unreachable with >= 2 atoms: all other statements pin every atom
        raise Underdetermined("the remaining assignments do not force a value")
    return extension(target)
