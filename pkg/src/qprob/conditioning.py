"""Relativisation, synchronisation and the conditional calculus.

Pre-probabilities restrict to any ideal without obstruction.  Normalised
quasi-probabilities do not: conditioning on a statement of value zero has no
normalised representative unless the whole restriction vanishes.  The three
cell kinds (stable / unstable / invariant) make that trichotomy explicit in
the types, so the total rules and the generalised Bayes identities never
divide by zero silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    BottomIdeal,
    DependentFrame,
    NonInjectiveGauge,
    NotAProbability,
    NotBelow,
    RelativisationUnstable,
    WidthMismatch,
    ZeroAnchor,
    ZeroDivisor,
)
from .lattice import Partition, Statement, Universe, leq, localise, meet
from .valuation import PreProb, QuasiProb, is_probability
from .values import Basis, SemValue, ZERO, q_coords, q_independent, q_rank, sv_ratio


# -- the ideal of t, viewed as a universe in its own right --------------------

def ideal_universe(universe: Universe, t: Statement) -> Universe:
    """The relative universe at t, with the atom labels below t."""
    if t.width != universe.atom_count:
        raise WidthMismatch("statement from a different universe")
    if t.is_bottom():
        raise BottomIdeal("the ideal of bottom has no atoms")
    return Universe(tuple(universe.atom_labels[i] for i in t.atoms()))


def project_to_ideal(s: Statement, t: Statement) -> Statement:
    """Re-index a statement below t onto the atoms of the ideal of t."""
    if not leq(s, t):
        raise NotBelow("project only statements below the ideal top")
    bits = 0
    for k, i in enumerate(t.atoms()):
        if s.bits >> i & 1:
            bits |= 1 << k
    return Statement(bits, t.level)


def embed_from_ideal(s_local: Statement, t: Statement) -> Statement:
    """Send a statement of the ideal-as-universe back into the ambient one."""
    if s_local.width != t.level:
        raise WidthMismatch("statement does not belong to this ideal")
    bits = 0
    for k, i in enumerate(t.atoms()):
        if s_local.bits >> k & 1:
            bits |= 1 << i
    return Statement(bits, t.width)


@dataclass(frozen=True)
class LocalPreProb:
    """A pre-probability on the ideal of t, kept in ambient atom coordinates.

    ``values[k]`` belongs to the k-th atom below t (ascending atom index).
    Evaluation localises first, so the object doubles as the conditional
    pre-probability on the whole ambient universe.
    """

    universe: Universe
    basis: Basis
    t: Statement
    values: tuple[SemValue, ...]

    def __post_init__(self) -> None:
        if self.t.width != self.universe.atom_count:
            raise WidthMismatch("ideal top from a different universe")
        if self.t.is_bottom():
            raise BottomIdeal("cannot carry a valuation on the empty ideal")
        if len(self.values) != self.t.level:
            raise WidthMismatch("one value per atom below the ideal top")

    @property
    def atom_indices(self) -> tuple[int, ...]:
        return tuple(self.t.atoms())

    def __call__(self, s: Statement) -> SemValue:
        """The conditional value: evaluate the restriction at s AND t."""
        projected = localise(s, self.t)
        total = self.basis.zero()
        for k, i in enumerate(self.atom_indices):
            if projected.bits >> i & 1:
                total = total + self.values[k]
        return total

    def top_value(self) -> SemValue:
        total = self.basis.zero()
        for v in self.values:
            total = total + v
        return total

    def is_invariant(self) -> bool:
        return all(v.is_zero() for v in self.values)


def relative_preprob(r: PreProb, t: Statement) -> LocalPreProb:
    """Restrict to the ideal of t; always succeeds for non-bottom t."""
    if t.is_bottom():
        raise BottomIdeal("cannot restrict to the ideal of bottom")
    if t.width != r.universe.atom_count:
        raise WidthMismatch("statement from a different universe")
    return LocalPreProb(
        r.universe, r.basis, t, tuple(r.atomic[i] for i in t.atoms())
    )


def conditional_preprob(local: LocalPreProb, s: Statement) -> SemValue:
    """The conditional pre-probability of s given the local top."""
    return local(s)


@dataclass(frozen=True)
class FrameAssignment:
    """Ambient values for the statements of a local semantic frame."""

    pairs: tuple[tuple[Statement, SemValue], ...]


def local_frame_statements(local: LocalPreProb) -> list[Statement]:
    """A canonical semantic frame of a local valuation: atoms below the top,
    in ascending index, greedily kept while their values stay independent."""
    statements: list[Statement] = []
    values: list[SemValue] = []
    for k, i in enumerate(local.atom_indices):
        candidate = local.values[k]
        if q_rank(values + [candidate]) == len(values) + 1:
            statements.append(Statement(1 << i, local.t.width))
            values.append(candidate)
    return statements


def identity_assignment(local: LocalPreProb) -> FrameAssignment:
    """The assignment that declares the local values themselves ambient;
    synchronising against it is a no-op."""
    statements = local_frame_statements(local)
    return FrameAssignment(tuple((s, local(s)) for s in statements))


def ambient_assignment(local: LocalPreProb, ambient: PreProb) -> FrameAssignment:
    """Ambient values for a canonical frame of the local valuation; this is
    the data one agent must receive to synchronise with the ambient one."""
    statements = local_frame_statements(local)
    return FrameAssignment(tuple((s, ambient(s)) for s in statements))


def synchronize(local: LocalPreProb, frame: FrameAssignment) -> LocalPreProb:
    """Regauge a local valuation to match given ambient frame values.

    The frame statements must form a semantic frame of the local valuation;
    reading off the rational coordinates of each atom in the local frame and
    recombining them with the ambient values is exactly the gauge that makes
    the two representations agree.  When the ambient values come from an
    actual ambient valuation, the result is its honest restriction.
    """
    statements = [s for s, _ in frame.pairs]
    ambient_values = [v for _, v in frame.pairs]
    for s in statements:
        if not leq(s, local.t):
            raise NotBelow("frame statement outside the ideal")
    local_values = [local(s) for s in statements]
    if q_rank(local_values) != len(local_values):
        raise DependentFrame("frame values are rationally dependent")
    if len(local_values) != q_rank(local.values):
        raise DependentFrame("frame is not maximal for the local valuation")
    if not q_independent(ambient_values):
        raise NonInjectiveGauge("ambient frame values are rationally dependent")
    if not statements:
        # the invariant valuation is fixed by every gauge
        return local
    target_basis = ambient_values[0].basis
    new_values = []
    for v in local.values:
        coords = q_coords(v, local_values)
        combined = target_basis.zero()
        for q, ambient in zip(coords, ambient_values):
            combined = combined + ambient.scale(q)
        new_values.append(combined)
    return LocalPreProb(local.universe, target_basis, local.t, tuple(new_values))


def total_preprob(
    cells: Partition,
    locals_with_frames: Sequence[tuple[LocalPreProb, FrameAssignment]],
    s: Statement,
) -> SemValue:
    """The rule of total pre-probability: synchronise every cell's local
    valuation, then add the conditional values of s across the cells.

    When every frame assignment restricts one ambient valuation, the result
    equals that valuation at s exactly.
    """
    if len(cells.cells) != len(locals_with_frames):
        raise ValueError("one local valuation per partition cell")
    total: SemValue | None = None
    for cell, (local, frame) in zip(cells.cells, locals_with_frames):
        if local.t != cell:
            raise ValueError("local valuation does not live on its cell")
        synced = synchronize(local, frame)
        contribution = synced(s)
        total = contribution if total is None else total + contribution
    assert total is not None
    return total


# -- quasi-probability conditioning -------------------------------------------

def relative_quasi(q: QuasiProb, t: Statement) -> QuasiProb:
    """The normalised restriction of q to the ideal of t.

    Fails with RelativisationUnstable when q(t) is zero but the restriction
    is not identically zero: no gauge can normalise it, and the caller must
    fall back to the relative pre-probability.  An identically zero
    restriction is the invariant valuation and is returned as the zero
    quasi-probability.
    """
    if t.width != q.universe.atom_count:
        raise WidthMismatch("statement from a different universe")
    if t.is_bottom():
        raise BottomIdeal("cannot condition on the bottom statement")
    weight = q(t)
    below = list(t.atoms())
    sub = ideal_universe(q.universe, t)
    if weight == 0:
        if any(q.atomic[i] != 0 for i in below):
            raise RelativisationUnstable(
                "conditioning statement has value zero but the restriction "
                "does not vanish"
            )
        return QuasiProb.zero(sub)
    return QuasiProb(sub, tuple(q.atomic[i] / weight for i in below))


def conditional_quasi(q: QuasiProb, s: Statement, t: Statement) -> Fraction:
    """The conditional quasi-probability of s given t."""
    relative = relative_quasi(q, t)
    return relative(project_to_ideal(meet(s, t), t))


# -- the three cell kinds of the total rules ----------------------------------

@dataclass(frozen=True)
class StableCell:
    """A cell whose restriction normalises: a conditional quasi-probability
    together with the ambient weight of the cell."""

    cond: QuasiProb
    weight: Fraction

    def __post_init__(self) -> None:
        if self.weight == 0:
            raise ValueError("a stable cell must carry a nonzero weight")


@dataclass(frozen=True)
class UnstableCell:
    """A cell with zero local top but a nonzero restriction: only the local
    pre-probability plus one ambient reference value (the anchor) is known."""

    local: LocalPreProb
    anchor: Statement
    anchor_ambient: Fraction

    def __post_init__(self) -> None:
        if not self.local.top_value().is_zero():
            raise ValueError("an unstable cell has local top value zero")
        if not leq(self.anchor, self.local.t):
            raise NotBelow("anchor must lie in the ideal")
        if self.local(self.anchor).is_zero():
            raise ZeroAnchor("anchor carries local value zero")
        if self.anchor_ambient == 0:
            raise ZeroAnchor("anchor carries ambient value zero")


@dataclass(frozen=True)
class InvariantCell:
    """A cell whose restriction is identically zero; it is already
    synchronised and contributes nothing."""


CellData = StableCell | UnstableCell | InvariantCell


def cell_case(data: CellData) -> str:
    if isinstance(data, StableCell):
        return "stable"
    if isinstance(data, UnstableCell):
        return "unstable"
    return "invariant"


def total_quasi(
    cells: Partition, data: Sequence[CellData], s: Statement
) -> Fraction:
    """The mixed rule of total quasi/pre-probability.

    Stable cells contribute conditional times weight; unstable cells rescale
    their local value through the anchor (the ratio is rational because the
    local valuation has dimension one along the anchor); invariant cells
    contribute zero.
    """
    if len(cells.cells) != len(data):
        raise ValueError("one cell datum per partition cell")
    total = ZERO
    for cell, datum in zip(cells.cells, data):
        if isinstance(datum, StableCell):
            if datum.cond.universe.atom_count != cell.level:
                raise ValueError("stable cell datum lives on the wrong cell")
            local_statement = project_to_ideal(meet(s, cell), cell)
            total += datum.cond(local_statement) * datum.weight
        elif isinstance(datum, UnstableCell):
            if datum.local.t != cell:
                raise ValueError("unstable cell datum lives on the wrong cell")
            ratio = sv_ratio(datum.local(s), datum.local(datum.anchor))
            total += ratio * datum.anchor_ambient
        # invariant cells contribute zero
    return total


# -- generalised Bayes ---------------------------------------------------------

def bayes_stable(q: QuasiProb, t_a: Statement, t_b: Statement) -> Fraction:
    """Bayes with both weights nonzero: q(t_b | t_a) from the inverse
    conditional, exactly as in the classical identity."""
    weight_a = q(t_a)
    weight_b = q(t_b)
    if weight_a == 0 or weight_b == 0:
        raise ZeroDivisor("both conditioning statements need nonzero weight")
    inverse_conditional = conditional_quasi(q, t_a, t_b)
    result = inverse_conditional * weight_b / weight_a
    direct = conditional_quasi(q, t_b, t_a)
    assert result == direct, "Bayes inversion disagrees with the direct conditional"
    return result


def bayes_mixed(
    local: LocalPreProb,
    anchor: Statement,
    anchor_ambient: Fraction,
    cond_other: Fraction,
    weight_other: Fraction,
) -> SemValue:
    """Bayes when the conditioning cell is unstable.

    The inverse gauge is fixed by a single reference value: the anchor's
    local value over its ambient one.  The output is the conditional value
    in the local representation,

        local(anchor) * cond_other * weight_other / anchor_ambient.

    The local valuation must be rationally proportional to its anchor value,
    which is exactly semantic dimension one.
    """
    if not leq(anchor, local.t):
        raise NotBelow("anchor must lie in the ideal")
    anchor_value = local(anchor)
    if anchor_value.is_zero():
        raise ZeroAnchor("anchor carries local value zero")
    if anchor_ambient == 0:
        raise ZeroAnchor("anchor carries ambient value zero")
    for value in local.values:
        sv_ratio(value, anchor_value)  # NotProportional above dimension one
    return anchor_value.scale(cond_other * weight_other / anchor_ambient)


def bayes_invariant() -> Fraction:
    """Bayes when the conditioning cell carries the invariant valuation:
    every conditional is zero."""
    return ZERO


# -- the classical regime -------------------------------------------------------

def relative_probability(p: QuasiProb, t: Statement) -> QuasiProb:
    """Restrict a probability; stability makes this total.

    A zero-weight statement forces the whole restriction to zero by
    non-negativity, so the invariant valuation is returned rather than an
    error: probabilities never leave the probabilistic representation.
    """
    if not is_probability(p):
        raise NotAProbability("relative probability needs non-negative input")
    if t.is_bottom():
        raise BottomIdeal("cannot condition on the bottom statement")
    if p(t) == 0:
        return QuasiProb.zero(ideal_universe(p.universe, t))
    return relative_quasi(p, t)


def probability_cells(p: QuasiProb, cells: Partition) -> list[CellData]:
    """Cell data induced by a probability: stable or invariant, never mixed."""
    if not is_probability(p):
        raise NotAProbability("cell data from a probability input only")
    data: list[CellData] = []
    for cell in cells.cells:
        weight = p(cell)
        if weight == 0:
            data.append(InvariantCell())
        else:
            data.append(StableCell(relative_quasi(p, cell), weight))
    return data


def total_probability(p: QuasiProb, cells: Partition, s: Statement) -> Fraction:
    """The classical rule of total probability, as the stable/invariant
    specialisation of the mixed rule."""
    return total_quasi(cells, probability_cells(p, cells), s)


def bayes_classical(p: QuasiProb, t_a: Statement, t_b: Statement) -> Fraction:
    """Classical Bayes: the stable case applied to a probability."""
    if not is_probability(p):
        raise NotAProbability("classical Bayes needs a probability input")
    return bayes_stable(p, t_a, t_b)
