"""Finite Boolean universes of statements.

A statement is a bitset over the atoms of its universe, so the Boolean
operations are single-word bitwise operations.  Universes are capped at 24
atoms; exhaustive enumeration is capped separately at 2^20 statements.

Sub-universes are represented by a block partition: the members are exactly
the unions of whole blocks.  An ideal is the special case of singleton
blocks below a top statement; a coarse-graining is the special case where
the blocks cover every atom.  Composite forms (ideals of coarse-grainings)
arise by restricting the block list.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import NotBelow, SizeCapExceeded, WidthMismatch

MAX_ATOMS = 24
MAX_ENUMERATION = 1 << 20


@dataclass(frozen=True, order=True)
class Statement:
    """A statement of an ``atom_count``-atom universe, as a bitset.

    Bit i is set exactly when atom i lies below the statement.  Ordering is
    by bitset value, which is the canonical report order.
    """

    bits: int
    width: int

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_ATOMS:
            raise SizeCapExceeded(f"width {self.width} outside 1..{MAX_ATOMS}")
        if not 0 <= self.bits < (1 << self.width):
            raise WidthMismatch("bits outside the declared width")

    @property
    def level(self) -> int:
        """Number of atoms below the statement (its level in the lattice)."""
        return self.bits.bit_count()

    def is_bottom(self) -> bool:
        return self.bits == 0

    def is_top(self) -> bool:
        return self.bits == (1 << self.width) - 1

    def atoms(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low


def _same_width(s: Statement, t: Statement) -> int:
    if s.width != t.width:
        raise WidthMismatch(f"widths differ: {s.width} vs {t.width}")
    return s.width


def join(s: Statement, t: Statement) -> Statement:
    return Statement(s.bits | t.bits, _same_width(s, t))


def meet(s: Statement, t: Statement) -> Statement:
    return Statement(s.bits & t.bits, _same_width(s, t))


def complement(s: Statement) -> Statement:
    mask = (1 << s.width) - 1
    return Statement(s.bits ^ mask, s.width)


def leq(s: Statement, t: Statement) -> bool:
    """s is below t, i.e. s AND t == s."""
    _same_width(s, t)
    return s.bits & t.bits == s.bits


def relative_complement(t: Statement, s: Statement) -> Statement:
    """The complement of s inside the ideal of t: t AND NOT s.

    Requires s below t; the result r satisfies s OR r == t and s AND r == 0,
    and the operation is an involution on the ideal.
    """
    if not leq(s, t):
        raise NotBelow("relative complement needs the statement below the top")
    return Statement(t.bits & ~s.bits, t.width)


def localise(s: Statement, t: Statement) -> Statement:
    """Project an ambient statement into the ideal of t: s AND t."""
    return meet(s, t)


@dataclass(frozen=True)
class Universe:
    """A finite Boolean lattice given by its atom labels."""

    atom_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.atom_labels)
        if not 1 <= n <= MAX_ATOMS:
            raise SizeCapExceeded(f"atom count {n} outside 1..{MAX_ATOMS}")
        if any(not label for label in self.atom_labels):
            raise ValueError("atom labels must be non-empty")
        if len(set(self.atom_labels)) != n:
            raise ValueError("atom labels must be distinct")

    @property
    def atom_count(self) -> int:
        return len(self.atom_labels)

    def bottom(self) -> Statement:
        return Statement(0, self.atom_count)

    def top(self) -> Statement:
        return Statement((1 << self.atom_count) - 1, self.atom_count)

    def atom(self, index: int) -> Statement:
        if not 0 <= index < self.atom_count:
            raise IndexError(f"atom index {index} out of range")
        return Statement(1 << index, self.atom_count)

    def atoms(self) -> Iterator[Statement]:
        return (self.atom(i) for i in range(self.atom_count))

    def statement_of_atoms(self, indices: Iterable[int]) -> Statement:
        bits = 0
        for i in indices:
            if not 0 <= i < self.atom_count:
                raise IndexError(f"atom index {i} out of range")
            bits |= 1 << i
        return Statement(bits, self.atom_count)

    def statement_of_labels(self, labels: Iterable[str]) -> Statement:
        index = {label: i for i, label in enumerate(self.atom_labels)}
        try:
            return self.statement_of_atoms(index[label] for label in labels)
        except KeyError as exc:
            raise ValueError(f"unknown atom label {exc.args[0]!r}") from None

    def labels_of(self, s: Statement) -> list[str]:
        """Canonical serialisation: the atom labels below s, in atom order."""
        if s.width != self.atom_count:
            raise WidthMismatch("statement from a different universe")
        return [self.atom_labels[i] for i in s.atoms()]

    def contains(self, s: Statement) -> bool:
        return s.width == self.atom_count


@dataclass(frozen=True)
class SubUniverse:
    """A Boolean sub-lattice: all unions of a fixed list of disjoint blocks.

    The local top is the union of the blocks; the local complement of a
    member is the union of the remaining blocks.  Singleton blocks below t
    give the ideal of t; blocks covering every atom give a coarse-graining.
    """

    universe: Universe
    blocks: tuple[Statement, ...]

    def __post_init__(self) -> None:
        seen = 0
        for block in self.blocks:
            if block.width != self.universe.atom_count:
                raise WidthMismatch("block from a different universe")
            if block.bits == 0:
                raise ValueError("blocks must be non-empty")
            if block.bits & seen:
                raise ValueError("blocks must be pairwise disjoint")
            seen |= block.bits
        object.__setattr__(
            self, "blocks", tuple(sorted(self.blocks, key=lambda b: b.bits))
        )

    @staticmethod
    def ideal(universe: Universe, t: Statement) -> "SubUniverse":
        """The relative universe at t: every statement below t."""
        if t.width != universe.atom_count:
            raise WidthMismatch("top statement from a different universe")
        singletons = tuple(Statement(1 << i, t.width) for i in t.atoms())
        return SubUniverse(universe, singletons)

    @staticmethod
    def coarse_grain(
        universe: Universe, blocks: Sequence[Iterable[int]]
    ) -> "SubUniverse":
        """The sub-lattice whose atoms are the given blocks of atom indices.

        The blocks must partition all atoms, so the sub-universe contains
        both the ambient bottom and top.
        """
        stmts = tuple(universe.statement_of_atoms(block) for block in blocks)
        sub = SubUniverse(universe, stmts)
        if sub.top() != universe.top():
            raise ValueError("coarse-grain blocks must cover every atom")
        return sub

    def top(self) -> Statement:
        bits = 0
        for block in self.blocks:
            bits |= block.bits
        return Statement(bits, self.universe.atom_count)

    def bottom(self) -> Statement:
        return self.universe.bottom()

    def contains(self, s: Statement) -> bool:
        """Membership: s is a union of whole blocks."""
        if s.width != self.universe.atom_count:
            return False
        if s.bits & ~self.top().bits:
            return False
        rest = s.bits
        for block in self.blocks:
            if rest & block.bits:
                if rest & block.bits != block.bits:
                    return False
                rest ^= block.bits
        return rest == 0

    def local_complement(self, s: Statement) -> Statement:
        if not self.contains(s):
            raise NotBelow("statement is not a member of the sub-universe")
        return Statement(self.top().bits & ~s.bits, s.width)

    def restrict(self, t: Statement) -> "SubUniverse":
        """The ideal of a member t inside this sub-universe (composite form)."""
        if not self.contains(t):
            raise NotBelow("restriction top must be a member")
        kept = tuple(b for b in self.blocks if leq(b, t))
        return SubUniverse(self.universe, kept)

    def __len__(self) -> int:
        return 1 << len(self.blocks)

    def members(self) -> Iterator[Statement]:
        return enumerate_statements(self)


def enumerate_statements(space: Universe | SubUniverse) -> Iterator[Statement]:
    """Every statement exactly once, in ascending bitset order.

    Bottom is always first; the top of the (sub-)universe is always last
    because it dominates every member bit-for-bit.
    """
    if isinstance(space, Universe):
        n = space.atom_count
        if (1 << n) > MAX_ENUMERATION:
            raise SizeCapExceeded(
                f"2^{n} statements exceed the enumeration cap 2^20"
            )
        width = n
        for bits in range(1 << n):
            yield Statement(bits, width)
        return
    blocks = space.blocks
    if (1 << len(blocks)) > MAX_ENUMERATION:
        raise SizeCapExceeded("sub-universe exceeds the enumeration cap 2^20")
    width = space.universe.atom_count
    values = []
    for choice in itertools.product((False, True), repeat=len(blocks)):
        bits = 0
        for picked, block in zip(choice, blocks):
            if picked:
                bits |= block.bits
        values.append(bits)
    for bits in sorted(values):
        yield Statement(bits, width)


@dataclass(frozen=True)
class Partition:
    """Pairwise disjoint non-bottom cells whose join is a declared top."""

    cells: tuple[Statement, ...]
    top: Statement

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("a partition needs at least one cell")
        seen = 0
        for cell in self.cells:
            _same_width(cell, self.top)
            if cell.bits == 0:
                raise ValueError("partition cells must be non-bottom")
            if cell.bits & seen:
                raise ValueError("partition cells must be pairwise disjoint")
            seen |= cell.bits
        if seen != self.top.bits:
            raise ValueError("partition cells must join to the declared top")

    @staticmethod
    def of(universe: Universe, cells: Sequence[Statement]) -> "Partition":
        return Partition(tuple(cells), universe.top())

    def localise(self, t: Statement) -> "Partition":
        """Project every cell into the ideal of t, dropping empty cells."""
        projected = tuple(
            localise(cell, t) for cell in self.cells if localise(cell, t).bits
        )
        return Partition(projected, localise(self.top, t))


@dataclass(frozen=True)
class ProductUniverse(Universe):
    """A universe whose atoms are joint outcomes of named finite variables.

    Atoms are labelled "A=0,B=1"; the event helper resolves strings such as
    "A=0" (a single outcome), "A=B" (two variables agree) and comma-joined
    conjunctions of those.
    """

    var_names: tuple[str, ...] = ()
    var_sizes: tuple[int, ...] = ()

    def outcome_of_atom(self, index: int) -> tuple[int, ...]:
        outcome = []
        rest = index
        for size in reversed(self.var_sizes):
            outcome.append(rest % size)
            rest //= size
        return tuple(reversed(outcome))

    def event(self, expression: str) -> Statement:
        """Resolve an event string to the join of all matching atoms."""
        clauses = [c.strip() for c in expression.split(",") if c.strip()]
        if not clauses:
            raise ValueError(f"empty event expression {expression!r}")
        position = {name: k for k, name in enumerate(self.var_names)}
        bits = 0
        for index in range(self.atom_count):
            outcome = self.outcome_of_atom(index)
            if all(
                self._matches(clause, outcome, position) for clause in clauses
            ):
                bits |= 1 << index
        return Statement(bits, self.atom_count)

    def _matches(
        self, clause: str, outcome: tuple[int, ...], position: dict[str, int]
    ) -> bool:
        left, eq, right = clause.partition("=")
        left = left.strip()
        right = right.strip()
        if not eq or left not in position:
            raise ValueError(f"cannot parse event clause {clause!r}")
        if right in position:
            return outcome[position[left]] == outcome[position[right]]
        try:
            value = int(right)
        except ValueError:
            raise ValueError(f"cannot parse event clause {clause!r}") from None
        if not 0 <= value < self.var_sizes[position[left]]:
            raise ValueError(f"outcome {value} out of range in {clause!r}")
        return outcome[position[left]] == value


def product_universe(
    sizes: Sequence[int], names: Sequence[str]
) -> ProductUniverse:
    """Build the universe of joint outcomes of finite variables.

    Atom order follows itertools.product on the outcome ranges, so the first
    variable varies slowest.  The atom count is the product of the sizes and
    must respect the 24-atom cap.
    """
    if len(sizes) != len(names):
        raise ValueError("one name per variable size")
    if len(set(names)) != len(names):
        raise ValueError("variable names must be distinct")
    if any(size < 2 for size in sizes):
        raise ValueError("variable sizes must be at least 2")
    total = 1
    for size in sizes:
        total *= size
    if total > MAX_ATOMS:
        raise SizeCapExceeded(
            f"{total} joint outcomes exceed the {MAX_ATOMS}-atom cap"
        )
    labels = []
    for outcome in itertools.product(*(range(size) for size in sizes)):
        labels.append(",".join(f"{n}={v}" for n, v in zip(names, outcome)))
    return ProductUniverse(
        atom_labels=tuple(labels),
        var_names=tuple(names),
        var_sizes=tuple(sizes),
    )
