"""The exact value space.

Values live in a finite-dimensional rational span over a user-declared list
of symbols (the first symbol is always the rational unit "1").  Everything
here is exact: coefficients are `fractions.Fraction`, linear algebra is
fraction Gaussian elimination, and gauges are invertible rational matrices
acting on coefficient vectors.

The declared symbols are *trusted* to be rationally independent; no attempt
is made to certify that (e.g. {1, sqrt2, sqrt8} would be accepted although
sqrt8 = 2*sqrt2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    BasisMismatch,
    ComplexValued,
    DependentFrame,
    DimensionMismatch,
    MissingEnclosure,
    NotInSpan,
    NotProportional,
    SingularMatrix,
    ZeroDivisor,
)

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

#: exact interval with rational endpoints: ((re_lo, re_hi), (im_lo, im_hi))
Enclosure = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

UNIT_SYMBOL = "1"
UNIT_ENCLOSURE: Enclosure = ((ONE, ONE), (ZERO, ZERO))


def parse_rational(text: str) -> Fraction:
    """Parse a "p/q" (or bare "p") string into an exact rational.

    Rejects anything else: floats, empty strings, zero denominators.
    """
    s = text.strip()
    num, slash, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if slash else 1
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(n, d)


def format_rational(q: Fraction) -> str:
    """Render a rational as "p/q", or "p" when the denominator is one."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Basis:
    """An ordered tuple of symbol names spanning the value space.

    Symbol 0 is the rational unit "1".  Each symbol may carry an optional
    exact enclosure used only for sign determination.
    """

    symbols: tuple[str, ...]
    enclosures: tuple[Optional[Enclosure], ...] = ()

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("basis needs at least the unit symbol")
        if self.symbols[0] != UNIT_SYMBOL:
            raise ValueError(f"symbol 0 must be {UNIT_SYMBOL!r}")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("basis symbols must be distinct")
        if any(not s for s in self.symbols):
            raise ValueError("basis symbols must be non-empty")
        encl = self.enclosures
        if not encl:
            encl = (UNIT_ENCLOSURE,) + (None,) * (len(self.symbols) - 1)
        if len(encl) != len(self.symbols):
            raise ValueError("one enclosure slot per symbol")
        if encl[0] != UNIT_ENCLOSURE:
            raise ValueError("the unit symbol has the exact enclosure [1,1]x[0,0]")
        for box in encl:
            if box is None:
                continue
            (re_lo, re_hi), (im_lo, im_hi) = box
            if re_lo > re_hi or im_lo > im_hi:
                raise ValueError("enclosure endpoints out of order")
        object.__setattr__(self, "enclosures", tuple(encl))

    @property
    def dimension(self) -> int:
        return len(self.symbols)

    def zero(self) -> "SemValue":
        return SemValue(self, (ZERO,) * self.dimension)

    def from_rational(self, q: Fraction | int) -> "SemValue":
        coeffs = [ZERO] * self.dimension
        coeffs[0] = Fraction(q)
        return SemValue(self, tuple(coeffs))

    def from_coeffs(self, coeffs: Sequence[Fraction | int]) -> "SemValue":
        if len(coeffs) != self.dimension:
            raise BasisMismatch(
                f"expected {self.dimension} coefficients, got {len(coeffs)}"
            )
        return SemValue(self, tuple(Fraction(c) for c in coeffs))


#: the rationals themselves, the default one-symbol span
RATIONAL_BASIS = Basis((UNIT_SYMBOL,))


@dataclass(frozen=True)
class SemValue:
    """A point of the value space: one rational coefficient per symbol."""

    basis: Basis
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.basis.dimension:
            raise BasisMismatch("coefficient count does not match basis size")

    def _check(self, other: "SemValue") -> None:
        if self.basis != other.basis:
            raise BasisMismatch("values live over different bases")

    def __add__(self, other: "SemValue") -> "SemValue":
        self._check(other)
        return SemValue(
            self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "SemValue") -> "SemValue":
        self._check(other)
        return SemValue(
            self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "SemValue":
        return SemValue(self.basis, tuple(-a for a in self.coeffs))

    def scale(self, q: Fraction | int) -> "SemValue":
        q = Fraction(q)
        return SemValue(self.basis, tuple(q * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def is_rational(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise NotProportional("value has irrational components")
        return self.coeffs[0]

    def to_mapping(self) -> dict[str, str]:
        """Serialise as {symbol: "p/q"}, omitting zero coefficients."""
        return {
            sym: format_rational(c)
            for sym, c in zip(self.basis.symbols, self.coeffs)
            if c != 0
        }

    @staticmethod
    def from_mapping(basis: Basis, mapping: dict[str, str]) -> "SemValue":
        coeffs = [ZERO] * basis.dimension
        for sym, text in mapping.items():
            try:
                j = basis.symbols.index(sym)
            except ValueError:
                raise BasisMismatch(f"unknown symbol {sym!r}") from None
            coeffs[j] = parse_rational(text)
        return SemValue(basis, tuple(coeffs))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        body = self.to_mapping() or "0"
        return f"SemValue({body})"


def sv_sum(basis: Basis, values: Iterable[SemValue]) -> SemValue:
    total = basis.zero()
    for v in values:
        total = total + v
    return total


def sv_ratio(u: SemValue, v: SemValue) -> Fraction:
    """The rational q with u == q*v, when u lies on the rational line of v.

    This is the only division the calculus needs: wherever a formula divides
    two values they are guaranteed proportional.
    """
    u._check(v)
    if v.is_zero():
        raise ZeroDivisor("ratio against the zero value")
    if u.is_zero():
        return ZERO
    pivot = next(j for j, c in enumerate(v.coeffs) if c != 0)
    q = u.coeffs[pivot] / v.coeffs[pivot]
    if any(uc != q * vc for uc, vc in zip(u.coeffs, v.coeffs)):
        raise NotProportional("values span two independent rational directions")
    return q


# -- exact Gaussian elimination ----------------------------------------------

def _pivot_key(q: Fraction) -> int:
    # deterministic pivot choice: smallest numerator*denominator bit size
    return abs(q.numerator).bit_length() + q.denominator.bit_length()


def _eliminate(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce in place; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= len(rows):
            break
        candidates = [i for i in range(r, len(rows)) if rows[i][c] != 0]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: (_pivot_key(rows[i][c]), i))
        rows[r], rows[best] = rows[best], rows[r]
        pivot = rows[r][c]
        for i in range(len(rows)):
            if i == r or rows[i][c] == 0:
                continue
            factor = rows[i][c] / pivot
            row_i, row_r = rows[i], rows[r]
            for j in range(c, n_cols):
                row_i[j] -= factor * row_r[j]
        pivots.append(c)
        r += 1
    return rows, pivots


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    work = [list(row) for row in rows]
    _, pivots = _eliminate(work)
    return len(pivots)


def solve_exact(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Sequence[Fraction]],
) -> Optional[tuple[list[list[Fraction]], int]]:
    """Solve A*x = b for every right-hand-side column simultaneously.

    Returns (solutions, free_count) where solutions[k] is the solution for
    rhs column k with all free unknowns set to zero, or None when any column
    admits no solution.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    n_rhs = len(rhs)
    work = [
        list(rows[i]) + [rhs[k][i] for k in range(n_rhs)] for i in range(n_rows)
    ]
    if not work:
        return [[ZERO] * n_cols for _ in range(n_rhs)], n_cols
    _, pivots = _eliminate(work)
    pivot_set = set(p for p in pivots if p < n_cols)
    # a pivot in the rhs block marks an inconsistent system
    for row in work:
        if all(row[c] == 0 for c in range(n_cols)) and any(
            row[n_cols + k] != 0 for k in range(n_rhs)
        ):
            return None
    solutions = [[ZERO] * n_cols for _ in range(n_rhs)]
    row_of_pivot = {c: i for i, c in enumerate(p for p in pivots if p < n_cols)}
    for c, i in row_of_pivot.items():
        pivot = work[i][c]
        for k in range(n_rhs):
            solutions[k][c] = work[i][n_cols + k] / pivot
    return solutions, n_cols - len(pivot_set)


def q_rank(values: Sequence[SemValue]) -> int:
    """Rank over the rationals of the coefficient matrix of the values."""
    if not values:
        return 0
    basis = values[0].basis
    for v in values:
        if v.basis != basis:
            raise BasisMismatch("rank over mixed bases")
    return matrix_rank([list(v.coeffs) for v in values])


def q_independent(values: Sequence[SemValue]) -> bool:
    return q_rank(values) == len(values)


def q_coords(target: SemValue, frame_values: Sequence[SemValue]) -> list[Fraction]:
    """The unique rationals q_k with target == sum_k q_k * frame_values[k]."""
    if not q_independent(frame_values):
        raise DependentFrame("frame values are rationally dependent")
    if not frame_values:
        if target.is_zero():
            return []
        raise NotInSpan("nonzero value over the empty frame")
    target._check(frame_values[0])
    dim = target.basis.dimension
    # unknowns are the q_k: columns of the coefficient matrix are the frames
    rows = [[fv.coeffs[j] for fv in frame_values] for j in range(dim)]
    rhs = [[target.coeffs[j] for j in range(dim)]]
    solved = solve_exact(rows, rhs)
    if solved is None:
        raise NotInSpan("value lies outside the span of the frame")
    solutions, _free = solved
    return solutions[0]


# -- gauges -------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeMap:
    """An invertible rational matrix acting on coefficient vectors.

    This is the constructive form of an additive gauge reparametrisation:
    rational-linear, bijective, exactly additive by construction.
    """

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.matrix)
        if n == 0 or any(len(row) != n for row in self.matrix):
            raise DimensionMismatch("gauge matrix must be square and non-empty")
        if matrix_rank(self.matrix) != n:
            raise SingularMatrix("gauge matrix is not invertible")

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Fraction | int]]) -> "GaugeMap":
        return GaugeMap(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @staticmethod
    def identity(dim: int) -> "GaugeMap":
        return GaugeMap.from_rows(
            [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        )

    @staticmethod
    def scalar(dim: int, c: Fraction | int) -> "GaugeMap":
        """diag(c, ..., c); the only gauges surviving a holomorphic restriction."""
        c = Fraction(c)
        if c == 0:
            raise SingularMatrix("scalar gauge with factor zero")
        return GaugeMap.from_rows(
            [[c if i == j else 0 for j in range(dim)] for i in range(dim)]
        )

    @staticmethod
    def diagonal(entries: Sequence[Fraction | int]) -> "GaugeMap":
        return GaugeMap.from_rows(
            [
                [entries[i] if i == j else 0 for j in range(len(entries))]
                for i in range(len(entries))
            ]
        )

    def apply(self, v: SemValue) -> SemValue:
        if v.basis.dimension != self.dimension:
            raise DimensionMismatch("gauge dimension does not match basis size")
        coeffs = tuple(
            sum((row[j] * v.coeffs[j] for j in range(self.dimension)), ZERO)
            for row in self.matrix
        )
        return SemValue(v.basis, coeffs)

    def compose(self, other: "GaugeMap") -> "GaugeMap":
        """self after other, as matrices: (self.compose(other))(v) = self(other(v))."""
        if self.dimension != other.dimension:
            raise DimensionMismatch("composing gauges of different dimensions")
        n = self.dimension
        rows = [
            [
                sum((self.matrix[i][k] * other.matrix[k][j] for k in range(n)), ZERO)
                for j in range(n)
            ]
            for i in range(n)
        ]
        return GaugeMap.from_rows(rows)

    def inverse(self) -> "GaugeMap":
        n = self.dimension
        rhs = [[ONE if i == k else ZERO for i in range(n)] for k in range(n)]
        solved = solve_exact(self.matrix, rhs)
        assert solved is not None  # invertibility checked at construction
        columns, free = solved
        assert free == 0
        rows = [[columns[k][i] for k in range(n)] for i in range(n)]
        return GaugeMap.from_rows(rows)


class Sign(enum.Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"
    UNKNOWN = "unknown"


def sv_sign(v: SemValue) -> Sign:
    """Determine the sign of a value from the basis enclosures.

    Every symbol carrying a nonzero coefficient must have an enclosure with a
    zero imaginary interval.  Returns UNKNOWN when the exact interval for the
    sum straddles zero.
    """
    if v.is_zero():
        return Sign.ZERO
    lo = ZERO
    hi = ZERO
    for c, box, sym in zip(v.coeffs, v.basis.enclosures, v.basis.symbols):
        if c == 0:
            continue
        if box is None:
            raise MissingEnclosure(f"symbol {sym!r} has no enclosure")
        (re_lo, re_hi), (im_lo, im_hi) = box
        if im_lo != 0 or im_hi != 0:
            raise ComplexValued(f"symbol {sym!r} has a nonzero imaginary part")
        if c > 0:
            lo += c * re_lo
            hi += c * re_hi
        else:
            lo += c * re_hi
            hi += c * re_lo
    if lo > 0:
        return Sign.POSITIVE
    if hi < 0:
        return Sign.NEGATIVE
    if lo == 0 and hi == 0:
        return Sign.ZERO
    return Sign.UNKNOWN
