"""Error taxonomy for the calculus.

Every failure mode that callers are expected to branch on gets its own
class; the CLI prints the class name verbatim so scripts can match on it.
"""

from __future__ import annotations


class CalculusError(Exception):
    """Base class for all domain errors raised by this package."""


# -- lattice ----------------------------------------------------------------

class WidthMismatch(CalculusError):
    """Statements from universes of different atom counts were combined."""


class SizeCapExceeded(CalculusError):
    """A construction or enumeration would exceed the desk-scale caps."""


class NotBelow(CalculusError):
    """A statement was required to lie below another and does not."""


class BottomIdeal(CalculusError):
    """The ideal of the bottom statement has no atoms; cannot condition on it."""


# -- values -----------------------------------------------------------------

class BasisMismatch(CalculusError):
    """Values over different symbolic bases were combined."""


class DimensionMismatch(CalculusError):
    """A gauge map was applied to a value of the wrong dimension."""


class ZeroDivisor(CalculusError):
    """A proportionality ratio against the zero value was requested."""


class NotProportional(CalculusError):
    """Two values do not lie on a common rational line."""


class SingularMatrix(CalculusError):
    """A gauge map must be invertible; the given matrix is not."""


class NotInSpan(CalculusError):
    """A value has no rational coordinates over the given frame values."""


class DependentFrame(CalculusError):
    """The given statements do not form a semantic frame (values dependent
    or not maximal)."""


class MissingEnclosure(CalculusError):
    """Sign determination needs a numeric enclosure for every symbol used."""


class ComplexValued(CalculusError):
    """Sign determination is defined only for real-enclosed values."""


# -- valuation --------------------------------------------------------------

class TopIsZero(CalculusError):
    """The valuation sends the top statement to zero, so no normalised
    representative exists."""


class HigherDimension(CalculusError):
    """The valuation has semantic dimension above one; use the canonical
    split instead of direct normalisation."""


class BottomNotZero(CalculusError):
    """A partial valuation must assign zero to the bottom statement."""


class Inconsistent(CalculusError):
    """A partial valuation violates additivity and admits no extension."""


class Underdetermined(CalculusError):
    """The requested value is not forced by the given assignments."""


# -- conditioning -----------------------------------------------------------

class RelativisationUnstable(CalculusError):
    """The restriction cannot be normalised: the conditioning statement has
    value zero while the restriction is not identically zero.  Fall back to
    the relative pre-probability."""


class NonInjectiveGauge(CalculusError):
    """Ambient frame values are rationally dependent, so no bijective gauge
    can realise the synchronisation."""


class ZeroAnchor(CalculusError):
    """The anchor statement carries value zero and cannot fix a gauge."""


class NotAProbability(CalculusError):
    """The operation is defined only for non-negative quasi-probabilities."""


# -- verify -----------------------------------------------------------------

class TableIncomplete(CalculusError):
    """A value table does not cover all inputs the check must form."""


# -- workspace / CLI --------------------------------------------------------

class WorkspaceError(CalculusError):
    """A workspace document failed to parse or validate."""
