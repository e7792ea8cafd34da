"""Exact finite quasi-probability calculus on Boolean statement universes.

The core objects:

- `lattice`: universes of statements as bitsets, sub-universes, partitions;
- `values`: rational-span values, exact linear algebra, gauge maps;
- `valuation`: pre-probabilities, quasi-probabilities, semantic frames,
  decompositions, partial-valuation extension;
- `conditioning`: relativisation, synchronisation, total rules, Bayes;
- `verify`: the brute-force check suite;
- `demos`: executable worked examples and the printer experiments;
- `workspace` / `cli`: declarative files and the command line.
"""

from .errors import CalculusError
from .lattice import (
    Partition,
    Statement,
    SubUniverse,
    Universe,
    complement,
    enumerate_statements,
    join,
    leq,
    localise,
    meet,
    product_universe,
    relative_complement,
)
from .valuation import (
    PreProb,
    QuasiProb,
    SemanticFrame,
    apply_gauge,
    canonical_frame,
    canonical_split,
    classify,
    components_basis,
    components_frame,
    deduce_missing,
    extend_partial,
    is_probability,
    semantic_dimension,
    to_quasi,
)
from .values import (
    Basis,
    GaugeMap,
    RATIONAL_BASIS,
    SemValue,
    Sign,
    format_rational,
    parse_rational,
    q_coords,
    q_rank,
    sv_ratio,
    sv_sign,
)
from .conditioning import (
    FrameAssignment,
    InvariantCell,
    LocalPreProb,
    StableCell,
    UnstableCell,
    bayes_classical,
    bayes_invariant,
    bayes_mixed,
    bayes_stable,
    conditional_preprob,
    conditional_quasi,
    relative_preprob,
    relative_probability,
    relative_quasi,
    synchronize,
    total_preprob,
    total_probability,
    total_quasi,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
