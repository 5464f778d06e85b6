"""Exact computations with commuting derivations of polynomial and power series rings."""

from .derivation import (
    BasisCheck,
    Derivation,
    DerivationFamily,
    NilpotencyReport,
    Nilpotent,
    NotNilpotent,
    Unknown,
    apply,
    basis_check,
    bracket,
    commutes,
    divergence,
    is_locally_nilpotent,
    iterate,
)
from .errors import (
    DerlabError,
    InternalConsistencyError,
    ParseError,
    PreconditionError,
    RingMismatchError,
)
from .poly import Mode, Poly, RingSpec, parse_poly

__version__ = "0.1.0"
