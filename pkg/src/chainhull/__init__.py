"""Cyclic serial codes over finite chain rings: duals, hulls and hull statistics."""

from .cosetlab import CosetAtlas, build_atlas, coset_of, gamma_beta, in_Nq, mult_order
from .errors import (
    BudgetExceededError,
    HullError,
    UnsupportedFamilyError,
    ValidationError,
    VerificationError,
)
from .hullcount import (
    HullReport,
    algorithm1,
    aleph,
    average_dim,
    bounds,
    count_hulls,
    delta_tables,
    exact_enumeration,
)
from .ringpoly import RingSpec, chain_ring
from .serialcodes import CyclicSerialCode, DefiningMultiset, code_from_multiset

__all__ = [
    "BudgetExceededError",
    "CosetAtlas",
    "CyclicSerialCode",
    "DefiningMultiset",
    "HullError",
    "HullReport",
    "RingSpec",
    "UnsupportedFamilyError",
    "ValidationError",
    "VerificationError",
    "algorithm1",
    "aleph",
    "average_dim",
    "bounds",
    "build_atlas",
    "chain_ring",
    "code_from_multiset",
    "coset_of",
    "count_hulls",
    "delta_tables",
    "exact_enumeration",
    "gamma_beta",
    "in_Nq",
    "mult_order",
]
