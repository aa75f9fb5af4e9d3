"""Exact arithmetic for spherical rational Cherednik algebras of type A and their shift bimodules."""

from .bimod import GrComparison, gr_comparison, gr_dimension_table, p_spanning_set, q_spanning_set
from .cherednik import (
    CherednikContext,
    calogero_moser,
    dunkl,
    idempotent,
    is_good,
    nabla2,
    phi_twist,
    radial_rhs,
    theta_spher,
)
from .errors import RcaError
from .expr import elaborate, evaluate, parse, render
from .isotypic import DimensionTable, exact_rank, hilbert_table, isotypic_basis, molien_dimension
from .locfrac import LocFrac
from .poly import Perm, Poly, delta
from .scalar import C, FieldScalar, K
from .skew import SkewOperator, commutator, conjugate_by_delta_power, principal_symbol, skew_mul
from .verify import CheckReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "C",
    "CheckReport",
    "CherednikContext",
    "DimensionTable",
    "FieldScalar",
    "GrComparison",
    "K",
    "LocFrac",
    "Perm",
    "Poly",
    "RcaError",
    "SkewOperator",
    "calogero_moser",
    "commutator",
    "conjugate_by_delta_power",
    "delta",
    "dunkl",
    "elaborate",
    "evaluate",
    "exact_rank",
    "gr_comparison",
    "gr_dimension_table",
    "hilbert_table",
    "idempotent",
    "is_good",
    "isotypic_basis",
    "molien_dimension",
    "nabla2",
    "p_spanning_set",
    "parse",
    "phi_twist",
    "principal_symbol",
    "q_spanning_set",
    "radial_rhs",
    "render",
    "run_suite",
    "skew_mul",
    "theta_spher",
]
