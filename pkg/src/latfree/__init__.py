"""Exact computations with lattice-linear expressions.

Expressions over generators t1..tn (scalar multiples, sums, suprema,
infima) are treated as positively homogeneous piecewise-linear functions.
The package decides equivalence exactly, computes certified norms for a
family of sequence-space pairings, extends generator assignments to
lattice homomorphisms, and ships a deterministic acceptance suite.
"""

from .errors import (
    ArityError,
    DimensionError,
    ExprSyntaxError,
    InternalFaultError,
    LatfreeError,
    UnboundedRegionError,
    UnsupportedSpaceError,
)
from .expr import (
    Add,
    Expr,
    Inf,
    Scale,
    Sup,
    Var,
    eval_expr,
    parse,
    print_expr,
)
from .free import (
    FreeElement,
    LatticeMap,
    TargetLattice,
    contractivity_audit,
    element_norm,
    embed,
    extend_hom,
    generator,
    make_element,
    pullback_seminorm,
    target_lattice,
    zero_element,
)
from .norm import (
    AuditReport,
    FunctionalTuple,
    NormCertificate,
    SpaceSpec,
    constraint_norm,
    evaluation_seminorm,
    functional_tuple,
    fvl_space,
    maximality_audit,
    norm_bounds,
    norm_by_cell_assignment,
    norm_certificate,
    norm_exact_polyhedral,
    parse_space,
    seq_space,
    strong_unit_factor,
    tuple_admissible,
    tuple_seminorm_value,
)
from .pwl import (
    MaxMinForm,
    PwlFunction,
    equivalent,
    is_zero,
    linear_pieces,
    make_pwl,
    max_min_form,
    pwl_abs,
    pwl_add,
    pwl_inf,
    pwl_scale,
    pwl_sup,
)
from .selftest import CriterionResult, SelftestReport, run_selftest

__version__ = "0.1.0"

__all__ = [
    "Add",
    "ArityError",
    "AuditReport",
    "CriterionResult",
    "DimensionError",
    "Expr",
    "ExprSyntaxError",
    "FreeElement",
    "FunctionalTuple",
    "Inf",
    "InternalFaultError",
    "LatfreeError",
    "LatticeMap",
    "MaxMinForm",
    "NormCertificate",
    "PwlFunction",
    "Scale",
    "SelftestReport",
    "SpaceSpec",
    "Sup",
    "TargetLattice",
    "UnboundedRegionError",
    "UnsupportedSpaceError",
    "Var",
    "constraint_norm",
    "contractivity_audit",
    "element_norm",
    "embed",
    "equivalent",
    "eval_expr",
    "evaluation_seminorm",
    "extend_hom",
    "functional_tuple",
    "fvl_space",
    "generator",
    "is_zero",
    "linear_pieces",
    "make_element",
    "make_pwl",
    "max_min_form",
    "maximality_audit",
    "norm_bounds",
    "norm_by_cell_assignment",
    "norm_certificate",
    "norm_exact_polyhedral",
    "parse",
    "parse_space",
    "print_expr",
    "pullback_seminorm",
    "pwl_abs",
    "pwl_add",
    "pwl_inf",
    "pwl_scale",
    "pwl_sup",
    "run_selftest",
    "seq_space",
    "strong_unit_factor",
    "target_lattice",
    "tuple_admissible",
    "tuple_seminorm_value",
    "zero_element",
]
