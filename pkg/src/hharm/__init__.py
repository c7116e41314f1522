"""Exact harmonic-polynomial calculus on Heisenberg groups, with numerical
adjudication of spherical orthogonality on the Koranyi sphere."""

from .grammar import ParseError, parse_poly
from .groups import (
    GroupLawUnavailable,
    GroupSpec,
    VectorField,
    commutator,
    dilate,
    euler_field,
    group_inverse,
    group_mul,
    heisenberg,
    identity_element,
    koranyi_gauge4,
    koranyi_norm,
    left_translate,
    load_group,
    rotation_field,
    sublaplacian,
    sublaplacian_decomposed,
    vertical_field,
)
from .gauge import GaugeExpr, eigen_residual, gradient_sq, unweighted_eigen_residual
from .harmonic import (
    HarmonicBasis,
    delta_matrix,
    dim_h_closed,
    dim_p_closed,
    dim_table,
    harmonic_basis,
    spans_equal,
    triangular_basis_h1,
)
from .eta import (
    DecompositionResult,
    SingularBlockError,
    decompose_full,
    decompose_once,
    dirichlet_block,
    eta_gauge_sq,
    solve_dirichlet_q,
)
from .poly import Polynomial, Signature, monomial_basis
from .sphere import (
    GramReport,
    MomentTable,
    gram_matrix,
    inner_product,
    project,
    quadrature_rule,
    sphere_moment,
)

__version__ = "0.1.0"

__all__ = [
    "DecompositionResult",
    "GaugeExpr",
    "GramReport",
    "GroupLawUnavailable",
    "GroupSpec",
    "HarmonicBasis",
    "MomentTable",
    "ParseError",
    "Polynomial",
    "Signature",
    "SingularBlockError",
    "VectorField",
    "commutator",
    "decompose_full",
    "decompose_once",
    "delta_matrix",
    "dilate",
    "dim_h_closed",
    "dim_p_closed",
    "dim_table",
    "dirichlet_block",
    "eigen_residual",
    "eta_gauge_sq",
    "euler_field",
    "gradient_sq",
    "gram_matrix",
    "group_inverse",
    "group_mul",
    "harmonic_basis",
    "heisenberg",
    "identity_element",
    "inner_product",
    "koranyi_gauge4",
    "koranyi_norm",
    "left_translate",
    "load_group",
    "monomial_basis",
    "parse_poly",
    "project",
    "quadrature_rule",
    "rotation_field",
    "solve_dirichlet_q",
    "spans_equal",
    "sphere_moment",
    "sublaplacian",
    "sublaplacian_decomposed",
    "triangular_basis_h1",
    "unweighted_eigen_residual",
    "vertical_field",
]
