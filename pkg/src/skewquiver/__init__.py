"""Exact quiver presentations for skew group algebras of quadratic algebras,
their Beilinson algebras, and the corner algebras cut out of them."""

from .constructions import (
    PipelineOptions,
    PipelineReport,
    beilinson_presentation,
    corner_algebra,
    corner_presentation,
    mckay_quiver,
    remove_trivial_vertex,
    skew_group_presentation,
    skew_layered_presentation,
    stable_cm_pipeline,
)
from .exactfield import CyclotomicScalar, cyclotomic_polynomial, root_of_unity
from .gradedalg import (
    DiagonalAction,
    NcPolynomial,
    QuadraticAlgebra,
    action_check,
    dual_action,
    frobenius_pairing_check,
    graded_component,
    hdet_diagonal,
    hilbert_function,
    invariant_hilbert_function,
    koszul_numeric_check,
    koszul_syzygy_space,
    quadratic_dual,
)
from .linalg import Matrix, Subspace, intersect, kernel, rref
from .quiver import (
    Arrow,
    Path,
    PathPolynomial,
    Quiver,
    QuiverPresentation,
    equal_after_relabel,
    finite_dimensionality,
    graded_dimension,
    normalize,
    path_basis,
)

__version__ = "0.1.0"

__all__ = [
    "CyclotomicScalar",
    "cyclotomic_polynomial",
    "root_of_unity",
    "Matrix",
    "Subspace",
    "intersect",
    "kernel",
    "rref",
    "PipelineOptions",
    "PipelineReport",
    "beilinson_presentation",
    "corner_algebra",
    "corner_presentation",
    "mckay_quiver",
    "remove_trivial_vertex",
    "skew_group_presentation",
    "skew_layered_presentation",
    "stable_cm_pipeline",
    "DiagonalAction",
    "NcPolynomial",
    "QuadraticAlgebra",
    "action_check",
    "dual_action",
    "frobenius_pairing_check",
    "graded_component",
    "hdet_diagonal",
    "hilbert_function",
    "invariant_hilbert_function",
    "koszul_numeric_check",
    "koszul_syzygy_space",
    "quadratic_dual",
    "Arrow",
    "Path",
    "PathPolynomial",
    "Quiver",
    "QuiverPresentation",
    "equal_after_relabel",
    "finite_dimensionality",
    "graded_dimension",
    "normalize",
    "path_basis",
]
