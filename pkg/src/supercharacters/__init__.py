"""Cyclic supercharacters of Z/nZ: evaluation, structure predictions, and plots."""

from .analysis import (
    AnalysisReport,
    analyze,
    boundary_predict,
    ellipse_report,
    explicit_eval,
    multiplicative_split,
    nesting_report,
    prime_power_collapse,
    realness_classification,
    symmetry_order,
    verify_dihedral,
)
from .cyclotomic import (
    BoundarySpec,
    CyclotomicReduction,
    cyclotomic_poly,
    filled_hypocycloid_contains,
    hypocycloid_samples,
    laurent_eval,
    reduction_table,
)
from .evaluate import (
    SqPointSet,
    ValueCloud,
    coverage_fraction,
    gauss_sum_quadratic,
    image_of,
    sq_points,
    supercharacter_image,
    supercharacter_value,
    weyl_statistic,
)
from .numtheory import (
    Factorization,
    ModulusContext,
    crt_components,
    euler_phi,
    factorize,
    legendre_symbol,
    mul_order,
)
from .orbits import (
    CyclicAction,
    Orbit,
    PMDecomposition,
    cyclic_subgroup,
    orbit,
    pm_decompose,
    superclass_partition,
)
from .render import PlotConfig, auto_color_modulus, render

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BoundarySpec",
    "CyclicAction",
    "CyclotomicReduction",
    "Factorization",
    "ModulusContext",
    "Orbit",
    "PMDecomposition",
    "PlotConfig",
    "SqPointSet",
    "ValueCloud",
    "analyze",
    "auto_color_modulus",
    "boundary_predict",
    "coverage_fraction",
    "crt_components",
    "cyclic_subgroup",
    "cyclotomic_poly",
    "ellipse_report",
    "euler_phi",
    "explicit_eval",
    "factorize",
    "filled_hypocycloid_contains",
    "gauss_sum_quadratic",
    "hypocycloid_samples",
    "image_of",
    "laurent_eval",
    "legendre_symbol",
    "mul_order",
    "multiplicative_split",
    "nesting_report",
    "orbit",
    "pm_decompose",
    "prime_power_collapse",
    "realness_classification",
    "reduction_table",
    "render",
    "sq_points",
    "supercharacter_image",
    "supercharacter_value",
    "superclass_partition",
    "symmetry_order",
    "verify_dihedral",
    "weyl_statistic",
]
