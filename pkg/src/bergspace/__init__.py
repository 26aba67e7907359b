"""Numerical verification toolkit for positive Toeplitz operators on
Bergman spaces of the model domains (disk, ball, polydisk).

The package computes Bergman kernels, metrics and automorphisms in closed
form, integrates measures through explicit quadrature rules, builds
Bergman-metric covering lattices, evaluates Berezin transforms and
averaging functions, certifies Carleson/vanishing-Carleson behaviour, and
diagnoses boundedness/compactness of truncated Toeplitz matrices.
"""

__version__ = "0.1.0"

from .domains import (
    DomainModel,
    DomainMembershipError,
    Point,
    automorphism,
    bergman_distance,
    bergman_kernel,
    boundary_distance,
    domain_from_name,
    kernel_diagonal,
    metric_ball_volume,
    normalized_kernel,
    polydisk,
    unit_ball,
    unit_disk,
    verify_jacobian_identity,
)
from .measures import (
    AtomicMeasure,
    DensityMeasure,
    Measure,
    QuadratureRule,
    SumMeasure,
    atomic,
    build_quadrature,
    catalog_measures,
    constant_measure,
    integrate,
    lebesgue,
    measure_from_spec,
    measure_of_ball,
    metric_ball_rule,
    power_blowup,
    power_vanishing,
    scale_measure,
)
from .lattice import Lattice, build_lattice, certify_lattice
from .functionals import (
    BoundaryProfile,
    EmpiricalConstants,
    averaging_function,
    berezin_pullback,
    berezin_transform,
    boundary_weak_convergence_check,
    carleson_certificate,
    check_pointwise_domination,
    estimate_constants,
    submean_sup_check,
    submean_value_check,
    vanishing_certificate,
)
from .toeplitz import (
    BasisSpec,
    ToeplitzTruncation,
    berezin_of_operator,
    build_basis,
    compactness_profile,
    operator_norm_profile,
    positive_bergman_norm_estimate,
    toeplitz_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
