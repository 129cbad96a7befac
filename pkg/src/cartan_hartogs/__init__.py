"""Kähler-Einstein and Bergman geometry of second-type Cartan-Hartogs domains.

The domain Y_II(r, p; K) fibers a ball in C^r over the Cartan domain of
complex symmetric p x p contractions.  At the distinguished parameter
K = p/2 + 1/(p+1) the package evaluates the explicit complete
Kähler-Einstein metric, its holomorphic sectional curvature with the sharp
pinching bounds, the Bergman kernel and metric, and the equivalence
constants between the two metrics, all backed by finite-difference oracles.
"""

from .autgroup import (
    Automorphism,
    JacobianBlocks,
    apply,
    jacobian_at_base,
    jacobian_det_sq,
    normalizing_map,
)
from .bergman import (
    BergmanCoeffs,
    EquivalenceBounds,
    RatioTriple,
    bergman_kernel,
    bergman_metric_origin,
    dump_coeffs,
    equivalence_bounds_scan,
    equivalence_ratios,
    fit_coeffs_p1,
    g_series,
    load_coeffs,
    read_coeffs,
)
from .curvature import (
    Tangent,
    curvature_bounds,
    hsc,
    hsc_origin,
    sharp_directions,
    trace_quartic_terms,
)
from .domain import (
    AuxXY,
    DomainParams,
    Point,
    aux_xy,
    contains,
    e_vector,
    point_to_vec,
    sample_interior,
    special_K,
    vec_to_point,
)
from .kemetric import (
    MetricBlocks,
    boundary_blowup_probe,
    generating_function,
    ma_residual,
    metric_blocks_closed,
    metric_origin,
    metric_pullback,
)
from .linalg import basis_sym, hermitian_sqrt, mat_to_vec, sym_kron, vec_to_mat
from .oracle import FDConfig, curvature_fd_config, fd_hsc, holomorphic_jacobian, wirtinger_hessian_mixed

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "AuxXY",
    "BergmanCoeffs",
    "DomainParams",
    "EquivalenceBounds",
    "FDConfig",
    "JacobianBlocks",
    "MetricBlocks",
    "Point",
    "RatioTriple",
    "Tangent",
    "apply",
    "aux_xy",
    "basis_sym",
    "bergman_kernel",
    "bergman_metric_origin",
    "boundary_blowup_probe",
    "contains",
    "curvature_bounds",
    "curvature_fd_config",
    "dump_coeffs",
    "e_vector",
    "equivalence_bounds_scan",
    "equivalence_ratios",
    "fd_hsc",
    "fit_coeffs_p1",
    "g_series",
    "generating_function",
    "hermitian_sqrt",
    "holomorphic_jacobian",
    "hsc",
    "hsc_origin",
    "jacobian_at_base",
    "jacobian_det_sq",
    "load_coeffs",
    "ma_residual",
    "mat_to_vec",
    "metric_blocks_closed",
    "metric_origin",
    "metric_pullback",
    "normalizing_map",
    "point_to_vec",
    "read_coeffs",
    "sample_interior",
    "sharp_directions",
    "special_K",
    "sym_kron",
    "trace_quartic_terms",
    "vec_to_mat",
    "vec_to_point",
    "wirtinger_hessian_mixed",
]
