"""Holomorphic sectional curvature of the Kähler-Einstein metric.

On the origin slice the curvature in direction (dz, dw) is

    -2 + [2 Y |dz|^4 / K^2 - 2 Y tr(dZ conj(dZ) dZ conj(dZ)) / K]
         / [Y |dz|^2 / K + Y^2 |<dw, w*>|^2 + Y |dw|^2]^2,

and general points reduce to the slice by pushing the tangent through the
base-point normalizer Jacobian (the curvature is automorphism invariant).
At the distinguished K the value is pinched between -2K and -2K/p, both ends
attained: a rank-1 dZ reaches -2K and a scalar dZ reaches -2K/p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autgroup import jacobian_at_base
from .domain import DomainParams, Point, gram_eigvals
from .errors import DegenerateDirectionError, DomainMembershipError
from .linalg import mat_to_vec, packed_size, vec_to_mat


@dataclass(frozen=True)
class Tangent:
    """Direction (dz, dw): packed symmetric coordinates plus a w-part."""

    dz: np.ndarray
    dw: np.ndarray

    def __post_init__(self):
        dz = np.array(self.dz, dtype=complex).reshape(-1)
        dw = np.array(self.dw, dtype=complex).reshape(-1)
        dz.flags.writeable = False
        dw.flags.writeable = False
        object.__setattr__(self, "dz", dz)
        object.__setattr__(self, "dw", dw)

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.dz, self.dw])


def _real_part(x: complex, tol: float = 1e-10) -> float:
    scale = max(1.0, abs(x))
    if abs(x.imag) > tol * scale:
        raise ArithmeticError(f"value should be real, imaginary residue {x.imag:.3e}")
    return float(x.real)


def hsc_origin(params: DomainParams, wstar: np.ndarray, tangent: Tangent) -> float:
    """Sectional curvature at (0, wstar) in the given direction."""
    wstar = np.asarray(wstar, dtype=complex).reshape(-1)
    X = float(np.vdot(wstar, wstar).real)
    if X >= 1.0:
        raise DomainMembershipError(f"|wstar|^2 = {X:.6g} >= 1")
    dz, dw = tangent.dz, tangent.dw
    if dw.size == 0:
        dw = np.zeros(wstar.size, dtype=complex)
    elif dw.size != wstar.size:
        raise ValueError(f"dw has length {dw.size}, expected {wstar.size}")
    nz2 = float(np.vdot(dz, dz).real)
    nw2 = float(np.vdot(dw, dw).real)
    if nz2 + nw2 == 0.0:
        raise DegenerateDirectionError("tangent direction is zero")
    Y = 1.0 / (1.0 - X)
    K = params.K
    dZ = vec_to_mat(dz) if dz.size else np.zeros((params.p, params.p))
    Q = dZ @ dZ.conj()
    tr4 = _real_part(complex(np.trace(Q @ Q)))
    pair = abs(complex(np.vdot(wstar, dw))) ** 2  # |<dw, w*>|^2
    num = 2.0 * Y * (nz2 * nz2 / (K * K) - tr4 / K)
    den = (Y / K) * nz2 + Y * Y * pair + Y * nw2
    return -2.0 + num / (den * den)


def hsc(params: DomainParams, point: Point, tangent: Tangent) -> float:
    """Sectional curvature at a general interior point.

    The point maps to (0, w*) under its normalizer and the tangent row is
    pushed forward through the Jacobian; the slice formula then applies.
    """
    dw = tangent.dw
    if dw.size == 0:
        dw = np.zeros(params.r, dtype=complex)
    if tangent.dz.size != params.m or dw.size != params.r:
        raise ValueError("tangent shape does not match the domain parameters")
    lam = gram_eigvals(point.Z)
    if lam[0] <= 0.0:
        raise DomainMembershipError("point is outside the Cartan factor")
    droot = float(np.exp(-np.sum(np.log(lam)) / (2.0 * params.K)))
    wstar = point.w * droot
    J = jacobian_at_base(params, point).assembled
    vstar = np.concatenate([tangent.dz, dw]) @ J
    return hsc_origin(params, wstar, Tangent(vstar[: params.m], vstar[params.m :]))


def curvature_bounds(params: DomainParams) -> tuple[float, float]:
    """Sharp pinching interval (-2K, -2K/p)."""
    return (-2.0 * params.K, -2.0 * params.K / params.p)


def sharp_directions(p: int) -> tuple[Tangent, Tangent]:
    """Directions attaining the curvature bounds at (0, 0).

    The first (rank-1 dZ) attains the lower bound -2K, the second (scalar
    dZ = I) the upper bound -2K/p.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    m = packed_size(p)
    low = np.zeros(m, dtype=complex)
    low[0] = 1.0
    high = mat_to_vec(np.eye(p, dtype=complex))
    zero_w = np.zeros(0, dtype=complex)
    return (Tangent(low, zero_w), Tangent(high, zero_w))


def trace_quartic_terms(Z: np.ndarray) -> tuple[float, float, float]:
    """The chain tr((Z conj(Z))^2) <= tr(Z conj(Z))^2 <= p tr((Z conj(Z))^2).

    Returns the three terms; the left end is attained by rank-1 matrices and
    the right end exactly by matrices with equal singular values.
    """
    Z = np.asarray(Z, dtype=complex)
    p = Z.shape[0]
    Q = Z @ Z.conj()
    t1 = _real_part(complex(np.trace(Q @ Q)))
    tr = _real_part(complex(np.trace(Q)))
    return (t1, tr * tr, p * t1)
