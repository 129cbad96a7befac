"""The explicit Kähler-Einstein potential and metric tensor.

The potential is

    g = log Y - (1/K) log det(I - Z conj(Z)) + (r - N)/(1 + N) * log K,

whose mixed complex Hessian T = (d^2 g / dz_a dconj(z)_b) is positive
definite on the whole domain and blows up at the boundary.  At the
distinguished K = p/2 + 1/(p+1) it satisfies det T = exp((N+1) g), the
complex Monge-Ampère equation of the complete Kähler-Einstein metric.

Two independent evaluation routes are provided: pulling the origin-slice
matrix back through the normalizer Jacobian, and assembling the closed-form
blocks directly; they must agree to near machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .autgroup import jacobian_at_base
from .domain import (
    DomainParams,
    Point,
    aux_xy,
    contains,
    e_vector,
    gram_eigvals,
    point_to_vec,
    vec_to_point,
)
from .errors import DomainMembershipError, ProbeError
from .linalg import sym_kron


def generating_function(params: DomainParams, point: Point) -> float:
    """Kähler-Einstein potential g at an interior point."""
    lam = gram_eigvals(point.Z)
    if lam[0] <= 0.0:
        raise DomainMembershipError("point is outside the Cartan factor")
    logdet = float(np.sum(np.log(lam)))
    w2 = float(np.vdot(point.w, point.w).real)
    X = w2 * math.exp(-logdet / params.K)
    if X >= 1.0:
        raise DomainMembershipError(f"point is outside the domain (X = {X:.6g})")
    logY = -math.log1p(-X)
    const = (params.r - params.N) / (1.0 + params.N) * math.log(params.K)
    return logY - logdet / params.K + const


def metric_origin(params: DomainParams, wstar: np.ndarray) -> np.ndarray:
    """Metric matrix on the origin slice (Z = 0, w = wstar).

    Block diagonal: (Y/K) I on the m packed-Z coordinates and
    Y I + Y^2 outer(conj(w*), w*) on the w coordinates, with X = |w*|^2.
    Its determinant is K^(r-N) (1 - X)^-(N+1).
    """
    wstar = np.asarray(wstar, dtype=complex).reshape(-1)
    X = float(np.vdot(wstar, wstar).real)
    if X >= 1.0:
        raise DomainMembershipError(f"|wstar|^2 = {X:.6g} >= 1")
    Y = 1.0 / (1.0 - X)
    m, r = params.m, params.r
    T = np.zeros((params.N, params.N), dtype=complex)
    T[:m, :m] = (Y / params.K) * np.eye(m)
    T[m:, m:] = Y * np.eye(r) + Y * Y * np.outer(wstar.conj(), wstar)
    return T


def metric_pullback(params: DomainParams, point: Point) -> np.ndarray:
    """Metric at a general point via J @ T_origin @ conj(J)^t."""
    lam = gram_eigvals(point.Z)
    if lam[0] <= 0.0:
        raise DomainMembershipError("point is outside the Cartan factor")
    droot = float(np.exp(-np.sum(np.log(lam)) / (2.0 * params.K)))
    wstar = point.w * droot
    J = jacobian_at_base(params, point).assembled
    return J @ metric_origin(params, wstar) @ J.conj().T


@dataclass(frozen=True)
class MetricBlocks:
    """Closed-form metric blocks; T21 is the conjugate transpose of T12."""

    T11: np.ndarray
    T12: np.ndarray
    T21: np.ndarray
    T22: np.ndarray

    @cached_property
    def assembled(self) -> np.ndarray:
        m = self.T11.shape[0]
        r = self.T22.shape[0]
        T = np.empty((m + r, m + r), dtype=complex)
        T[:m, :m] = self.T11
        T[:m, m:] = self.T12
        T[m:, :m] = self.T21
        T[m:, m:] = self.T22
        return T


def metric_blocks_closed(params: DomainParams, point: Point) -> MetricBlocks:
    """Closed-form metric blocks at a general point.

    T11 = (Y/K) S + (X Y^2/K^2) outer(E, conj(E)) with S the packed matrix of
    V -> W' V W'^t for W' = conj(I - Z conj(Z))^(-1); T12 couples E to w; T22
    lives on the w coordinates alone.
    """
    Z, w = point.Z, point.w
    K = params.K
    lam = gram_eigvals(Z)
    if lam[0] <= 0.0:
        raise DomainMembershipError("point is outside the Cartan factor")
    logdet = float(np.sum(np.log(lam)))
    d1 = math.exp(-logdet / K)  # det^(-1/K)
    w2 = float(np.vdot(w, w).real)
    X = w2 * d1
    if X >= 1.0:
        raise DomainMembershipError(f"point is outside the domain (X = {X:.6g})")
    Y = 1.0 / (1.0 - X)
    M = np.eye(params.p) - Z @ Z.conj()
    W = np.linalg.inv(M)
    E = e_vector(Z)
    T11 = (Y / K) * sym_kron(W.conj()) + (X * Y * Y / (K * K)) * np.outer(E, E.conj())
    T12 = (Y * Y / K) * d1 * np.outer(E, w)
    T22 = Y * Y * d1 * d1 * np.outer(w.conj(), w) + Y * d1 * np.eye(params.r)
    return MetricBlocks(T11=T11, T12=T12, T21=T12.conj().T, T22=T22)


def ma_residual(params: DomainParams, point: Point, route: str = "closed") -> float:
    """Relative Monge-Ampère residual |det T - exp((N+1) g)| / exp((N+1) g).

    route="closed" evaluates det T from the closed form
    K^(r-N) (1-X)^-(N+1) det(I - Z conj(Z))^-(p+1+r/K); route="numeric" uses
    the numeric determinant of the pullback metric.  Everything is combined
    in log space so near-boundary points do not overflow.
    """
    X, _ = aux_xy(params, point)
    lam = gram_eigvals(point.Z)
    logdet = float(np.sum(np.log(lam)))
    N, r, p, K = params.N, params.r, params.p, params.K
    log_rhs = (N + 1.0) * generating_function(params, point)
    if route == "closed":
        log_detT = (
            (r - N) * math.log(K)
            - (N + 1.0) * math.log1p(-X)
            - (p + 1.0 + r / K) * logdet
        )
    elif route == "numeric":
        sign, log_detT = np.linalg.slogdet(metric_pullback(params, point))
        if abs(sign - 1.0) > 1e-8:
            raise ArithmeticError(f"metric determinant is not real positive (sign {sign})")
        log_detT = float(log_detT.real)
    else:
        raise ValueError(f"unknown route {route!r}; use 'closed' or 'numeric'")
    return abs(math.expm1(log_detT - log_rhs))


def boundary_blowup_probe(
    params: DomainParams,
    interior: Point,
    direction: np.ndarray,
    steps: int = 48,
    *,
    x_cutoff: float = 1.0 - 1e-9,
    det_cutoff: float = 1e-9,
    shrink: float = 0.5,
) -> list[float]:
    """Potential values along a ray approaching the boundary.

    The ray interior + t * direction is followed to its first boundary
    crossing; the potential is then evaluated on a geometrically tightening
    sequence of interior points.  The walk stops once X >= x_cutoff or
    det(I - Z conj(Z)) <= det_cutoff (or after `steps` values).  A zero
    direction returns a constant list.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    v = np.asarray(direction, dtype=complex).reshape(-1)
    if v.size != params.N:
        raise ValueError(f"direction has length {v.size}, expected {params.N}")
    g0 = generating_function(params, interior)
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        return [g0] * steps
    v = v / nv
    x0 = point_to_vec(interior)

    def at(t: float) -> Point:
        return vec_to_point(x0 + t * v, params.r)

    def inside(t: float) -> bool:
        pt = at(t)
        return contains(params, pt.Z, pt.w)

    t_hi = 1.0
    while inside(t_hi):
        t_hi *= 2.0
        if t_hi > 2.0**30:
            raise ProbeError("ray never left the domain")
    t_lo = 0.0
    for _ in range(200):
        mid = 0.5 * (t_lo + t_hi)
        if mid == t_lo or mid == t_hi:
            break
        if inside(mid):
            t_lo = mid
        else:
            t_hi = mid
    t_b = t_lo

    values = [g0]
    for i in range(1, steps):
        gap = t_b * shrink**i
        if gap < 1e-14 * max(1.0, t_b):
            raise ProbeError("boundary approach unresolved at floating-point precision")
        t = t_b - gap
        pt = at(t)
        if not contains(params, pt.Z, pt.w):
            raise ProbeError(f"ray left the domain before the boundary at t = {t:.6g}")
        values.append(generating_function(params, pt))
        lam = gram_eigvals(pt.Z)
        det = float(np.exp(np.sum(np.log(lam))))
        X, _ = aux_xy(params, pt)
        if X >= x_cutoff or det <= det_cutoff:
            break
    return values
