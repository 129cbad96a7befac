"""Holomorphic automorphisms of the domain and their Jacobians.

Every automorphism used here is a point-to-origin normalizer: for a base
matrix Z0 in the Cartan factor it maps

    Z -> A (Z - Z0) (I - conj(Z0) Z)^(-1) conj(A)^(-1),
    w -> w det(I - Z0 conj(Z0))^(1/(2K)) det(I - Z conj(Z0))^(-1/K),

with conj(A)^t A = (I - Z0 conj(Z0))^(-1).  We fix A as the principal
Hermitian square root, which makes the map deterministic.

Jacobians follow the row-vector convention: J[a, b] = d(out_b)/d(in_a), so a
tangent row v pushes forward as v @ J and the metric pulls back as
J @ T @ conj(J)^t.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .domain import DomainParams, Point, e_vector, gram_eigvals, logdet_gram
from .errors import DomainMembershipError, SingularityError
from .linalg import hermitian_sqrt, sym_kron


@dataclass(frozen=True)
class Automorphism:
    """Origin normalizer with base point Z0 and Hermitian factor A."""

    params: DomainParams
    Z0: np.ndarray
    A: np.ndarray

    def __call__(self, point: Point) -> Point:
        return apply(self, point)


@dataclass(frozen=True)
class JacobianBlocks:
    """Blocks of the normalizer Jacobian at Z0 = Z (row convention).

    dzstar_dz is m x m, dwstar_dz is m x r, dwstar_dw is r x r; the w -> Z*
    block is identically zero because Z* does not depend on w.
    """

    dzstar_dz: np.ndarray
    dwstar_dz: np.ndarray
    dwstar_dw: np.ndarray

    @cached_property
    def assembled(self) -> np.ndarray:
        m, r = self.dwstar_dz.shape
        J = np.zeros((m + r, m + r), dtype=complex)
        J[:m, :m] = self.dzstar_dz
        J[:m, m:] = self.dwstar_dz
        J[m:, m:] = self.dwstar_dw
        return J


def normalizing_map(params: DomainParams, Z0: np.ndarray) -> Automorphism:
    """Automorphism sending (Z0, w) to (0, w*) for every w."""
    Z0 = np.asarray(Z0, dtype=complex)
    lam = gram_eigvals(Z0)
    if lam[0] <= 0.0:
        raise DomainMembershipError("Z0 is outside the Cartan factor")
    M = np.eye(params.p) - Z0 @ Z0.conj()
    A = hermitian_sqrt(np.linalg.inv(M))
    return Automorphism(params=params, Z0=Z0, A=A)


def _tracked_log_det(Z0: np.ndarray, Z: np.ndarray) -> complex:
    """log det(I - Z conj(Z0)), continued from the real value at Z = Z0.

    The determinant never vanishes while both arguments stay in the Cartan
    factor, so the log is defined by continuity along the segment from Z0 to
    Z.  The principal value is used directly when a coarse sweep of the
    segment stays in the right half-plane; otherwise the argument is tracked
    on successively refined subdivisions.
    """
    p = Z0.shape[0]
    eye = np.eye(p)
    Z0c = Z0.conj()

    def det_at(t: float) -> complex:
        return complex(np.linalg.det(eye - (Z0 + t * (Z - Z0)) @ Z0c))

    coarse = [det_at(t) for t in (0.25, 0.5, 0.75, 1.0)]
    if all(d.real > 0.0 for d in coarse):
        return cmath.log(coarse[-1])

    for n in (16, 64, 256, 1024):
        dets = [det_at(k / n) for k in range(n + 1)]
        if any(d == 0.0 for d in dets):
            raise SingularityError("det(I - Z conj(Z0)) vanished along the segment")
        args = np.angle(np.asarray(dets))
        jumps = np.diff(args)
        jumps = (jumps + np.pi) % (2.0 * np.pi) - np.pi
        if np.abs(jumps).max() < 0.5 * np.pi:
            total_arg = float(jumps.sum())  # arg is 0 at t = 0
            return complex(np.log(abs(dets[-1])), total_arg)
    raise SingularityError("could not track the branch of det(I - Z conj(Z0))")


def apply(F: Automorphism, point: Point) -> Point:
    """Apply a normalizer to an interior point; the image is interior again."""
    params, Z0, A = F.params, F.Z0, F.A
    Z, w = point.Z, point.w
    K = params.K
    logd0 = logdet_gram(Z0)
    logdelta = _tracked_log_det(Z0, Z)
    wstar = w * cmath.exp(logd0 / (2.0 * K) - logdelta / K)

    B = np.eye(params.p) - Z0.conj() @ Z
    try:
        T1 = np.linalg.solve(B.T, (Z - Z0).T).T  # (Z - Z0) B^{-1}
        Zstar = A @ np.linalg.solve(A.conj().T, T1.T).T  # ... conj(A)^{-1}
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"automorphism application is singular: {exc}") from exc
    Zstar = (Zstar + Zstar.T) / 2.0
    return Point(Zstar, wstar)


def jacobian_at_base(params: DomainParams, point: Point) -> JacobianBlocks:
    """Jacobian blocks of the normalizer with base Z0 = point.Z, at the point itself."""
    Z, w = point.Z, point.w
    lam = gram_eigvals(Z)
    if lam[0] <= 0.0:
        raise DomainMembershipError("point is outside the Cartan factor")
    A = normalizing_map(params, Z).A
    droot = float(np.exp(-np.sum(np.log(lam)) / (2.0 * params.K)))
    E = e_vector(Z)
    dzstar_dz = sym_kron(A.conj())
    dwstar_dz = (droot / params.K) * np.outer(E, w)
    dwstar_dw = droot * np.eye(params.r, dtype=complex)
    return JacobianBlocks(dzstar_dz=dzstar_dz, dwstar_dz=dwstar_dz, dwstar_dw=dwstar_dw)


def jacobian_det_sq(params: DomainParams, Z: np.ndarray) -> float:
    """|det J|^2 of the base-point normalizer: det(I - Z conj(Z))^-(p+1+r/K)."""
    lam = gram_eigvals(np.asarray(Z, dtype=complex))
    if lam[0] <= 0.0:
        raise DomainMembershipError("Z is outside the Cartan factor")
    logdet = float(np.sum(np.log(lam)))
    return float(np.exp(-(params.p + 1.0 + params.r / params.K) * logdet))
