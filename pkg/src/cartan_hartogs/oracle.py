"""Finite-difference Wirtinger calculus, independent of every closed form.

Mixed second derivatives d^2 f / dz_a dconj(z)_b of a real scalar field are
assembled from 4-point central differences of the underlying real partials
via d/dz = (d/dx - i d/dy)/2.  The curvature oracle differentiates the
finite-difference metric along a single complex line; nothing in this module
reads the closed-form metric, Jacobian, or curvature code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domain import DomainParams, Point, aux_xy, gram_eigvals, point_to_vec, vec_to_point
from .errors import (
    ConditioningError,
    DegenerateDirectionError,
    DomainMembershipError,
    StencilError,
)
from .kemetric import generating_function


@dataclass(frozen=True)
class FDConfig:
    """Central-difference settings; `richardson` adds one extrapolation level."""

    step: float = 1e-4
    scheme: int = 2
    richardson: bool = False

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.scheme != 2:
            raise ValueError("only the second-order central scheme is implemented")


def curvature_fd_config(step: float = 1e-2) -> FDConfig:
    """Default configuration for the curvature oracle (larger step, extrapolated)."""
    return FDConfig(step=step, richardson=True)


_SHRINKS = 3


def _mixed_hessian_once(
    f: Callable[[np.ndarray], float], x0: np.ndarray, s: float
) -> np.ndarray:
    """One pass of the 4-point mixed Wirtinger Hessian at real step s."""
    n = x0.size
    f0 = f(x0)

    # real perturbation directions: e_a for a < n, i*e_(a-n) for a >= n
    def unit(a: int) -> np.ndarray:
        e = np.zeros(n, dtype=complex)
        if a < n:
            e[a] = 1.0
        else:
            e[a - n] = 1.0j
        return e

    n2 = 2 * n
    fp = np.empty(n2)
    fm = np.empty(n2)
    for a in range(n2):
        e = unit(a)
        fp[a] = f(x0 + s * e)
        fm[a] = f(x0 - s * e)

    P = np.empty((n2, n2))
    for a in range(n2):
        P[a, a] = (fp[a] - 2.0 * f0 + fm[a]) / (s * s)
        ea = unit(a)
        for b in range(a + 1, n2):
            eb = unit(b)
            fpp = f(x0 + s * ea + s * eb)
            fpm = f(x0 + s * ea - s * eb)
            fmp = f(x0 - s * ea + s * eb)
            fmm = f(x0 - s * ea - s * eb)
            P[a, b] = P[b, a] = (fpp - fpm - fmp + fmm) / (4.0 * s * s)

    Pxx = P[:n, :n]
    Pyy = P[n:, n:]
    Pxy = P[:n, n:]
    return (Pxx + Pyy + 1j * (Pxy - Pxy.T)) / 4.0


def wirtinger_hessian_mixed(
    f: Callable[[Point], float], point: Point, cfg: FDConfig | None = None
) -> np.ndarray:
    """Mixed complex Hessian of a real scalar field at an interior point.

    The step shrinks by factors of 10 (up to 3 times) if the stencil leaves
    the domain; the result is asserted Hermitian to O(step^2).
    """
    cfg = cfg or FDConfig()
    x0 = point_to_vec(point)
    r = point.r

    def f_vec(x: np.ndarray) -> float:
        return f(vec_to_point(x, r))

    step = cfg.step
    for _ in range(_SHRINKS + 1):
        try:
            H = _mixed_hessian_once(f_vec, x0, step)
            if cfg.richardson:
                H = (4.0 * _mixed_hessian_once(f_vec, x0, step / 2.0) - H) / 3.0
            break
        except DomainMembershipError:
            step /= 10.0
    else:
        raise StencilError("stencil left the domain after 3 step shrinks")

    scale = max(1.0, float(np.abs(H).max()))
    asym = float(np.abs(H - H.conj().T).max())
    if asym > 10.0 * step * step * scale:
        raise ArithmeticError(f"mixed Hessian asymmetry {asym:.3e} exceeds O(step^2)")
    return H


def holomorphic_jacobian(
    fmap: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    step: float = 1e-4,
    richardson: bool = True,
) -> np.ndarray:
    """Jacobian of a holomorphic map C^n -> C^k, row convention J[a, b] = df_b/dx_a.

    Uses the full Wirtinger combination of real and imaginary perturbations,
    which cancels any anti-holomorphic contamination to leading order.
    """
    x0 = np.asarray(x0, dtype=complex).reshape(-1)
    n = x0.size

    def once(h: float) -> np.ndarray:
        rows = []
        for a in range(n):
            e = np.zeros(n, dtype=complex)
            e[a] = 1.0
            dre = (fmap(x0 + h * e) - fmap(x0 - h * e)) / (2.0 * h)
            dim = (fmap(x0 + 1j * h * e) - fmap(x0 - 1j * h * e)) / (2.0 * h)
            rows.append((dre - 1j * dim) / 2.0)
        return np.asarray(rows)

    J = once(step)
    if richardson:
        J = (4.0 * once(step / 2.0) - J) / 3.0
    return J


def fd_hsc(
    params: DomainParams,
    point: Point,
    tangent,
    cfg: FDConfig | None = None,
) -> float:
    """Finite-difference holomorphic sectional curvature.

    The metric T is itself a finite-difference Hessian of the potential; its
    first and mixed second derivatives along the complex line point + t *
    tangent are taken by central differences in t, and the curvature is
    v (-ddT + dT T^{-1} dT^H) conj(v)^t / (v T conj(v)^t)^2 for the unit
    tangent row v.  The step adapts to the distance from the boundary.
    """
    cfg = cfg or curvature_fd_config()
    v = np.asarray(
        tangent if isinstance(tangent, np.ndarray) else tangent.vector, dtype=complex
    ).reshape(-1)
    if v.size != params.N:
        raise ValueError(f"tangent has length {v.size}, expected {params.N}")
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        raise DegenerateDirectionError("tangent direction is zero")
    v = v / nv
    x0 = point_to_vec(point)

    def g_vec(x: np.ndarray) -> float:
        return generating_function(params, vec_to_point(x, params.r))

    X, _ = aux_xy(params, point)
    margin = min(1.0 - X, float(gram_eigvals(point.Z)[0]))
    step = cfg.step * min(1.0, 1.5 * margin)

    def hess_at(t: complex, s: float) -> np.ndarray:
        return _mixed_hessian_once(g_vec, x0 + t * v, s)

    def omega_once(h: float) -> float:
        T0 = hess_at(0.0, h)
        Tp = hess_at(h, h)
        Tm = hess_at(-h, h)
        Tip = hess_at(1j * h, h)
        Tim = hess_at(-1j * h, h)
        lam = np.linalg.eigvalsh((T0 + T0.conj().T) / 2.0)
        if lam[0] <= 0.0 or lam[-1] / lam[0] > 1e12:
            raise ConditioningError("finite-difference metric is too ill-conditioned")
        dT = ((Tp - Tm) - 1j * (Tip - Tim)) / (4.0 * h)
        ddT = (Tp + Tm + Tip + Tim - 4.0 * T0) / (4.0 * h * h)
        R = -ddT + dT @ np.linalg.inv(T0) @ dT.conj().T
        num = complex(v @ R @ v.conj())
        den = complex(v @ T0 @ v.conj()).real
        return num.real / (den * den)

    for _ in range(_SHRINKS + 1):
        try:
            omega = omega_once(step)
            if cfg.richardson:
                omega = (4.0 * omega_once(step / 2.0) - omega) / 3.0
            return omega
        except DomainMembershipError:
            step /= 10.0
    raise StencilError("curvature stencil left the domain after 3 step shrinks")
