"""The second-type Cartan-Hartogs domain.

Y_II(r, p; K) is the set of pairs (Z, w) with Z a complex symmetric p x p
matrix satisfying I - Z conj(Z) > 0 (the type-II Cartan domain) and w a
complex r-vector with |w|^2 < det(I - Z conj(Z))^(1/K).  The auxiliary
scalars

    X = |w|^2 det(I - Z conj(Z))^(-1/K),   Y = 1 / (1 - X)

drive every closed-form quantity in the package; X is invariant under the
holomorphic automorphisms of the domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainMembershipError, ShapeError, SingularityError
from .linalg import SQRT2, mat_to_vec, packed_indices, packed_size, vec_to_mat


def special_K(p: int) -> float:
    """Distinguished parameter p/2 + 1/(p+1) at which the explicit potential is Einstein."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return p / 2.0 + 1.0 / (p + 1.0)


@dataclass(frozen=True)
class DomainParams:
    """Shape (r, p) and exponent K > 0 of Y_II(r, p; K)."""

    r: int
    p: int
    K: float

    def __post_init__(self):
        if self.r < 1 or self.p < 1:
            raise ValueError(f"need r >= 1 and p >= 1, got r={self.r}, p={self.p}")
        if not self.K > 0.0:
            raise ValueError(f"need K > 0, got K={self.K}")

    @property
    def m(self) -> int:
        """Number of packed Z coordinates, p(p+1)/2."""
        return packed_size(self.p)

    @property
    def N(self) -> int:
        """Complex dimension of the domain, m + r."""
        return self.m + self.r

    @property
    def special(self) -> bool:
        """True iff K equals p/2 + 1/(p+1) (1e-15 relative tolerance)."""
        ks = special_K(self.p)
        return abs(self.K - ks) <= 1e-15 * ks


class AuxXY(NamedTuple):
    X: float
    Y: float


@dataclass(frozen=True)
class Point:
    """A point (Z, w); Z is symmetrized on construction and both arrays frozen."""

    Z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        Z = np.array(self.Z, dtype=complex)
        w = np.array(self.w, dtype=complex).reshape(-1)
        if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
            raise ShapeError(f"Z must be square, got shape {Z.shape}")
        scale = max(1.0, float(np.abs(Z).max(initial=0.0)))
        if np.abs(Z - Z.T).max(initial=0.0) > 1e-12 * scale:
            raise ShapeError("Z must be symmetric within 1e-12")
        Z = (Z + Z.T) / 2.0
        Z.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "w", w)

    @property
    def p(self) -> int:
        return self.Z.shape[0]

    @property
    def r(self) -> int:
        return self.w.size


def point_to_vec(point: Point) -> np.ndarray:
    """Flatten a point into its N complex coordinates (packed z, then w)."""
    return np.concatenate([mat_to_vec(point.Z), point.w])


def vec_to_point(x: np.ndarray, r: int) -> Point:
    """Rebuild a Point from N complex coordinates, the last r of which are w."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    return Point(vec_to_mat(x[: x.size - r]), x[x.size - r :])


def cartan_gram(Z: np.ndarray) -> np.ndarray:
    """I - Z conj(Z); Hermitian whenever Z is symmetric."""
    Z = np.asarray(Z, dtype=complex)
    return np.eye(Z.shape[0]) - Z @ Z.conj()


def gram_eigvals(Z: np.ndarray) -> np.ndarray:
    """Eigenvalues of I - Z conj(Z), ascending."""
    return np.linalg.eigvalsh(cartan_gram(Z))


def logdet_gram(Z: np.ndarray) -> float:
    """log det(I - Z conj(Z)); requires membership in the Cartan domain."""
    lam = gram_eigvals(Z)
    if lam[0] <= 0.0:
        raise DomainMembershipError(
            f"I - Z conj(Z) is not positive definite (min eig {lam[0]:.3e})"
        )
    return float(np.sum(np.log(lam)))


def contains(params: DomainParams, Z: np.ndarray, w: np.ndarray) -> bool:
    """Strict membership test for (Z, w) in Y_II(r, p; K)."""
    Z = np.asarray(Z, dtype=complex)
    w = np.asarray(w, dtype=complex).reshape(-1)
    if Z.shape != (params.p, params.p):
        raise ShapeError(f"Z has shape {Z.shape}, expected {(params.p, params.p)}")
    if w.size != params.r:
        raise ShapeError(f"w has length {w.size}, expected {params.r}")
    lam = gram_eigvals(Z)
    if lam[0] <= 0.0:
        return False
    logdet = float(np.sum(np.log(lam)))
    w2 = float(np.vdot(w, w).real)
    return w2 < np.exp(logdet / params.K)


def aux_xy(params: DomainParams, point: Point) -> AuxXY:
    """Auxiliary scalars X in [0, 1) and Y = 1/(1-X) of an interior point."""
    lam = gram_eigvals(point.Z)
    if lam[0] <= 0.0:
        raise DomainMembershipError("point is outside the Cartan factor")
    logdet = float(np.sum(np.log(lam)))
    w2 = float(np.vdot(point.w, point.w).real)
    X = w2 * np.exp(-logdet / params.K)
    if X >= 1.0:
        raise DomainMembershipError(f"point is outside the domain (X = {X:.6g} >= 1)")
    return AuxXY(X=float(X), Y=float(1.0 / (1.0 - X)))


def e_vector(Z: np.ndarray) -> np.ndarray:
    """Packed vector of traces tr[(I - Z conj(Z))^(-1) B_kl conj(Z)].

    B_kl runs over the orthonormal symmetric basis in packed order.  The
    entries are minus the holomorphic gradient of log det(I - Z conj(Z)).
    """
    Z = np.asarray(Z, dtype=complex)
    M = cartan_gram(Z)
    lam = np.linalg.eigvalsh(M)
    if np.abs(lam).min() <= 1e-14 * max(1.0, np.abs(lam).max()):
        raise SingularityError("I - Z conj(Z) is numerically singular")
    P = Z.conj() @ np.linalg.inv(M)
    p = Z.shape[0]
    out = np.empty(packed_size(p), dtype=complex)
    for idx, (k, l) in enumerate(packed_indices(p)):
        out[idx] = P[k, k] if k == l else (P[k, l] + P[l, k]) / SQRT2
    return out


def sample_interior(
    params: DomainParams, seed: int, count: int, cap: float = 0.95
) -> list[Point]:
    """Deterministic interior sample.

    Z is a complex Gaussian symmetric matrix rescaled so its largest singular
    value is uniform in (0, cap); w is uniform in the ball of radius
    det(I - Z conj(Z))^(1/(2K)) shrunk by an independent uniform (0, cap)
    factor.  The resulting X never exceeds cap^2.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if not 0.0 < cap < 1.0:
        raise ValueError(f"cap must be in (0, 1), got {cap}")
    rng = np.random.default_rng(seed)
    p, r, K = params.p, params.r, params.K
    points = []
    for _ in range(count):
        G = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        Z = (G + G.T) / 2.0
        smax = np.linalg.norm(Z, 2)
        Z *= rng.uniform(0.0, cap) / smax
        logdet = logdet_gram(Z)
        u = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        u /= np.linalg.norm(u)
        rho = rng.uniform() ** (1.0 / (2 * r))
        w = u * rho * np.exp(logdet / (2.0 * K)) * rng.uniform(0.0, cap)
        points.append(Point(Z, w))
    return points
