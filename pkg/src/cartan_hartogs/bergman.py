"""Bergman kernel, Bergman metric, and its equivalence with the KE metric.

The kernel has the closed shape

    K^(-m) * pi^(-m-r) * G(Y) * det(I - Z conj(Z))^-(p+1+r/K),

where G(Y) = sum_j b_j (r+j-1)! Y^(r+j) over j = 0..h with h = m + 1, and
the b_j are rational data of the domain.  For p = 1 the domain is a unit
ball and the b_j can be recovered exactly from the classical ball kernel;
for p > 1 they are accepted as configuration input.  Derivatives are taken
in X (dY/dX = Y^2), so the series for G' and G'' just shift the factorial.

Writing H = log G, the Bergman metric on the origin slice is block diagonal
with (H' X / K + p + 1 + r/K) I on the packed-Z coordinates and
H' I + H'' outer(conj(w*), w*) on the w coordinates.  The three ratios
Phi, Psi, Upsilon of the Bergman against the KE blocks all tend to N + 1 as
X -> 1, which yields two-sided equivalence constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .domain import DomainParams, Point, aux_xy, gram_eigvals
from .errors import CoefficientError, DomainMembershipError, FitError
from .linalg import packed_size


@dataclass(frozen=True)
class BergmanCoeffs:
    """Series coefficients b_0..b_h for a domain of shape (r, p)."""

    r: int
    p: int
    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=float).reshape(-1)
        if self.r < 1 or self.p < 1:
            raise CoefficientError(f"need r >= 1 and p >= 1, got r={self.r}, p={self.p}")
        if b.size != self.h + 1:
            raise CoefficientError(
                f"coefficient vector has length {b.size}, expected h+1 = {self.h + 1}"
            )
        if not np.all(np.isfinite(b)):
            raise CoefficientError("coefficients must be finite reals")
        if b[-1] == 0.0:
            raise CoefficientError("leading coefficient b_h must be nonzero")
        b.flags.writeable = False
        object.__setattr__(self, "b", b)

    @property
    def h(self) -> int:
        return packed_size(self.p) + 1


def g_series(coeffs: BergmanCoeffs, Y: float) -> tuple[float, float, float]:
    """(G(Y), dG/dX, d^2G/dX^2); factorials are exact integers."""
    if Y < 1.0:
        raise ValueError(f"Y must be >= 1, got {Y}")
    r = coeffs.r
    G = Gp = Gpp = 0.0
    for j, bj in enumerate(coeffs.b):
        base = math.factorial(r + j - 1) * Y ** (r + j)
        G += bj * base
        Gp += bj * base * (r + j) * Y
        Gpp += bj * base * (r + j) * (r + j + 1) * Y * Y
    if G == 0.0:
        raise CoefficientError("series G(Y) vanished; invalid coefficient vector")
    return (G, Gp, Gpp)


def bergman_kernel(params: DomainParams, coeffs: BergmanCoeffs, point: Point) -> float:
    """Bergman kernel value at an interior point (strictly positive)."""
    _check_shape(params, coeffs)
    _, Y = aux_xy(params, point)
    lam = gram_eigvals(point.Z)
    logdet = float(np.sum(np.log(lam)))
    G, _, _ = g_series(coeffs, Y)
    if G <= 0.0:
        raise CoefficientError(f"series G(Y) = {G:.6g} is not positive")
    m, r, K = params.m, params.r, params.K
    log_val = (
        -m * math.log(K)
        - (m + r) * math.log(math.pi)
        + math.log(G)
        - (params.p + 1.0 + r / K) * logdet
    )
    return float(math.exp(log_val))


def bergman_metric_origin(
    params: DomainParams, coeffs: BergmanCoeffs, wstar: np.ndarray
) -> np.ndarray:
    """Bergman metric matrix on the origin slice (Z = 0, w = wstar)."""
    _check_shape(params, coeffs)
    wstar = np.asarray(wstar, dtype=complex).reshape(-1)
    X = float(np.vdot(wstar, wstar).real)
    if X >= 1.0:
        raise DomainMembershipError(f"|wstar|^2 = {X:.6g} >= 1")
    Y = 1.0 / (1.0 - X)
    G, Gp, Gpp = g_series(coeffs, Y)
    Hp = Gp / G
    Hpp = Gpp / G - Hp * Hp
    m, r, K = params.m, params.r, params.K
    T = np.zeros((params.N, params.N), dtype=complex)
    T[:m, :m] = (Hp * X / K + params.p + 1.0 + r / K) * np.eye(m)
    T[m:, m:] = Hp * np.eye(r) + Hpp * np.outer(wstar.conj(), wstar)
    return T


class RatioTriple(NamedTuple):
    phi: float
    psi: float
    upsilon: float
    lam: float


def equivalence_ratios(
    params: DomainParams, coeffs: BergmanCoeffs, X: float, lam: float
) -> RatioTriple:
    """Blockwise Bergman/KE ratios at auxiliary value X and w*-modulus lam."""
    _check_shape(params, coeffs)
    if not 0.0 <= X < 1.0:
        raise ValueError(f"X must be in [0, 1), got {X}")
    if lam < 0.0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    Y = 1.0 / (1.0 - X)
    G, Gp, Gpp = g_series(coeffs, Y)
    Hp = Gp / G
    Hpp = Gpp / G - Hp * Hp
    K = params.K
    phi = (Hp * X / K + params.p + 1.0 + params.r / K) * K / Y
    psi = (Hp + Hpp * lam * lam) / (Y + Y * Y * lam * lam)
    upsilon = Hp / Y
    return RatioTriple(phi=float(phi), psi=float(psi), upsilon=float(upsilon), lam=float(lam))


@dataclass(frozen=True)
class EquivalenceBounds:
    """Scan estimates 0 < b <= a of the two-sided metric equivalence constants."""

    a: float
    b: float
    grid: str


def equivalence_bounds_scan(
    params: DomainParams, coeffs: BergmanCoeffs, grid_size: int = 256
) -> EquivalenceBounds:
    """Extremes of Phi, Psi, Upsilon over a grid clustered toward X = 1.

    X runs over a geometric ladder 1 - 10^(-6 i/(n-1)); lambda runs linearly
    over [0, sqrt(X Y)], the modulus range reachable on the origin slice.
    """
    _check_shape(params, coeffs)
    if grid_size < 2:
        raise ValueError(f"grid_size must be >= 2, got {grid_size}")
    n = grid_size
    hi = a = -math.inf
    lo = b = math.inf
    for i in range(n):
        X = 1.0 - 10.0 ** (-6.0 * i / (n - 1))
        Y = 1.0 / (1.0 - X)
        lam_max = math.sqrt(X * Y)
        for j in range(n):
            lam = lam_max * j / (n - 1)
            t = equivalence_ratios(params, coeffs, X, lam)
            hi = max(hi, t.phi, t.psi, t.upsilon)
            lo = min(lo, t.phi, t.psi, t.upsilon)
    if not lo > 0.0:
        raise CoefficientError(f"scan found a nonpositive ratio (min {lo:.6g})")
    grid = (
        f"X: {n} nodes, 1 - 10^(-6 i/(n-1)), i = 0..{n - 1}; "
        f"lambda: {n} linear nodes in [0, sqrt(X*Y)]"
    )
    return EquivalenceBounds(a=float(hi), b=float(lo), grid=grid)


def fit_coeffs_p1(r: int) -> BergmanCoeffs:
    """Recover the p = 1 coefficients from the unit-ball kernel of C^(r+1).

    Samples the classical kernel (r+1)! / pi^(r+1) (1 - |z|^2 - |w|^2)^-(r+2)
    at h+1 interior points with distinct Y, divides out the non-series
    factors, and solves the resulting Vandermonde-type system.  The fit must
    reproduce the sampled values to 1e-10 relative.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    h = 2  # p = 1
    spreads = [(0.15, 0.75), (0.1, 0.85), (0.25, 0.65)]
    z = 0.3  # fixed Cartan coordinate; only Y must vary across samples
    last_residual = math.inf
    for lo_x, hi_x in spreads:
        Xs = np.linspace(lo_x, hi_x, h + 1)
        Ys = 1.0 / (1.0 - Xs)
        M = np.empty((h + 1, h + 1))
        rhs = np.empty(h + 1)
        for i, (X, Y) in enumerate(zip(Xs, Ys)):
            w2 = X * (1.0 - z * z)
            ball = math.factorial(r + 1) / math.pi ** (r + 1) * (1.0 - z * z - w2) ** (
                -(r + 2.0)
            )
            rhs[i] = ball * math.pi ** (1 + r) * (1.0 - z * z) ** (2.0 + r)
            for j in range(h + 1):
                M[i, j] = math.factorial(r + j - 1) * Y ** (r + j)
        bvec = np.linalg.solve(M, rhs)
        residual = float(np.abs(M @ bvec - rhs).max() / np.abs(rhs).max())
        if residual <= 1e-10:
            return BergmanCoeffs(r=r, p=1, b=bvec)
        last_residual = residual
    raise FitError(f"ball-kernel fit residual {last_residual:.3e} exceeds 1e-10")


def _check_shape(params: DomainParams, coeffs: BergmanCoeffs) -> None:
    if coeffs.p != params.p or coeffs.r != params.r:
        raise CoefficientError(
            f"coefficients are for (r={coeffs.r}, p={coeffs.p}), "
            f"domain is (r={params.r}, p={params.p})"
        )


def dump_coeffs(coeffs: BergmanCoeffs) -> str:
    """Key-value text form of a coefficient vector."""
    body = ", ".join(f"{x:.17g}" for x in coeffs.b)
    return f"r = {coeffs.r}\np = {coeffs.p}\nb = {body}\n"


def load_coeffs(text: str) -> BergmanCoeffs:
    """Parse the key-value coefficient format (fields r, p, b)."""
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CoefficientError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        fields[key] = value
    missing = {"r", "p", "b"} - fields.keys()
    if missing:
        raise CoefficientError(f"missing fields: {sorted(missing)}")
    try:
        r = int(fields["r"])
        p = int(fields["p"])
        b = [float(tok) for tok in fields["b"].replace(",", " ").split()]
    except ValueError as exc:
        raise CoefficientError(f"malformed numeric field: {exc}") from exc
    return BergmanCoeffs(r=r, p=p, b=np.asarray(b))


def read_coeffs(path: str | Path) -> BergmanCoeffs:
    return load_coeffs(Path(path).read_text(encoding="utf-8"))
