"""Complex symmetric matrix kit.

A p x p complex symmetric matrix Z is stored in packed coordinates

    z = (z_11, z_12, ..., z_1p, z_22, ..., z_2p, ..., z_pp),

row-major over the upper triangle, with the off-diagonal entries of Z equal
to z_kl / sqrt(2).  This normalization makes the packing a linear isometry:
|z|^2 = tr(Z conj(Z)).
"""

from __future__ import annotations

import numpy as np

from .errors import PositiveDefiniteError, ShapeError, SymmetryError

SQRT2 = float(np.sqrt(2.0))


def packed_size(p: int) -> int:
    """Number of packed coordinates of a p x p symmetric matrix."""
    return p * (p + 1) // 2


def packed_order(m: int) -> int:
    """Invert m = p(p+1)/2; reject lengths that are not triangular numbers."""
    p = int((np.sqrt(8 * m + 1) - 1) / 2)
    if packed_size(p) != m:
        raise ShapeError(f"length {m} is not p(p+1)/2 for any integer p")
    return p


def packed_indices(p: int) -> list[tuple[int, int]]:
    """0-based (k, l) pairs, k <= l, in packed coordinate order."""
    return [(k, l) for k in range(p) for l in range(k, p)]


def vec_to_mat(z: np.ndarray) -> np.ndarray:
    """Unpack coordinates into the symmetric matrix they parametrize."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    p = packed_order(z.size)
    Z = np.zeros((p, p), dtype=complex)
    for idx, (k, l) in enumerate(packed_indices(p)):
        if k == l:
            Z[k, k] = z[idx]
        else:
            Z[k, l] = Z[l, k] = z[idx] / SQRT2
    return Z


def mat_to_vec(Z: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Pack a symmetric matrix into coordinates.

    Inverse of vec_to_mat up to the one rounding of the sqrt(2) rescale on
    off-diagonal coordinates; diagonal coordinates round-trip bit-exactly.
    """
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {Z.shape}")
    scale = max(1.0, float(np.abs(Z).max(initial=0.0)))
    if np.abs(Z - Z.T).max(initial=0.0) > tol * scale:
        raise SymmetryError("matrix is not symmetric within tolerance")
    p = Z.shape[0]
    out = np.empty(packed_size(p), dtype=complex)
    for idx, (k, l) in enumerate(packed_indices(p)):
        out[idx] = Z[k, k] if k == l else SQRT2 * Z[k, l]
    return out


def basis_sym(k: int, l: int, p: int) -> np.ndarray:
    """Orthonormal symmetric basis matrix for the (k, l) coordinate, 1-based.

    Equals the elementary matrix E_kk for k == l and (E_kl + E_lk)/sqrt(2)
    for k < l; the family is orthonormal for <A, B> = tr(A conj(B)^t).
    """
    if not (1 <= k <= l <= p):
        raise IndexError(f"need 1 <= k <= l <= p, got k={k}, l={l}, p={p}")
    B = np.zeros((p, p), dtype=complex)
    if k == l:
        B[k - 1, k - 1] = 1.0
    else:
        B[k - 1, l - 1] = B[l - 1, k - 1] = 1.0 / SQRT2
    return B


def sym_kron(B: np.ndarray) -> np.ndarray:
    """Matrix of the map Z -> B Z B^t on symmetric matrices, packed coordinates.

    Column (k, l) is mat_to_vec(B @ basis_sym(k, l) @ B.T).  This is the
    symmetric (degree-2) representation: sym_kron(B1 @ B2) equals
    sym_kron(B1) @ sym_kron(B2) and det sym_kron(B) = det(B)^(p+1).
    """
    B = np.asarray(B, dtype=complex)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {B.shape}")
    p = B.shape[0]
    pairs = packed_indices(p)
    m = len(pairs)
    S = np.empty((m, m), dtype=complex)
    for col, (k, l) in enumerate(pairs):
        E = basis_sym(k + 1, l + 1, p)
        img = B @ E @ B.T
        # pack without the symmetry check: B E B^t is symmetric by construction
        for row, (s, t) in enumerate(pairs):
            S[row, col] = img[s, s] if s == t else SQRT2 * img[s, t]
    return S


def hermitian_sqrt(H: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Principal Hermitian square root of a Hermitian positive-definite matrix."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.abs(H).max(initial=0.0)))
    if np.abs(H - H.conj().T).max(initial=0.0) > tol * scale:
        raise SymmetryError("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(H)
    if w.min() <= 0.0:
        raise PositiveDefiniteError(f"matrix is not positive definite (min eig {w.min():.3e})")
    return (V * np.sqrt(w)) @ V.conj().T
