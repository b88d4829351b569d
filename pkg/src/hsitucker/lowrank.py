"""Deterministic truncated SVD, orthonormal bases and subspace angles."""

from typing import NamedTuple

import numpy as np

from .errors import InputError, RankError
from .tensor import as_matrix

ORTHONORMAL_TOL = 1e-8


class TruncatedSvd(NamedTuple):
    u: np.ndarray  # m x r
    s: np.ndarray  # r, non-increasing
    v: np.ndarray  # n x r


def canonicalize_signs(u, v=None):
    """Flip column pairs so the largest-magnitude entry of each column of ``u`` is positive.

    Ties resolve to the lowest row index (``argmax`` returns the first hit).
    """
    idx = np.argmax(np.abs(u), axis=0)
    signs = np.where(u[idx, np.arange(u.shape[1])] < 0, -1.0, 1.0)
    u = u * signs
    if v is None:
        return u
    return u, v * signs


def _checked(m):
    m = as_matrix(m)
    if not np.all(np.isfinite(m)):
        raise InputError("matrix contains NaN or Inf")
    return m


def truncated_svd(m, r):
    """The ``r`` leading singular triplets of ``m``, sign-canonicalized."""
    m = _checked(m)
    if not 1 <= r <= min(m.shape):
        raise RankError(f"rank {r} outside [1, {min(m.shape)}] for a {m.shape[0]}x{m.shape[1]} matrix")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    u, v = canonicalize_signs(u[:, :r], vt[:r].T)
    return TruncatedSvd(np.ascontiguousarray(u), s[:r].copy(), np.ascontiguousarray(v))


def leading_left_singular_vectors(m, r):
    """``r`` leading left singular vectors of ``m``; ``r`` may exceed ``m.shape[1]``.

    Past the rank of a wide-enough matrix the extra columns complete the basis
    of the row space (as a full SVD does), so any ``r <= m.shape[0]`` works.
    """
    m = _checked(m)
    rows, cols = m.shape
    if not 1 <= r <= rows:
        raise RankError(f"rank {r} outside [1, {rows}] for a matrix with {rows} rows")
    if r <= cols:
        return truncated_svd(m, r).u
    u = np.linalg.svd(m, full_matrices=True)[0]
    return np.ascontiguousarray(canonicalize_signs(u[:, :r]))


def random_orthonormal(rows, cols, seed=0):
    """Columnwise-orthonormal ``rows x cols`` matrix from a seeded Gaussian draw."""
    if cols < 1 or rows < 1:
        raise RankError(f"shape must be positive, got {rows}x{cols}")
    if cols > rows:
        raise RankError(f"cannot fit {cols} orthonormal columns in R^{rows}")
    g = np.random.default_rng(seed).standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    # fixing diag(r) > 0 makes the factorization unique
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def orthonormality_error(q):
    q = as_matrix(q)
    return float(np.max(np.abs(q.T @ q - np.eye(q.shape[1]))))


def is_orthonormal(q, tol=ORTHONORMAL_TOL):
    return orthonormality_error(q) <= tol


def principal_angles(a, b):
    """Principal angles (radians, ascending) between the column spans of ``a`` and ``b``.

    Mathematically ``arccos`` of the singular values of ``aᵀb``. Angles whose
    cosine is close to 1 are taken from the sines instead, since ``arccos``
    cannot resolve anything below ~1e-8 near 1.
    """
    a = _checked(a)
    b = _checked(b)
    if a.shape != b.shape:
        raise InputError(f"bases must have equal shapes, got {a.shape} and {b.shape}")
    for name, q in (("a", a), ("b", b)):
        if not is_orthonormal(q):
            raise InputError(f"{name} is not columnwise orthonormal (error {orthonormality_error(q):.3g})")
    c = a.T @ b
    cosines = np.clip(np.linalg.svd(c, compute_uv=False), 0.0, 1.0)  # descending
    sines = np.clip(np.linalg.svd(b - a @ c, compute_uv=False), 0.0, 1.0)[::-1]  # ascending
    angles = np.where(cosines**2 < 0.5, np.arccos(cosines), np.arcsin(sines))
    return np.sort(np.clip(angles, 0.0, np.pi / 2))
