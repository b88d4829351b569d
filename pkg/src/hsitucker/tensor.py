"""Dense third-order tensors: unfoldings, mode products, norms.

A third-order tensor is a float64 ``numpy.ndarray`` of shape ``(I1, I2, I3)``;
frontal slice ``x[:, :, k]`` is band ``k`` of a hyperspectral cube. Matrices
are plain 2-D arrays. Modes are numbered 1, 2, 3.

Unfoldings place frontal slices side by side so that a cube whose bands all
equal ``B`` unfolds to ``kron(ones((1, I3)), B)`` along mode 1 and to
``kron(ones((1, I3)), B.T)`` along mode 2:

* mode 1: ``I1 x (I2*I3)``, column ``i2 + I2*i3``
* mode 2: ``I2 x (I1*I3)``, column ``i1 + I1*i3``
* mode 3: ``I3 x (I1*I2)``, column ``i1 + I1*i2``
"""

import numpy as np

from .errors import DimensionError, InputError

MODES = (1, 2, 3)

# axis permutation that brings mode n to the front while keeping the
# remaining axes in the column order listed above
_PERM = {1: (0, 1, 2), 2: (1, 0, 2), 3: (2, 0, 1)}
_INV_PERM = {n: tuple(np.argsort(p)) for n, p in _PERM.items()}


def check_mode(n):
    if n not in MODES:
        raise DimensionError(f"mode must be 1, 2 or 3, got {n!r}", mode=n)
    return n


def as_tensor3(x):
    """Validate ``x`` as a finite third-order tensor and return it as float64."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or min(x.shape) < 1:
        raise DimensionError(f"expected a non-empty 3-D array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InputError("tensor contains NaN or Inf")
    return x


def as_matrix(m):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or min(m.shape) < 1:
        raise DimensionError(f"expected a non-empty 2-D array, got shape {m.shape}")
    return m


def unfolded_shape(dims, n):
    check_mode(n)
    rows = dims[n - 1]
    return rows, int(np.prod(dims)) // rows


def matricize(x, n):
    """Mode-``n`` unfolding of ``x`` (see the module docstring for column order)."""
    x = as_tensor3(x)
    check_mode(n)
    return np.reshape(np.transpose(x, _PERM[n]), unfolded_shape(x.shape, n), order="F")


def fold(m, n, dims):
    """Inverse of :func:`matricize`: rebuild the ``dims`` tensor from its mode-``n`` unfolding."""
    m = as_matrix(m)
    check_mode(n)
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise DimensionError(f"dims must be three positive extents, got {dims}")
    if m.shape != unfolded_shape(dims, n):
        raise DimensionError(
            f"mode-{n} unfolding of {dims} has shape {unfolded_shape(dims, n)}, got {m.shape}",
            mode=n,
        )
    permuted = tuple(dims[i] for i in _PERM[n])
    return np.transpose(np.reshape(m, permuted, order="F"), _INV_PERM[n])


def mode_product(x, u, n):
    """Mode-``n`` product ``x ×n u``: every mode-``n`` fiber is left-multiplied by ``u``.

    ``u`` must have as many columns as ``x`` has entries along mode ``n``;
    the result has ``u.shape[0]`` entries along that mode.
    """
    x = as_tensor3(x)
    u = as_matrix(u)
    check_mode(n)
    if u.shape[1] != x.shape[n - 1]:
        raise DimensionError(
            f"mode-{n} product needs a matrix with {x.shape[n - 1]} columns, "
            f"got {u.shape[0]}x{u.shape[1]}",
            mode=n,
        )
    return np.moveaxis(np.tensordot(u, x, axes=(1, n - 1)), 0, n - 1)


def multilinear_project(x, factors, transposed=False):
    """Apply one mode product per mode, in mode order 1, 2, 3.

    With ``transposed=True`` this computes ``x ×1 U1ᵀ ×2 U2ᵀ ×3 U3ᵀ`` (core
    extraction); otherwise ``x ×1 U1 ×2 U2 ×3 U3`` (reconstruction). A ``None``
    entry in ``factors`` leaves that mode untouched.
    """
    if len(factors) != 3:
        raise DimensionError(f"need exactly three factors, got {len(factors)}")
    y = as_tensor3(x)
    for n, u in zip(MODES, factors):
        if u is None:
            continue
        u = as_matrix(u)
        y = mode_product(y, u.T if transposed else u, n)
    return y


def frobenius_norm(x):
    return float(np.linalg.norm(np.ravel(as_tensor3(x))))


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def frontal_slice(x, k):
    """Band ``k`` (0-based) of ``x`` as an ``I1 x I2`` matrix."""
    return as_tensor3(x)[:, :, k]
