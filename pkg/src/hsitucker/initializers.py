"""Tucker factor initialization: random, HOSVD and reference-band correlation.

The correlation initializer exploits the strong spectral correlation of
hyperspectral cubes. When every band is close to a reference band ``X̄``,
the mode-1 and mode-2 unfoldings are close to ``[X̄ | X̄ | ...]`` and
``[X̄ᵀ | X̄ᵀ | ...]``, so their leading left singular vectors are those of
``X̄`` and ``X̄ᵀ``. One SVD of the ``I1 x I2`` mean band therefore replaces
the two large unfolding SVDs; only the spectral factor still needs an SVD,
and that one runs on the already-shrunk ``R1 x R2 x I3`` projection.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .errors import RankError
from .lowrank import canonicalize_signs, leading_left_singular_vectors, random_orthonormal
from .tensor import as_tensor3, matricize, multilinear_project

RANDOM = "random"
SVD = "svd"
CORRELATION = "correlation"
STRATEGY_KINDS = (RANDOM, SVD, CORRELATION)


class Ranks(NamedTuple):
    r1: int
    r2: int
    r3: int

    @classmethod
    def half(cls, dims):
        """Ranks at half of every dimension, rounded half-up (145 -> 73)."""
        return cls(*(max(1, int(np.floor(d / 2 + 0.5))) for d in dims))

    def check(self, dims):
        for n, (r, d) in enumerate(zip(self, dims), start=1):
            if not 1 <= r <= d:
                raise RankError(f"mode-{n} rank {r} outside [1, {d}]")
        return self


class FactorSet(NamedTuple):
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray

    @property
    def ranks(self):
        return Ranks(*(u.shape[1] for u in self))


@dataclass(frozen=True)
class InitStrategy:
    kind: str
    seed: int = 0

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown init strategy {self.kind!r}; choose from {STRATEGY_KINDS}")

    @classmethod
    def random(cls, seed=0):
        return cls(RANDOM, seed)

    @classmethod
    def svd(cls):
        return cls(SVD)

    @classmethod
    def correlation(cls):
        return cls(CORRELATION)

    @classmethod
    def coerce(cls, value, seed=0):
        """Accept an ``InitStrategy`` or one of the names ``random``/``svd``/``correlation``."""
        if isinstance(value, cls):
            return value
        return cls(str(value).lower(), seed)

    def __str__(self):
        return f"random(seed={self.seed})" if self.kind == RANDOM else self.kind


@dataclass(frozen=True)
class CostEstimate:
    """Multiplication counts of an initializer, using ``M*N**2`` per ``M x N`` SVD.

    ``per_factor`` follows the published formulas verbatim. For the
    correlation strategy the single reference-band SVD yields both ``u1`` and
    ``u2``; its count is booked on ``u1`` and ``u2`` is 0.
    ``projected_u3`` is a diagnostic only: the tighter count ``I3*(R1*R2)**2``
    of the spectral SVD actually performed on the projected tensor.
    """

    per_factor: Tuple[int, int, int]
    projected_u3: Optional[int] = None

    @property
    def init_multiplications(self):
        return sum(self.per_factor)


def _dims_of(x):
    return as_tensor3(x).shape


def mean_band(x):
    """Reference band: the average of all frontal slices."""
    return as_tensor3(x).mean(axis=2)


def reference_band_factors(x, r1, r2):
    """Spatial factors ``(u1, u2)`` from one SVD of the mean band.

    ``u1`` comes from the left singular vectors of ``X̄`` and ``u2`` from the
    right ones. Ranks past ``min(I1, I2)`` are completed with an orthonormal
    basis of the complement, like a full SVD would.
    """
    band = mean_band(x)
    i1, i2 = band.shape
    if not 1 <= r1 <= i1 or not 1 <= r2 <= i2:
        raise RankError(f"spatial ranks ({r1}, {r2}) must lie within the reference band size {i1}x{i2}")
    k = min(i1, i2)
    u, _, vt = np.linalg.svd(band, full_matrices=max(r1, r2) > k)
    v = vt.T
    # singular pairs share the sign chosen on the u side; completion columns
    # (beyond k) are canonicalized on their own
    paired_u, paired_v = canonicalize_signs(u[:, :k], v[:, :k])
    u1 = np.concatenate([paired_u, canonicalize_signs(u[:, k:r1])], axis=1) if r1 > k else paired_u[:, :r1]
    u2 = np.concatenate([paired_v, canonicalize_signs(v[:, k:r2])], axis=1) if r2 > k else paired_v[:, :r2]
    return np.ascontiguousarray(u1), np.ascontiguousarray(u2)


def spectral_factor(x, u1, u2, r3):
    """``u3`` from the mode-3 unfolding of ``x ×1 u1ᵀ ×2 u2ᵀ`` (size ``R1 x R2 x I3``)."""
    projected = multilinear_project(x, (u1, u2, None), transposed=True)
    return leading_left_singular_vectors(matricize(projected, 3), r3)


def correlation_init(x, ranks):
    """Correlation-based initialization from the mean band."""
    x = as_tensor3(x)
    ranks = Ranks(*ranks).check(x.shape)
    u1, u2 = reference_band_factors(x, ranks.r1, ranks.r2)
    u3 = spectral_factor(x, u1, u2, ranks.r3)
    return FactorSet(u1, u2, u3)


def hosvd_factor(x, n, r):
    return leading_left_singular_vectors(matricize(x, n), r)


def hosvd_init(x, ranks):
    """SVD-based initialization: leading left singular vectors of each unfolding."""
    x = as_tensor3(x)
    ranks = Ranks(*ranks).check(x.shape)
    return FactorSet(*(hosvd_factor(x, n, r) for n, r in zip((1, 2, 3), ranks)))


def random_init(x, ranks, seed=0):
    """Random orthonormal factors; mode ``n`` uses seed ``seed ^ n``."""
    dims = _dims_of(x)
    ranks = Ranks(*ranks).check(dims)
    return FactorSet(*(random_orthonormal(d, r, seed ^ n) for n, (d, r) in enumerate(zip(dims, ranks), start=1)))


def initialize(x, ranks, strategy):
    strategy = InitStrategy.coerce(strategy)
    if strategy.kind == RANDOM:
        return random_init(x, ranks, strategy.seed)
    if strategy.kind == SVD:
        return hosvd_init(x, ranks)
    return correlation_init(x, ranks)


def estimate_init_cost(dims, strategy, ranks=None):
    i1, i2, i3 = (int(d) for d in dims)
    if min(i1, i2, i3) < 1:
        raise ValueError(f"dims must be positive, got {dims}")
    kind = InitStrategy.coerce(strategy).kind
    if kind == RANDOM:
        return CostEstimate((0, 0, 0))
    if kind == SVD:
        return CostEstimate((i1 * (i2 * i3) ** 2, i2 * (i3 * i1) ** 2, i3 * (i1 * i2) ** 2))
    projected = None
    if ranks is not None:
        r1, r2, _ = ranks
        projected = i3 * (r1 * r2) ** 2
    return CostEstimate((i1 * i2**2, 0, i3 * (i1 * i2) ** 2), projected_u3=projected)
