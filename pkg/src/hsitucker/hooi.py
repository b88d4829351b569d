"""Tucker refinement by higher-order orthogonal iteration (ALS sweeps)."""

import time
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .errors import DegenerateInputError, DimensionError
from .initializers import FactorSet, InitStrategy, Ranks, initialize
from .lowrank import leading_left_singular_vectors
from .tensor import as_tensor3, matricize, multilinear_project


@dataclass(frozen=True)
class ConvergenceConfig:
    """Stop once a sweep improves fitness by less than ``tol`` (absolute), or after ``max_iters`` sweeps."""

    tol: float = 1e-6
    max_iters: int = 50

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")


@dataclass
class TuckerModel:
    factors: FactorSet
    core: np.ndarray

    def __post_init__(self):
        self.factors = FactorSet(*self.factors)
        ranks = self.factors.ranks
        if self.core.shape != tuple(ranks):
            raise DimensionError(f"core shape {self.core.shape} does not match factor ranks {tuple(ranks)}")

    @property
    def dims(self):
        return tuple(u.shape[0] for u in self.factors)

    @property
    def ranks(self):
        return self.factors.ranks


@dataclass
class DecompositionTrace:
    """Per-sweep record of one decomposition.

    ``fitness_per_iteration[k]`` is the fitness after sweep ``k + 1`` and
    ``fitness_differences[k]`` its gain over the previous sweep; for ``k = 0``
    the baseline is ``initial_fitness``, the fitness of the initializer's
    factors with their optimal core.
    """

    strategy: str
    tol: float
    initial_fitness: float = float("nan")
    fitness_per_iteration: List[float] = field(default_factory=list)
    fitness_differences: List[float] = field(default_factory=list)
    init_seconds: float = 0.0
    iteration_seconds: float = 0.0
    converged: bool = False

    @property
    def iterations(self):
        """Sweeps executed, including the final one whose gain fell below ``tol``."""
        return len(self.fitness_per_iteration)

    @property
    def improving_sweeps(self):
        """Sweeps whose fitness gain was at least ``tol``."""
        return self.iterations - 1 if self.converged else self.iterations

    @property
    def total_seconds(self):
        return self.init_seconds + self.iteration_seconds

    @property
    def final_fitness(self):
        return self.fitness_per_iteration[-1] if self.fitness_per_iteration else self.initial_fitness

    def record(self, value):
        previous = self.fitness_per_iteration[-1] if self.fitness_per_iteration else self.initial_fitness
        self.fitness_per_iteration.append(value)
        self.fitness_differences.append(value - previous)


def core_of(x, factors):
    """Core tensor ``x ×1 U1ᵀ ×2 U2ᵀ ×3 U3ᵀ``."""
    return multilinear_project(x, tuple(factors), transposed=True)


def reconstruct(model):
    return multilinear_project(model.core, tuple(model.factors), transposed=False)


def _relative_error(x, xhat):
    norm = np.linalg.norm(x)
    if norm == 0:
        raise DegenerateInputError("fitness is undefined for an all-zero tensor")
    return np.linalg.norm(x - xhat) / norm


def fitness(x, model):
    """``1 - ‖x - x̂‖F / ‖x‖F`` for the reconstruction ``x̂`` of ``model``."""
    x = as_tensor3(x)
    xhat = reconstruct(model)
    if xhat.shape != x.shape:
        raise DimensionError(f"model reconstructs shape {xhat.shape}, tensor has {x.shape}")
    return float(1.0 - _relative_error(x, xhat))


def hooi_sweep(x, factors):
    """One ALS sweep over modes 1, 2, 3; returns the updated factors and the matching core."""
    u = list(factors)
    ranks = [f.shape[1] for f in u]
    for n in range(3):
        others = [None if m == n else u[m] for m in range(3)]
        y = multilinear_project(x, others, transposed=True)
        u[n] = leading_left_singular_vectors(matricize(y, n + 1), ranks[n])
    # y is x projected on modes 1 and 2 by the new factors
    core = np.tensordot(y, u[2], axes=(2, 0))
    return FactorSet(*u), core


def decompose(x, ranks, strategy="correlation", cfg=None):
    """Tucker decomposition of ``x`` at ``ranks`` started from ``strategy``.

    Returns ``(model, trace)``. Hitting ``cfg.max_iters`` is not an error;
    ``trace.converged`` tells whether the tolerance was met.
    """
    x = as_tensor3(x)
    if not np.any(x):
        raise DegenerateInputError("cannot decompose an all-zero tensor")
    cfg = cfg or ConvergenceConfig()
    strategy = InitStrategy.coerce(strategy)
    ranks = Ranks(*ranks).check(x.shape)
    trace = DecompositionTrace(strategy=str(strategy), tol=cfg.tol)

    start = time.perf_counter()
    factors = initialize(x, ranks, strategy)
    trace.init_seconds = time.perf_counter() - start

    start = time.perf_counter()
    core = core_of(x, factors)
    trace.initial_fitness = fitness(x, TuckerModel(factors, core))
    for _ in range(cfg.max_iters):
        factors, core = hooi_sweep(x, factors)
        trace.record(fitness(x, TuckerModel(factors, core)))
        if abs(trace.fitness_differences[-1]) < cfg.tol:
            trace.converged = True
            break
    trace.iteration_seconds = time.perf_counter() - start
    return TuckerModel(factors, core), trace
