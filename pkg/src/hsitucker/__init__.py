"""Tucker compression of hyperspectral cubes with correlation-based initialization."""

from .codec import compress, decompress, select_ranks, snr
from .hooi import ConvergenceConfig, DecompositionTrace, TuckerModel, core_of, decompose, fitness, reconstruct
from .initializers import (
    FactorSet,
    InitStrategy,
    Ranks,
    correlation_init,
    estimate_init_cost,
    hosvd_init,
    mean_band,
    random_init,
)
from .tensor import fold, frobenius_norm, kron, matricize, mode_product, multilinear_project

__version__ = "0.1.0"
