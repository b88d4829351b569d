"""Rate-targeted Tucker compression of hyperspectral cubes."""

import numpy as np

from .container import MAX_BITS, MIN_BITS, OVERHEAD_BITS, CompressedCube, QuantizedArray
from .errors import DegenerateInputError, DimensionError, InputError, RateInfeasibleError
from .hooi import ConvergenceConfig, TuckerModel, decompose, reconstruct
from .initializers import FactorSet, Ranks
from .tensor import as_tensor3, mode_product

DEFAULT_FACTOR_BITS = 16
DEFAULT_CORE_BITS = 16
MAX_BPPPB = 64.0
SNR_CAP_DB = 300.0
RHO_RESOLUTION = 1e-4


def check_rate(bpppb):
    bpppb = float(bpppb)
    if not 0 < bpppb <= MAX_BPPPB:
        raise ValueError(f"bpppb must lie in (0, {MAX_BPPPB:g}], got {bpppb}")
    return bpppb


def quantize(values, bits):
    """Uniform scalar quantization of ``values`` onto ``2**bits`` levels spanning [min, max].

    Both endpoints are reconstruction levels, so the dequantization error is
    at most half a step, ``(max - min) / (2**bits - 1) / 2``.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise InputError("cannot quantize an empty array")
    if not np.all(np.isfinite(values)):
        raise InputError("cannot quantize non-finite values")
    if not MIN_BITS <= bits <= MAX_BITS:
        raise ValueError(f"bits must lie in [{MIN_BITS}, {MAX_BITS}], got {bits}")
    flat = np.ravel(values, order="F")
    lo, hi = float(flat.min()), float(flat.max())
    levels = (1 << bits) - 1
    if hi == lo:
        codes = np.zeros(flat.size, dtype=np.uint32)
    else:
        codes = np.clip(np.rint((flat - lo) / (hi - lo) * levels), 0, levels).astype(np.uint32)
    return QuantizedArray(bits, lo, hi, codes)


def dequantize(q, shape=None):
    levels = (1 << q.bits) - 1
    flat = q.minimum + q.codes.astype(np.float64) * ((q.maximum - q.minimum) / levels)
    # keep the top level exact despite rounding in the step
    flat[q.codes == levels] = q.maximum
    return flat if shape is None else flat.reshape(shape, order="F")


def model_bits(dims, ranks, factor_bits, core_bits, header_bits=OVERHEAD_BITS):
    r1, r2, r3 = ranks
    return core_bits * r1 * r2 * r3 + factor_bits * sum(d * r for d, r in zip(dims, ranks)) + header_bits


def ranks_for_ratio(dims, rho):
    """``max(1, round(rho * In))`` per mode, rounding halves up."""
    return Ranks(*(min(d, max(1, int(np.floor(rho * d + 0.5)))) for d in dims))


def select_ranks(
    dims, bpppb, factor_bits=DEFAULT_FACTOR_BITS, core_bits=DEFAULT_CORE_BITS, header_bits=OVERHEAD_BITS
):
    """Largest shared rank ratio whose model fits in ``bpppb * I1*I2*I3`` bits.

    The ratio is bisected on (0, 1] to a resolution of 1e-4.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise DimensionError(f"dims must be three positive extents, got {dims}")
    budget = check_rate(bpppb) * np.prod(dims)

    def fits(rho):
        return model_bits(dims, ranks_for_ratio(dims, rho), factor_bits, core_bits, header_bits) <= budget

    if not fits(0.0):
        smallest = model_bits(dims, (1, 1, 1), factor_bits, core_bits, header_bits)
        raise RateInfeasibleError(
            f"{bpppb} bpppb gives {budget:.0f} bits but the smallest model needs {smallest}"
        )
    if fits(1.0):
        return ranks_for_ratio(dims, 1.0)
    lo, hi = 0.0, 1.0
    while hi - lo > RHO_RESOLUTION:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if fits(mid) else (lo, mid)
    return ranks_for_ratio(dims, lo)


def canonical_full_rank(model):
    """Express every full-rank mode in the identity basis.

    When ``Rn == In`` any orthonormal ``U(n)`` is optimal, so folding it into
    the core (``G ×n U(n)``) leaves the reconstruction unchanged. The identity
    quantizes exactly and keeps the core in the data's own range.
    """
    factors = list(model.factors)
    core = model.core
    for n, u in enumerate(factors):
        if u.shape[0] == u.shape[1]:
            core = mode_product(core, u, n + 1)
            factors[n] = np.eye(u.shape[0])
    return TuckerModel(FactorSet(*factors), core)


def quantize_model(model, factor_bits=DEFAULT_FACTOR_BITS, core_bits=DEFAULT_CORE_BITS):
    return CompressedCube(
        dims=tuple(int(d) for d in model.dims),
        ranks=tuple(int(r) for r in model.ranks),
        factor_bits=factor_bits,
        core_bits=core_bits,
        factors=tuple(quantize(u, factor_bits) for u in model.factors),
        core=quantize(model.core, core_bits),
    )


def dequantize_model(cube):
    factors = FactorSet(*(dequantize(q, (d, r)) for q, d, r in zip(cube.factors, cube.dims, cube.ranks)))
    return TuckerModel(factors, dequantize(cube.core, tuple(cube.ranks)))


def compress(
    x,
    bpppb,
    strategy="correlation",
    cfg=None,
    factor_bits=DEFAULT_FACTOR_BITS,
    core_bits=DEFAULT_CORE_BITS,
    return_trace=False,
):
    """Compress ``x`` to at most ``bpppb`` bits per pixel per band.

    With ``return_trace=True`` returns ``(cube, trace)``.
    """
    x = as_tensor3(x)
    ranks = select_ranks(x.shape, bpppb, factor_bits, core_bits)
    model, trace = decompose(x, ranks, strategy, cfg or ConvergenceConfig())
    cube = quantize_model(canonical_full_rank(model), factor_bits, core_bits)
    return (cube, trace) if return_trace else cube


def decompress(cube):
    return reconstruct(dequantize_model(cube))


def snr(original, reconstructed):
    """``10 log10(Σx² / Σ(x - x̂)²)`` in dB, capped at 300 dB for exact reconstructions."""
    x = as_tensor3(original)
    y = as_tensor3(reconstructed)
    if x.shape != y.shape:
        raise DimensionError(f"shapes differ: {x.shape} vs {y.shape}")
    signal = float(np.sum(x**2))
    if signal == 0:
        raise DegenerateInputError("SNR is undefined for an all-zero signal")
    noise = float(np.sum((x - y) ** 2))
    if noise == 0:
        return SNR_CAP_DB
    return min(SNR_CAP_DB, 10.0 * np.log10(signal / noise))
