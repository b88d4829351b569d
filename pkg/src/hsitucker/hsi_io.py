"""Hyperspectral cube ingestion, synthetic cubes and band-correlation diagnostics.

Cubes are oriented ``(lines, samples, bands)`` so that frontal slices are
bands. Two on-disk forms are understood: ENVI raw payloads described by a
``.hdr`` text header, and a native lossless container::

    bytes 0-3   magic b"THCR"
    byte  4     version (1)
    bytes 5-7   reserved, zero
    bytes 8-19  three little-endian uint32 dims (I1, I2, I3)
    bytes 20-   float64 little-endian values, i1 fastest
"""

import re
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, FormatError, HeaderParseError, TruncationError
from .tensor import as_tensor3

INTERLEAVES = ("bsq", "bil", "bip")

# ENVI "data type" codes supported here
ENVI_DATA_TYPES = {
    1: "u8",
    2: "i16",
    3: "i32",
    4: "f32",
    5: "f64",
    12: "u16",
}
_NUMPY_TYPES = {"u8": "u1", "i16": "i2", "u16": "u2", "i32": "i4", "f32": "f4", "f64": "f8"}
_ENVI_CODES = {name: code for code, name in ENVI_DATA_TYPES.items()}

NATIVE_MAGIC = b"THCR"
NATIVE_VERSION = 1
_NATIVE_HEADER = struct.Struct("<4sB3x3I")


@dataclass(frozen=True)
class CubeDescriptor:
    samples: int
    lines: int
    bands: int
    interleave: str = "bsq"
    data_type: str = "f32"
    byte_order: str = "little"
    header_offset: int = 0

    @property
    def dtype(self):
        return np.dtype(_NUMPY_TYPES[self.data_type]).newbyteorder("<" if self.byte_order == "little" else ">")

    @property
    def payload_bytes(self):
        return self.samples * self.lines * self.bands * self.dtype.itemsize + self.header_offset

    @property
    def dims(self):
        return (self.lines, self.samples, self.bands)


def _header_int(fields, key, default=None):
    if key not in fields:
        if default is None:
            raise HeaderParseError(f"ENVI header is missing required key {key!r}", key=key)
        return default
    try:
        return int(fields[key])
    except ValueError:
        raise HeaderParseError(f"ENVI header key {key!r} has non-integer value {fields[key]!r}", key=key) from None


def parse_envi_header(text):
    """Parse ENVI header text into a :class:`CubeDescriptor`.

    Keys are case-insensitive, ``{...}`` values may span lines and unknown
    keys are ignored. ``samples``, ``lines``, ``bands``, ``data type`` and
    ``interleave`` are required; ``byte order`` and ``header offset`` default
    to 0.
    """
    # fold multi-line brace values onto one line before splitting
    text = re.sub(r"\{[^}]*\}", lambda m: m.group(0).replace("\n", " "), text)
    fields = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(";") or "=" not in line:
            continue
        key, _, value = line.partition("=")
        fields[" ".join(key.lower().split())] = value.strip()

    samples = _header_int(fields, "samples")
    lines = _header_int(fields, "lines")
    bands = _header_int(fields, "bands")
    for key, value in (("samples", samples), ("lines", lines), ("bands", bands)):
        if value < 1:
            raise HeaderParseError(f"ENVI header key {key!r} must be positive, got {value}", key=key)

    code = _header_int(fields, "data type")
    if code not in ENVI_DATA_TYPES:
        raise HeaderParseError(f"unsupported ENVI data type code {code}", key="data type")

    if "interleave" not in fields:
        raise HeaderParseError("ENVI header is missing required key 'interleave'", key="interleave")
    interleave = fields["interleave"].lower()
    if interleave not in INTERLEAVES:
        raise HeaderParseError(f"unknown interleave {fields['interleave']!r}", key="interleave")

    order = _header_int(fields, "byte order", default=0)
    if order not in (0, 1):
        raise HeaderParseError(f"byte order must be 0 or 1, got {order}", key="byte order")
    offset = _header_int(fields, "header offset", default=0)
    if offset < 0:
        raise HeaderParseError(f"header offset must be non-negative, got {offset}", key="header offset")

    return CubeDescriptor(
        samples=samples,
        lines=lines,
        bands=bands,
        interleave=interleave,
        data_type=ENVI_DATA_TYPES[code],
        byte_order="little" if order == 0 else "big",
        header_offset=offset,
    )


def format_envi_header(desc):
    return (
        "ENVI\n"
        f"samples = {desc.samples}\n"
        f"lines = {desc.lines}\n"
        f"bands = {desc.bands}\n"
        f"header offset = {desc.header_offset}\n"
        "file type = ENVI Standard\n"
        f"data type = {_ENVI_CODES[desc.data_type]}\n"
        f"interleave = {desc.interleave}\n"
        f"byte order = {0 if desc.byte_order == 'little' else 1}\n"
    )


# on-disk axis order of each interleave, expressed in (lines, samples, bands) axes
_DISK_AXES = {"bsq": (2, 0, 1), "bil": (0, 2, 1), "bip": (0, 1, 2)}


def read_cube(desc, payload):
    """Decode an ENVI raw payload into a float64 ``(lines, samples, bands)`` tensor."""
    payload = bytes(payload)
    if len(payload) != desc.payload_bytes:
        raise TruncationError(desc.payload_bytes, len(payload))
    disk_shape = tuple(desc.dims[a] for a in _DISK_AXES[desc.interleave])
    raw = np.frombuffer(payload, dtype=desc.dtype, offset=desc.header_offset).reshape(disk_shape)
    return np.transpose(raw, np.argsort(_DISK_AXES[desc.interleave])).astype(np.float64)


def write_cube(x, desc):
    """Encode ``x`` as an ENVI raw payload for ``desc`` (inverse of :func:`read_cube`)."""
    x = as_tensor3(x)
    if x.shape != desc.dims:
        raise FormatError(f"cube shape {x.shape} does not match descriptor dims {desc.dims}")
    disk = np.transpose(x, _DISK_AXES[desc.interleave]).astype(desc.dtype)
    return bytes(desc.header_offset) + np.ascontiguousarray(disk).tobytes()


def write_native(x):
    x = as_tensor3(x)
    head = _NATIVE_HEADER.pack(NATIVE_MAGIC, NATIVE_VERSION, *x.shape)
    return head + np.ravel(x, order="F").astype("<f8").tobytes()


def read_native(data):
    data = bytes(data)
    if len(data) < _NATIVE_HEADER.size:
        raise FormatError("native cube header is truncated", offset=len(data))
    magic, version, *dims = _NATIVE_HEADER.unpack_from(data)
    if magic != NATIVE_MAGIC:
        raise FormatError(f"bad magic {magic!r}", offset=0)
    if version != NATIVE_VERSION:
        raise FormatError(f"unsupported native cube version {version}", offset=4)
    if data[5:8] != b"\0\0\0":
        raise FormatError("reserved bytes are not zero", offset=5)
    if min(dims) < 1:
        raise FormatError(f"dims must be positive, got {tuple(dims)}", offset=8)
    expected = _NATIVE_HEADER.size + 8 * int(np.prod(dims))
    if len(data) != expected:
        raise FormatError(f"payload has {len(data)} bytes, expected {expected}", offset=min(len(data), expected))
    values = np.frombuffer(data, dtype="<f8", offset=_NATIVE_HEADER.size)
    return as_tensor3(values.reshape(dims, order="F"))


def is_native(data):
    return bytes(data[:4]) == NATIVE_MAGIC


def load_cube(path, header=None):
    """Load a native cube, or an ENVI raw cube with ``header`` (or a sibling ``.hdr``)."""
    path = Path(path)
    data = path.read_bytes()
    if header is None and is_native(data):
        return read_native(data)
    if header is None:
        for candidate in (path.with_suffix(".hdr"), Path(str(path) + ".hdr")):
            if candidate.exists():
                header = candidate
                break
        else:
            raise FormatError(f"{path} is not a native cube and no ENVI header was found", offset=0)
    desc = parse_envi_header(Path(header).read_text())
    return read_cube(desc, data)


def save_native(path, x):
    Path(path).write_bytes(write_native(x))


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a band-correlated synthetic cube, see :func:`synth_hsi`.

    ``base_rank`` defaults to half the smaller spatial extent, which matches
    the half-dimension core sizes used throughout the benchmarks.
    """

    dims: tuple = (64, 64, 40)
    base_rank: Optional[int] = None
    band_correlation: float = 0.99
    noise_sigma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if len(self.dims) != 3 or min(self.dims) < 1:
            raise ValueError(f"dims must be three positive extents, got {self.dims}")
        i1, i2, _ = self.dims
        if self.base_rank is None:
            object.__setattr__(self, "base_rank", max(1, (min(i1, i2) + 1) // 2))
        if not 1 <= self.base_rank <= min(i1, i2):
            raise ValueError(f"base_rank must lie in [1, {min(i1, i2)}], got {self.base_rank}")
        if not 0.0 <= self.band_correlation <= 1.0:
            raise ValueError(f"band_correlation must lie in [0, 1], got {self.band_correlation}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be non-negative, got {self.noise_sigma}")


def synth_hsi(spec):
    """Deterministic synthetic cube with strongly correlated bands.

    Band ``k`` is ``s_k * A diag(w * c_k) Bᵀ`` plus white noise of standard
    deviation ``noise_sigma``. ``A`` and ``B`` hold ``base_rank`` random
    unit-norm spatial profiles and ``w`` decays like ``1/j``, so each band
    looks like an image with a falling singular spectrum. The
    coefficient vectors are ``c_k = m + τ z_k`` with ``z_k ⟂ m`` unit vectors
    and ``τ² = (1 - ρ)/(1 + ρ)``, which makes the cosine between any two
    coefficient vectors at least ``ρ = band_correlation``. ``s_k`` is a
    smooth positive brightness profile. The noise-free signal is scaled to
    unit RMS, so ``noise_sigma`` is relative to the signal.
    """
    i1, i2, i3 = spec.dims
    r = spec.base_rank
    rng = np.random.default_rng(spec.seed)
    a = rng.standard_normal((i1, r))
    b = rng.standard_normal((i2, r))
    a /= np.linalg.norm(a, axis=0)
    b /= np.linalg.norm(b, axis=0)
    w = 1.0 / np.arange(1, r + 1)

    m = np.ones(r) / np.sqrt(r)
    z = rng.standard_normal((i3, r))
    z -= np.outer(z @ m, m)
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    z = np.divide(z, norms, out=np.zeros_like(z), where=norms > 0)
    rho = spec.band_correlation
    tau = np.sqrt((1.0 - rho) / (1.0 + rho))
    coeffs = m + tau * z  # i3 x r

    phase = rng.uniform(0, 2 * np.pi)
    brightness = 1.0 + 0.3 * np.sin(np.linspace(0, np.pi, i3) + phase)

    # x[i1, i2, k] = sum_j a[i1, j] b[i2, j] w[j] c[k, j] s[k]
    spectral = coeffs * w * brightness[:, None]
    x = np.einsum("ij,kj,lj->ikl", a, b, spectral)
    x *= 1.0 / np.sqrt(np.mean(x**2))
    if spec.noise_sigma > 0:
        x = x + spec.noise_sigma * rng.standard_normal(x.shape)
    return x


def band_correlation(x):
    """Mean Pearson correlation of every band with all other bands.

    Returns a masked array of length ``I3``; constant bands are masked and
    left out of the other bands' averages.
    """
    x = as_tensor3(x)
    i3 = x.shape[2]
    if i3 < 2:
        raise DegenerateInputError("band correlation needs at least two bands")
    bands = x.reshape(-1, i3, order="F")
    centered = bands - bands.mean(axis=0)
    norms = np.linalg.norm(centered, axis=0)
    scale = np.max(np.abs(bands), axis=0)
    valid = norms > 1e-12 * np.maximum(scale, np.finfo(float).tiny) * np.sqrt(bands.shape[0])
    if valid.sum() < 2:
        raise DegenerateInputError("fewer than two bands have non-zero variance")
    unit = centered[:, valid] / norms[valid]
    corr = np.clip(unit.T @ unit, -1.0, 1.0)
    k = corr.shape[0]
    means = (corr.sum(axis=1) - np.diag(corr)) / (k - 1)
    out = np.ma.masked_all(i3)
    out[valid] = means
    return out
