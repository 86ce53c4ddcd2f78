"""Reader and writer for the SFLD1 binary field format.

A file is one JSON header line followed by little-endian complex128
records in i-major, l-fastest order.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .grid import BandLimit, GridSpec, SampledField

MAGIC = "sfld1"
LAYOUT = "i-major-l-fastest"
DTYPE = "c128-le"


class SfldFormatError(ValueError):
    pass


def atomic_write_bytes(path, data: bytes) -> None:
    """Write ``data`` to ``path`` through a temp file in the same directory."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def encode(values, dims, extra: dict | None = None) -> bytes:
    header = {"magic": MAGIC, "dims": [int(d) for d in dims], "layout": LAYOUT, "dtype": DTYPE}
    if extra:
        header.update(extra)
    arr = np.ascontiguousarray(np.asarray(values, dtype="<c16").reshape(-1))
    return json.dumps(header).encode("ascii") + b"\n" + arr.tobytes()


def decode(data: bytes) -> tuple[dict, np.ndarray]:
    nl = data.find(b"\n")
    if nl < 0:
        raise SfldFormatError("missing header line")
    try:
        header = json.loads(data[:nl].decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SfldFormatError(f"bad header: {exc}") from None
    if not isinstance(header, dict) or header.get("magic") != MAGIC:
        raise SfldFormatError("bad magic")
    if header.get("layout", LAYOUT) != LAYOUT or header.get("dtype", DTYPE) != DTYPE:
        raise SfldFormatError("unsupported layout or dtype")
    dims = header.get("dims")
    if not isinstance(dims, list) or len(dims) != 3 or any(
        not isinstance(d, int) or d < 1 for d in dims
    ):
        raise SfldFormatError(f"bad dims {dims!r}")
    body = data[nl + 1 :]
    n = dims[0] * dims[1] * dims[2]
    if len(body) != 16 * n:
        raise SfldFormatError(f"expected {16 * n} payload bytes, found {len(body)}")
    vals = np.frombuffer(body, dtype="<c16").astype(np.complex128).reshape(dims)
    return header, vals


def write_field(path, field: SampledField, extra: dict | None = None) -> None:
    atomic_write_bytes(path, encode(field.values, field.dims, extra))


def read_field(path) -> SampledField:
    with open(path, "rb") as fh:
        header, vals = decode(fh.read())
    return SampledField(GridSpec(tuple(header["dims"])), vals)


def write_coeffs(path, coeffs) -> None:
    """Persist a FourierCoefficientSet (k1-major cube over -K..K)."""
    K = list(coeffs.K.K)
    atomic_write_bytes(path, encode(coeffs.cube, coeffs.cube.shape, {"kind": "coeffs", "K": K}))


def read_coeffs(path):
    from .ffs import FourierCoefficientSet

    with open(path, "rb") as fh:
        header, vals = decode(fh.read())
    if header.get("kind") != "coeffs" or "K" not in header:
        raise SfldFormatError("not a coefficient file")
    K = BandLimit(tuple(header["K"]))
    if tuple(header["dims"]) != K.grid.dims:
        raise SfldFormatError("coefficient dims do not match K")
    return FourierCoefficientSet(K, vals)
