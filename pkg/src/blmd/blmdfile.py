"""Binary container for complex cubes (.blmd).

Layout, all little-endian:

    magic   4 bytes  "BLMD"
    version u32      1
    ndims   u32
    dims    ndims x u64
    dtype   u8       1 = complex128, interleaved re/im float64
    payload 16 * prod(dims) bytes, frame-major with column-major frames
            (i.e. Fortran flattening of the array)

Round trips are bit-exact.
"""

import struct
from pathlib import Path

import numpy as np

__all__ = ["BlmdFormatError", "read_blmd", "write_blmd"]

_MAGIC = b"BLMD"
_VERSION = 1
_DTYPE_COMPLEX128 = 1


class BlmdFormatError(ValueError):
    pass


def write_blmd(path, array: np.ndarray) -> None:
    array = np.asarray(array, dtype=np.complex128)
    if array.ndim < 1:
        raise ValueError("expected at least a 1-D array")
    header = _MAGIC + struct.pack("<II", _VERSION, array.ndim)
    header += struct.pack(f"<{array.ndim}Q", *array.shape)
    header += struct.pack("<B", _DTYPE_COMPLEX128)
    payload = np.ascontiguousarray(array.ravel(order="F")).astype("<c16").tobytes()
    Path(path).write_bytes(header + payload)


def read_blmd(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    if len(blob) < 4 or blob[:4] != _MAGIC:
        raise BlmdFormatError(f"{path}: bad magic")
    if len(blob) < 12:
        raise BlmdFormatError(f"{path}: truncated header")
    version, ndims = struct.unpack_from("<II", blob, 4)
    if version != _VERSION:
        raise BlmdFormatError(f"{path}: unsupported version {version}")
    offset = 12
    if len(blob) < offset + 8 * ndims + 1:
        raise BlmdFormatError(f"{path}: truncated header")
    dims = struct.unpack_from(f"<{ndims}Q", blob, offset)
    offset += 8 * ndims
    (dtype_code,) = struct.unpack_from("<B", blob, offset)
    offset += 1
    if dtype_code != _DTYPE_COMPLEX128:
        raise BlmdFormatError(f"{path}: unsupported dtype code {dtype_code}")
    count = 1
    for d in dims:
        count *= d
    expected = 16 * count
    payload = blob[offset:]
    if len(payload) != expected:
        raise BlmdFormatError(
            f"{path}: payload holds {len(payload)} bytes, expected {expected}"
        )
    values = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    return values.reshape(dims, order="F")
