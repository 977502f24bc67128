"""Channel tensor files: a self-describing little-endian binary format.

Layout of a tensor file (all integers little-endian):

    bytes 0..7    magic ``RISCH1\\x00\\x00``
    bytes 8..11   uint32 format version (currently 1)
    bytes 12..15  reserved, zero
    bytes 16..27  three uint32 dims: realizations, rows, cols
    bytes 28..    payload: realizations x rows x cols complex values in
                  row-major order, each as two float64 (re, im)

One file holds one tensor; run metadata travels in a JSON sidecar written
with sorted keys and no timestamps, so reruns of the same configuration are
byte-identical. CSV export mirrors the payload as
``realization,row,col,re,im`` rows in the same order.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

__all__ = [
    "MAGIC",
    "FORMAT_VERSION",
    "write_tensor",
    "read_tensor",
    "write_tensor_csv",
    "write_metadata",
    "read_metadata",
    "file_digest",
]

MAGIC = b"RISCH1\x00\x00"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<8sI4s")
_DIMS = struct.Struct("<III")


def write_tensor(path, tensor) -> None:
    """Write a (realizations, rows, cols) complex tensor."""
    arr = np.ascontiguousarray(np.asarray(tensor, dtype=np.complex128))
    if arr.ndim != 3:
        raise ValueError(f"tensor must be 3-d (realizations, rows, cols), got shape {arr.shape}")
    if max(arr.shape) >= 2**32:
        raise ValueError(f"tensor dimension too large for the format: {arr.shape}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, b"\x00" * 4))
        fh.write(_DIMS.pack(*arr.shape))
        fh.write(arr.astype("<c16").tobytes(order="C"))

def read_tensor(path) -> np.ndarray:
    """Read a tensor file back; validates magic, version, and size."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size + _DIMS.size:
        raise ValueError(f"{path}: file too short to be a channel tensor")
    magic, version, _ = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}; not a channel tensor file")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    dims = _DIMS.unpack_from(raw, _HEADER.size)
    payload = raw[_HEADER.size + _DIMS.size :]
    expected = dims[0] * dims[1] * dims[2] * 16
    if len(payload) != expected:
        raise ValueError(
            f"{path}: payload is {len(payload)} bytes, expected {expected} for dims {dims}"
        )
    return np.frombuffer(payload, dtype="<c16").reshape(dims).astype(np.complex128)

def write_tensor_csv(path, tensor) -> None:
    """CSV mirror of a tensor, one value per row, row-major order."""
    arr = np.asarray(tensor, dtype=np.complex128)
    if arr.ndim != 3:
        raise ValueError(f"tensor must be 3-d, got shape {arr.shape}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("realization,row,col,re,im\n")
        n, rows, cols = arr.shape
        for i in range(n):
            for r in range(rows):
                for c in range(cols):
                    v = arr[i, r, c]
                    fh.write(f"{i},{r},{c},{v.real:.17g},{v.imag:.17g}\n")

def write_metadata(path, metadata: dict) -> None:
    """Deterministic JSON sidecar: sorted keys, LF newline, no timestamps."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(metadata, fh, sort_keys=True, indent=2)
        fh.write("\n")

def read_metadata(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)

def file_digest(path) -> str:
    """SHA-256 hex digest of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
