"""Binary matrix formats shared by the model directory and the CLI.

Layout: 4-byte magic, little-endian u32 row count, little-endian u32 column
count, then rows x cols little-endian f64 values in row-major order. Topic
matrices use magic ``GPF1``; encoded feature matrices use ``ENC1``.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import ConfigError

MAGIC_TOPICS = b"GPF1"
MAGIC_ENCODED = b"ENC1"

_HEADER = struct.Struct("<II")


def write_matrix(path, arr: np.ndarray, magic: bytes) -> None:
    arr = np.ascontiguousarray(np.asarray(arr, dtype="<f8"))
    if arr.ndim != 2:
        raise ConfigError(f"expected a 2-D matrix, got shape {arr.shape}")
    if len(magic) != 4:
        raise ConfigError("magic must be exactly 4 bytes")
    with open(path, "wb") as fh:
        fh.write(magic)
        fh.write(_HEADER.pack(arr.shape[0], arr.shape[1]))
        fh.write(arr.tobytes(order="C"))


def read_matrix(path, magic: bytes) -> np.ndarray:
    with open(path, "rb") as fh:
        got = fh.read(4)
        if got != magic:
            raise ConfigError(f"{path}: bad magic {got!r}, expected {magic!r}")
        rows, cols = _HEADER.unpack(fh.read(_HEADER.size))
        data = fh.read(rows * cols * 8)
    if len(data) != rows * cols * 8:
        raise ConfigError(f"{path}: truncated matrix payload")
    return np.frombuffer(data, dtype="<f8").reshape(rows, cols).astype(np.float64)
