"""DPM1 binary matrices: magic ``DPM1``, u32 rows, u32 cols (little-endian),
float32 row-major payload. float32 on disk, float64 in compute."""

from __future__ import annotations

import struct

import numpy as np

from .errors import ConvertError

MAGIC = b"DPM1"


def write_matrix(path, values: np.ndarray) -> None:
    values = np.asarray(values)
    if values.ndim != 2:
        raise ConvertError(f"DPM1 stores 2-D matrices, got shape {values.shape}")
    if not np.isfinite(values).all():
        raise ConvertError("refusing to write non-finite matrix entries")
    rows, cols = values.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", rows, cols))
        fh.write(np.ascontiguousarray(values, dtype="<f4").tobytes())


def read_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(12)
        if len(header) < 12 or header[:4] != MAGIC:
            raise ConvertError(f"{path}: not a DPM1 matrix file")
        rows, cols = struct.unpack("<II", header[4:])
        payload = fh.read(4 * rows * cols)
        if len(payload) != 4 * rows * cols:
            raise ConvertError(f"{path}: truncated payload for {rows}x{cols} matrix")
        if fh.read(1):
            raise ConvertError(f"{path}: trailing bytes after payload")
    values = np.frombuffer(payload, dtype="<f4").reshape(rows, cols)
    if not np.isfinite(values).all():
        raise ConvertError(f"{path}: matrix contains non-finite entries")
    return values.astype(np.float64)
