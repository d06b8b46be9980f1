"""Binary model checkpoints.

Layout (all little-endian): magic ``DPW1``, u32 layer count, then per layer
u32 rows, u32 cols, rows*cols f64 weights row-major, rows f64 biases, and a
u8 activation tag (0=identity, 1=elu, 2=sigmoid).
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import InputError
from .mlp import MlpParams

MAGIC = b"DPW1"
_TAG_OF = {"identity": 0, "elu": 1, "sigmoid": 2}
_ACT_OF = {v: k for k, v in _TAG_OF.items()}


def save_mlp(path, params: MlpParams) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", params.n_layers))
        for w, b, act in zip(params.weights, params.biases, params.activations):
            rows, cols = w.shape
            fh.write(struct.pack("<II", rows, cols))
            fh.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())
            fh.write(struct.pack("B", _TAG_OF[act]))


def _read_exact(fh, n: int, path, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise InputError(f"{path}: truncated checkpoint while reading {what}")
    return data


def load_mlp(path) -> MlpParams:
    with open(path, "rb") as fh:
        if _read_exact(fh, 4, path, "magic") != MAGIC:
            raise InputError(f"{path}: not a DPW1 checkpoint")
        (n_layers,) = struct.unpack("<I", _read_exact(fh, 4, path, "layer count"))
        weights, biases, activations = [], [], []
        for l in range(n_layers):
            rows, cols = struct.unpack("<II", _read_exact(fh, 8, path, f"layer {l} dims"))
            w = np.frombuffer(_read_exact(fh, 8 * rows * cols, path, f"layer {l} weights"),
                              dtype="<f8").reshape(rows, cols).copy()
            b = np.frombuffer(_read_exact(fh, 8 * rows, path, f"layer {l} biases"),
                              dtype="<f8").copy()
            (tag,) = struct.unpack("B", _read_exact(fh, 1, path, f"layer {l} activation"))
            if tag not in _ACT_OF:
                raise InputError(f"{path}: unknown activation tag {tag}")
            weights.append(w)
            biases.append(b)
            activations.append(_ACT_OF[tag])
        if fh.read(1):
            raise InputError(f"{path}: trailing bytes after last layer")
    try:
        return MlpParams(weights=weights, biases=biases, activations=activations)
    except ValueError as exc:
        raise InputError(f"{path}: invalid checkpoint ({exc})") from None
