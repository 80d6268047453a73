"""JSON interchange for states and channels.

Complex numbers are ``[re, im]`` pairs. Layouts::

    {"type": "density_matrix", "dims": [2, 2], "matrix": [[[re, im], ...], ...]}
    {"type": "pure_state", "dims": [2], "amplitudes": [[re, im], ...]}
    {"type": "channel", "in_dim": 2, "out_dim": 2, "operators": [<matrix>, ...]}
    {"type": "hiding", "spectrum": [0.3, 0.7], "in_dim": 2}

A bare list of amplitudes is read as a pure state.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import HidingSpec, KrausChannel, hiding_channel
from .errors import DimensionError, ValidationError
from .tensor_core import DensityMatrix, PureState


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValidationError(f"complex numbers are encoded as [re, im], got {v!r}")


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def decode_vector(data) -> np.ndarray:
    return np.array([decode_complex(z) for z in data], dtype=np.complex128)


def encode_matrix(m) -> list:
    return [encode_vector(row) for row in np.asarray(m)]


def decode_matrix(data) -> np.ndarray:
    rows = [decode_vector(row) for row in data]
    if not rows or len({r.size for r in rows}) != 1:
        raise DimensionError("matrix rows must be non-empty and of equal length")
    return np.stack(rows)


def to_json(obj) -> dict:
    if isinstance(obj, DensityMatrix):
        return {"type": "density_matrix", "dims": list(obj.dims), "normalized": obj.normalized,
                "matrix": encode_matrix(obj.matrix)}
    if isinstance(obj, PureState):
        return {"type": "pure_state", "dims": list(obj.dims), "amplitudes": encode_vector(obj.amplitudes)}
    if isinstance(obj, KrausChannel):
        out = {"type": "channel", "in_dim": obj.in_dim, "out_dim": obj.out_dim,
               "operators": [encode_matrix(k) for k in obj.operators]}
        if obj.labels is not None:
            out["labels"] = [list(lab) if isinstance(lab, tuple) else lab for lab in obj.labels]
        return out
    if isinstance(obj, HidingSpec):
        return {"type": "hiding", "spectrum": [float(x) for x in obj.spectrum], "in_dim": obj.in_dim}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(data):
    if isinstance(data, list):
        return PureState(decode_vector(data))
    if not isinstance(data, dict):
        raise ValidationError("expected a JSON object or amplitude list")
    kind = data.get("type")
    if kind is None:
        for key, guess in (("operators", "channel"), ("amplitudes", "pure_state"),
                           ("matrix", "density_matrix"), ("spectrum", "hiding")):
            if key in data:
                kind = guess
                break
    dims = tuple(data["dims"]) if data.get("dims") is not None else None
    if kind == "density_matrix":
        return DensityMatrix(decode_matrix(data["matrix"]), dims, normalized=data.get("normalized", True))
    if kind == "pure_state":
        return PureState(decode_vector(data["amplitudes"]), dims)
    if kind == "channel":
        ops = np.stack([decode_matrix(k) for k in data["operators"]])
        if ops.shape[1:] != (data.get("out_dim", ops.shape[1]), data.get("in_dim", ops.shape[2])):
            raise DimensionError("operator shapes disagree with in_dim/out_dim")
        labels = data.get("labels")
        labels = tuple(tuple(lab) if isinstance(lab, list) else lab for lab in labels) if labels else None
        return KrausChannel(ops, labels)
    if kind == "hiding":
        spectrum = data["spectrum"]
        return HidingSpec(spectrum, data.get("in_dim", len(spectrum)))
    raise ValidationError(f"unknown object type {kind!r}")


def load_channel(data) -> KrausChannel:
    """Read a channel (parsed JSON or a file path); hiding specs are expanded into Kraus operators."""
    obj = load(data) if isinstance(data, (str, Path)) else from_json(data)
    if isinstance(obj, HidingSpec):
        return hiding_channel(obj)
    if not isinstance(obj, KrausChannel):
        raise ValidationError("JSON does not describe a channel")
    return obj


def save(obj, path) -> None:
    Path(path).write_text(json.dumps(to_json(obj), indent=1) + "\n")


def load(path):
    return from_json(json.loads(Path(path).read_text()))
