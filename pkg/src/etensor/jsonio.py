"""JSON encodings of tensors, univariate polynomials and complex numbers.

Complex numbers are ``[re, im]`` pairs of 64-bit floats.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .polynomial import UniPoly
from .tensor import Tensor


class FormatError(ValueError):
    pass


def encode_complex(z) -> list[float]:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise FormatError(f"non-finite value {z!r} cannot be written")
    return [float(z.real), float(z.imag)]


def encode_vector(v) -> list[list[float]]:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def decode_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise FormatError(f"complex numbers are [re, im] pairs, got {pair!r}")
    re, im = (float(v) for v in pair)
    if not (math.isfinite(re) and math.isfinite(im)):
        raise FormatError("non-finite number in input")
    return complex(re, im)


def decode_vector(items) -> np.ndarray:
    return np.array([decode_complex(p) for p in items], dtype=complex)


def tensor_to_json(T: Tensor) -> dict:
    return {"order": T.order, "dim": T.dim, "symmetric": bool(T.symmetric_hint),
            "entries": encode_vector(T.entries)}


def tensor_from_json(obj: dict) -> Tensor:
    try:
        order, dim = int(obj["order"]), int(obj["dim"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"tensor JSON needs order, dim and entries: {exc}") from None
    if order < 3 or dim < 2:
        raise FormatError("tensor JSON needs order >= 3 and dim >= 2")
    if not isinstance(entries, list) or len(entries) != dim**order:
        raise FormatError(f"expected {dim ** order} entries, got {len(entries) if isinstance(entries, list) else entries!r}")
    return Tensor.from_entries(order, dim, decode_vector(entries), symmetric=bool(obj.get("symmetric", False)))


def unipoly_to_json(p: UniPoly) -> dict:
    return {"coeffs": encode_vector(p.coeffs)}


def unipoly_from_json(obj: dict) -> UniPoly:
    return UniPoly(decode_vector(obj["coeffs"]))


def load_tensor(path) -> Tensor:
    with open(path) as fh:
        return tensor_from_json(json.load(fh))


def dumps(obj) -> str:
    """Deterministic JSON text; refuses NaN and infinities."""
    return json.dumps(obj, sort_keys=True, allow_nan=False)
