import json

import numpy as np
import pytest

from etensor.jsonio import (
    FormatError,
    decode_complex,
    dumps,
    encode_complex,
    tensor_from_json,
    tensor_to_json,
    unipoly_from_json,
    unipoly_to_json,
)
from etensor.polynomial import UniPoly
from etensor.tensor import random_tensor


def test_tensor_round_trip():
    T = random_tensor(4, 3, seed=2, symmetric=True)
    obj = json.loads(dumps(tensor_to_json(T)))
    assert obj["order"] == 4 and obj["dim"] == 3 and obj["symmetric"] is True
    assert len(obj["entries"]) == 81
    back = tensor_from_json(obj)
    assert np.array_equal(back.data, T.data)


def test_tensor_entries_row_major():
    obj = {"order": 3, "dim": 2, "entries": [[k, 0] for k in range(8)]}
    assert tensor_from_json(obj).data[1, 0, 1] == 5


@pytest.mark.parametrize("obj", [
    {"order": 3, "dim": 2, "entries": [[0, 0]] * 7},
    {"order": 2, "dim": 2, "entries": [[0, 0]] * 4},
    {"order": 3, "dim": 2},
    {"order": 3, "dim": 2, "entries": [[0, 0, 0]] * 8},
    {"order": 3, "dim": 2, "entries": [["nan", 0]] * 8},
])
def test_tensor_rejects_malformed(obj):
    with pytest.raises(FormatError):
        tensor_from_json(obj)


def test_unipoly_round_trip():
    p = UniPoly([1, 2j, -3])
    obj = unipoly_to_json(p)
    assert obj == {"coeffs": [[1.0, 0.0], [0.0, 2.0], [-3.0, 0.0]]}
    assert unipoly_from_json(obj) == p


def test_complex_codec():
    assert encode_complex(1 - 2j) == [1.0, -2.0]
    assert decode_complex([3, 4]) == 3 + 4j
    with pytest.raises(FormatError):
        encode_complex(complex(np.inf, 0))
    with pytest.raises(FormatError):
        decode_complex([1])


def test_dumps_is_sorted_and_finite():
    assert dumps({"b": 1, "a": 2}) == '{"a": 2, "b": 1}'
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})
