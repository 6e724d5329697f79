import json
import math

import numpy as np
import pytest

from ratcheb.errors import ArgumentError
from ratcheb.json_handler import SCHEMA_VERSION, JsonHandler, JsonSaveOptions


def test_schema_comes_first_and_keys_are_sorted():
    text = JsonHandler.save_json_to_string({"m": 4.0, "a": [1, 2]})
    lines = text.splitlines()
    assert lines[1] == '  "a": ['
    assert '"schema": 1' in text
    assert text.endswith("}\n")


def test_formats_numpy_and_complex_values():
    data = JsonHandler.save_json_to_dict({
        "coeffs": np.array([0.5, 1.0]),
        "n": np.int64(3),
        "z": 1 - 2j,
        "flag": True,
        "missing": None,
    })
    assert data["coeffs"] == [0.5, 1.0]
    assert data["n"] == 3 and isinstance(data["n"], int)
    assert data["z"] == [1.0, -2.0]
    assert data["flag"] is True
    assert data["missing"] is None


def test_non_finite_floats_become_strings():
    data = JsonHandler.save_json_to_dict({"values": [math.inf, -math.inf, math.nan]})
    assert data["values"] == ["inf", "-inf", "nan"]


def test_shortest_float_representation():
    text = JsonHandler.save_json_to_string({"x": 0.1})
    assert '"x": 0.1' in text


def test_floats_round_trip_exactly():
    values = [1 / 3, 2.0 ** 0.5, 1e-300, 6.02214076e23, np.nextafter(1.0, 2.0), -0.0]
    data = json.loads(JsonHandler.save_json_to_string({"values": np.array(values)}))
    assert [v.hex() for v in data["values"]] == [float(v).hex() for v in values]
    assert data["schema"] == SCHEMA_VERSION


def test_payload_may_not_define_schema():
    with pytest.raises(ArgumentError):
        JsonHandler.save_json_to_dict({"schema": 2})


def test_custom_options():
    options = JsonSaveOptions()
    options.indent = None
    options.schema = 7
    assert JsonHandler.save_json_to_string({"m": 1.5}, options) == '{"m": 1.5, "schema": 7}\n'
