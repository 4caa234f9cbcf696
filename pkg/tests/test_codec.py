#!/usr/bin/env python3
"""
Test the JSON instance format.

Usage:
    pytest tests/test_codec.py
"""

import json

import numpy as np
import pytest

from core.errors import InstanceFormatError
from core.linalg import Tol
from core.relations import relation_eq
from services.generators import random_instance
from services.weyl import weyl_at
from transports.instance.codec import (
    InstanceFile,
    decode_matrix,
    encode_matrix,
    encode_report,
    encode_weyl,
    read_instance,
    read_instance_file,
    write_instance,
)


def test_matrix_encoding():
    m = np.array([[1 + 2j, 0], [3, -1j]])
    encoded = encode_matrix(m)
    assert encoded[0][0] == [1.0, 2.0]
    assert np.allclose(decode_matrix(encoded), m)


def test_decode_rejects_ragged_rows():
    with pytest.raises((InstanceFormatError, ValueError)):
        decode_matrix([[[1, 0]], [[1, 0], [2, 0]]])


@pytest.mark.parametrize("kind", ["symmetric", "flt", "dbt", "qsc"])
def test_written_instance_reads_back(kind, tmp_path):
    instance = random_instance(kind, 3, 4)
    path = write_instance(tmp_path / "nested" / f"{kind}.json", instance, Tol(angle_atol=1e-6))
    loaded = read_instance(path)
    assert (loaded.kind, loaded.seed) == (kind, 4)
    assert (loaded.bp.g0_dim, loaded.bp.g1_dim) == (instance.bp.g0_dim, instance.bp.g1_dim)
    assert relation_eq(loaded.bp.GammaB, instance.bp.GammaB)[0]
    assert relation_eq(loaded.bp.GammaA, instance.bp.GammaA)[0]
    assert (loaded.flt is None) == (instance.flt is None)
    assert (loaded.dbt is None) == (instance.dbt is None)
    assert read_instance_file(path).tol.angle_atol == 1e-6


def test_missing_file(tmp_path):
    with pytest.raises(InstanceFormatError):
        read_instance_file(tmp_path / "absent.json")


def test_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "symmetric"}', encoding="utf-8")
    with pytest.raises(InstanceFormatError):
        read_instance_file(path)


def test_unknown_kind_is_a_format_error(symmetric_instance):
    document = json.loads(InstanceFile.from_instance(symmetric_instance).model_dump_json())
    document["kind"] = "nope"
    with pytest.raises(InstanceFormatError):
        InstanceFile.model_validate(document).to_instance()


def test_wrong_boundary_shape_is_a_format_error(symmetric_instance):
    document = json.loads(InstanceFile.from_instance(symmetric_instance).model_dump_json())
    document["boundary"]["g0"] += 1
    with pytest.raises(InstanceFormatError):
        InstanceFile.model_validate(document).to_instance()


def test_weyl_and_report_encodings_are_json(f1_triple):
    payload = encode_weyl(weyl_at(f1_triple, 1j))
    assert payload["lam"] == [0.0, 1.0]
    assert payload["defect_dim"] == 1
    assert payload["value"] is not None
    json.dumps(payload)
    json.dumps(encode_report(Tol()))
