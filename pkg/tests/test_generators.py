#!/usr/bin/env python3
"""
Test seeded instance generation and fixtures.

Usage:
    pytest tests/test_generators.py
"""

import numpy as np
import pytest

from core.errors import ArgumentError, NotSymmetricError
from core.krein import hilbert_space, signature
from core.relations import from_operator, is_symmetric
from services.boundary import is_ibp
from services.generators import (
    KINDS,
    fixture_f1,
    fixture_f2,
    haar_unitary,
    ordinary_triple,
    random_flt_params,
    random_instance,
)
from services.transforms import check_sysV, dbt_build, negative_subspace_in_domain


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_every_kind_yields_an_isometric_pair(kind, seed):
    instance = random_instance(kind, 3, seed)
    assert instance.kind == kind
    assert instance.seed == seed
    assert is_ibp(instance.bp)
    assert "A" in instance.relations and "B" in instance.relations


@pytest.mark.parametrize("kind", KINDS)
def test_instances_are_deterministic(kind):
    first = random_instance(kind, 4, 17)
    second = random_instance(kind, 4, 17)
    assert np.allclose(first.bp.GammaB.graph.basis, second.bp.GammaB.graph.basis)
    assert np.allclose(first.space.J, second.space.J)


def test_unknown_kind_and_bad_dimension():
    with pytest.raises(ArgumentError):
        random_instance("nope", 3, 0)
    with pytest.raises(ArgumentError):
        random_instance("symmetric", 0, 0)
    with pytest.raises(ArgumentError):
        random_instance("symmetric", 99, 0)


def test_kind_specific_payloads():
    assert random_instance("qsc", 3, 0).matrices.keys() >= {"T", "N"}
    assert random_instance("flt", 3, 0).flt is not None
    dbt = random_instance("dbt", 3, 0)
    assert dbt.dbt is not None
    dbt_build(dbt.bp, dbt.dbt)
    assert signature(random_instance("pontryagin", 3, 0).space) == (2, 1)


def test_haar_unitary_is_unitary(rng):
    U = haar_unitary(5, rng)
    assert np.allclose(U.conj().T @ U, np.eye(5))


def test_random_flt_params_satisfy_compatibility(rng):
    p = random_flt_params(2, rng)
    assert p.has_primed
    report = check_sysV(p)
    assert report.holds
    assert report.v_standard_unitary


def test_fixtures():
    H, A = fixture_f1()
    assert is_symmetric(A, H)
    space, A2 = fixture_f2()
    assert is_symmetric(A2, space)
    assert negative_subspace_in_domain(A2, space) is not None


def test_ordinary_triple_needs_symmetric_relation():
    H = hilbert_space(2)
    with pytest.raises(NotSymmetricError):
        ordinary_triple(H, from_operator(np.array([[0, 1], [0, 0]], dtype=complex)))
