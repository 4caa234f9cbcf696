#!/usr/bin/env python3
"""
Test the coupling of a boundary pair into a single triple.

Usage:
    pytest tests/test_coupling.py
"""

import numpy as np
import pytest

from core.errors import NotIsometricError
from core.relations import is_neutral, is_symmetric, relation_eq
from services.boundary import BoundaryPair, map_codomain
from services.coupling import (
    block_formulas,
    couple,
    coupled_weyl,
    deinterleave,
    decouple,
    defect_formula,
    interleave,
    t_adjoint_distance,
    t_neutrality,
)
from services.generators import random_instance


@pytest.fixture(params=["symmetric", "dualpair"])
def coupled(request):
    return couple(random_instance(request.param, 3, 6).bp)


def test_coupled_split_is_balanced(coupled):
    g = coupled.source.g_dim
    assert (coupled.big.g0_dim, coupled.big.g1_dim) == (g, g)
    assert coupled.hat.dim == 2 * coupled.source.n


def test_interleave_is_inverted_by_deinterleave():
    n, g0, g1 = 2, 1, 2
    v = np.arange(4 * n + 2 * (g0 + g1), dtype=complex)
    assert np.array_equal(deinterleave(interleave(v, n, g0, g1), n, g0, g1), v)


def test_decouple_recovers_both_relations(coupled, tol):
    gamma_b, gamma_a = decouple(coupled, tol)
    assert relation_eq(gamma_b, coupled.source.GammaB, tol)[0]
    assert relation_eq(gamma_a, coupled.source.GammaA, tol)[0]


def test_block_formulas(coupled, tol):
    assert block_formulas(coupled, tol).holds(tol)


def test_t_is_symmetric_and_neutral(coupled, tol):
    assert is_symmetric(coupled.T, coupled.hat, tol)
    assert is_neutral(coupled.T, coupled.hat, tol)
    k_res, h_res = t_neutrality(coupled)
    assert k_res <= tol.residual_atol
    assert h_res <= tol.residual_atol


def test_t_adjoint_is_crossed_diagonal(coupled, tol):
    assert t_adjoint_distance(coupled, tol) <= tol.angle_atol


def test_coupled_weyl_is_antidiagonal(coupled, tol):
    for lam in (1j, 2 - 1j):
        sample = coupled_weyl(coupled, lam, tol)
        assert sample.block_distance <= tol.angle_atol
        if sample.link_expected:
            assert sample.link_distance <= tol.angle_atol


def test_weyl_link_is_expected_only_for_unitary_pairs(tol):
    unitary = coupled_weyl(couple(random_instance("symmetric", 3, 6).bp), 1j, tol)
    assert unitary.link_expected
    assert unitary.link_distance <= tol.angle_atol
    d_pair = coupled_weyl(couple(random_instance("dbt", 3, 4).bp), 1j, tol)
    assert d_pair.block_distance <= tol.angle_atol
    assert not d_pair.link_expected


def test_defect_formula(coupled, tol):
    report = defect_formula(coupled.source.pair, tol)
    assert report.plus_distance <= tol.angle_atol
    assert report.minus_distance <= tol.angle_atol


def test_coupling_a_broken_pair_fails(f1_triple):
    broken = BoundaryPair(
        pair=f1_triple.pair,
        g0_dim=1,
        g1_dim=1,
        GammaB=f1_triple.GammaB,
        GammaA=map_codomain(f1_triple.GammaA, 3 * np.eye(2)),
    )
    with pytest.raises(NotIsometricError):
        couple(broken)
