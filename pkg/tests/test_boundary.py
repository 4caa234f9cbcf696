#!/usr/bin/env python3
"""
Test boundary pairs: isometry, classification and boundary conditions.

Usage:
    pytest tests/test_boundary.py
"""

import numpy as np
import pytest

from core.errors import NotContractionError, NotIsometricError, SubspaceTooSmallError
from core.krein import hilbert_space
from core.linalg import span
from core.relations import from_operator, is_selfadjoint, relation_eq
from services.boundary import (
    FROM_A,
    FROM_B,
    BoundaryPair,
    adjoint_formula,
    adjoint_of_extension,
    classify,
    components,
    extension_from_theta,
    gamma10_inclusion,
    green_residual,
    is_ibp,
    is_ubp,
    map_codomain,
    qsc_boundary_pair,
    swap,
    theta_from_extension,
    y_matrix,
)
from services.generators import KINDS, random_hermitian, random_instance, random_theta, range_restricted, trivial_pair


def test_y_matrix_blocks():
    Y = y_matrix(2, 1)
    assert Y.shape == (3, 3)
    assert np.allclose(Y[:2, 1:], -1j * np.eye(2))
    assert np.allclose(Y[2:, :1], 1j * np.eye(1))
    assert np.allclose(Y[:2, :1], 0)


def test_ordinary_triple_of_f1(f1_triple):
    assert (f1_triple.g0_dim, f1_triple.g1_dim) == (1, 1)
    flags = classify(f1_triple)
    assert flags.ibp and flags.ubp and flags.bt
    assert flags.operators and flags.surjective
    assert flags.AB_gen and flags.B_gen


def test_adjoint_formula_both_directions(f1_triple, tol):
    assert adjoint_formula(f1_triple, FROM_B, tol) <= tol.angle_atol
    assert adjoint_formula(f1_triple, FROM_A, tol) <= tol.angle_atol


def test_pontryagin_ordinary_triple(f2_triple):
    assert is_ibp(f2_triple)
    assert is_ubp(f2_triple)
    assert classify(f2_triple).bt


def test_swap_keeps_isometry(symmetric_instance):
    bp = symmetric_instance.bp
    swapped = swap(bp)
    assert is_ibp(swapped)
    again = swap(swapped)
    assert relation_eq(again.GammaB, bp.GammaB)[0]


def test_broken_pair_is_rejected(f1_triple):
    broken = BoundaryPair(
        pair=f1_triple.pair,
        g0_dim=1,
        g1_dim=1,
        GammaB=f1_triple.GammaB,
        GammaA=map_codomain(f1_triple.GammaA, 2 * np.eye(2)),
    )
    assert green_residual(broken) > 1e-3
    with pytest.raises(NotIsometricError):
        classify(broken)


def test_range_restriction_keeps_isometry_but_loses_surjectivity(symmetric_instance):
    restricted = range_restricted(symmetric_instance.bp, extra=1)
    flags = classify(restricted)
    assert flags.ibp
    assert not flags.surjective
    assert not flags.bt


def test_trivial_pair_of_selfadjoint_operator():
    H = hilbert_space(3)
    rng = np.random.default_rng(3)
    A = from_operator(random_hermitian(rng, 3))
    bp = trivial_pair(H, A)
    assert bp.g_dim == 0
    assert is_ibp(bp)


def test_components_of_ordinary_triple(f1_triple):
    comps = components(f1_triple)
    H = f1_triple.H
    assert is_selfadjoint(comps.A0, H)
    assert is_selfadjoint(comps.A1, H)
    assert gamma10_inclusion(f1_triple)["equal"]


def test_extension_parametrization(symmetric_instance):
    bp = symmetric_instance.bp
    theta = random_theta(bp.g0_dim, bp.g1_dim, np.random.default_rng(8))
    A_theta = extension_from_theta(bp, theta)
    assert relation_eq(theta_from_extension(bp, A_theta), theta)[0]


def test_hermitian_theta_gives_selfadjoint_extension(symmetric_instance):
    bp = symmetric_instance.bp
    theta = from_operator(random_hermitian(np.random.default_rng(2), bp.g0_dim))
    assert is_selfadjoint(extension_from_theta(bp, theta), bp.H)


def test_adjoint_of_extension(symmetric_instance):
    bp = symmetric_instance.bp
    theta = random_theta(bp.g0_dim, bp.g1_dim, np.random.default_rng(5))
    report = adjoint_of_extension(bp, theta)
    assert report.contained and report.equal


def test_qsc_pair_is_a_boundary_triple(qsc_instance):
    flags = classify(qsc_instance.bp)
    assert flags.bt and flags.ubp


@pytest.mark.parametrize("kind", KINDS)
def test_boundary_triples_are_unitary(kind):
    flags = classify(random_instance(kind, 3, 0).bp)
    assert flags.ubp or not flags.bt
    if kind == "dbt":
        assert not flags.bt


def test_qsc_preconditions():
    with pytest.raises(NotContractionError):
        qsc_boundary_pair(2 * np.eye(2), span([1, 0]))
    T = np.diag([0.5, 0.5j])
    with pytest.raises(SubspaceTooSmallError):
        qsc_boundary_pair(T, span([1, 0]))
