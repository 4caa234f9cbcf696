#!/usr/bin/env python3
"""
Test Weyl families, gamma fields and the Krein resolvent formula.

Usage:
    pytest tests/test_weyl.py
"""

import numpy as np
import pytest

from core.errors import ArgumentError, PreconditionError
from core.linalg import Subspace
from core.relations import is_operator, operator_matrix
from services.boundary import q_function
from services.generators import random_theta
from services.weyl import (
    SIDE_A,
    check_gamma_adjoint,
    check_gamma_difference,
    check_weyl_difference,
    eigen_criteria,
    filter_grid,
    gram_direct,
    gram_from_weyl,
    krein_resolvent,
    nevanlinna_check,
    weyl_adjoint_symmetry,
    weyl_at,
    weyl_family,
)


def test_weyl_sample_of_f1(f1_triple):
    sample = weyl_at(f1_triple, 1j)
    assert is_operator(sample.M)
    assert sample.M.dim == 1
    assert sample.defect.dim == 1
    assert operator_matrix(sample.gamma).shape == (2, 1)


def test_nevanlinna_property(f1_triple):
    for lam in (1j, 2j, -1 + 0.5j, 3 - 1j):
        assert nevanlinna_check(f1_triple, lam)


def test_nevanlinna_needs_non_real_point(f1_triple):
    with pytest.raises(ArgumentError):
        nevanlinna_check(f1_triple, 0.5)


def test_nevanlinna_needs_hilbert_space(f2_triple):
    with pytest.raises(PreconditionError):
        nevanlinna_check(f2_triple, 1j)


def test_difference_identities(symmetric_instance, tol):
    bp = symmetric_instance.bp
    assert check_gamma_difference(bp, 1j, 2j, tol) <= tol.angle_atol
    assert check_weyl_difference(bp, 1 + 1j, -1j, tol) <= tol.angle_atol


def test_weyl_symmetry_and_gamma_adjoint(symmetric_instance, tol):
    bp = symmetric_instance.bp
    for lam in (1j, 1 - 2j):
        assert weyl_adjoint_symmetry(bp, lam, tol) <= tol.angle_atol
        report = check_gamma_adjoint(bp, lam, tol)
        assert report.contained
        assert report.consistent


def test_gram_certificate(symmetric_instance):
    bp = symmetric_instance.bp
    assert np.allclose(gram_from_weyl(bp, 1j, 2j), gram_direct(bp, 1j, 2j), atol=1e-8)


def test_gram_on_the_diagonal_is_positive(symmetric_instance):
    bp = symmetric_instance.bp
    for lam in (1j, 1 - 2j, -0.5 + 3j):
        gram = gram_from_weyl(bp, lam, lam)
        assert np.allclose(gram, gram.conj().T, atol=1e-8)
        assert np.min(np.linalg.eigvalsh((gram + gram.conj().T) / 2)) >= -1e-9


def test_gram_is_conjugate_symmetric(symmetric_instance):
    bp = symmetric_instance.bp
    for lam, mu in ((1j, 2j), (1 + 1j, -1 + 0.5j), (2j, -3 + 1j)):
        assert np.allclose(gram_from_weyl(bp, lam, mu).conj().T, gram_from_weyl(bp, mu, lam), atol=1e-8)


def test_gram_certificate_rejects_conjugate_points(symmetric_instance):
    with pytest.raises(ArgumentError):
        gram_from_weyl(symmetric_instance.bp, 1j, -1j)


def test_weyl_function_of_qsc_is_q_function(qsc_instance):
    bp = qsc_instance.bp
    T = qsc_instance.matrices["T"]
    N = Subspace(ambient_dim=bp.n, basis=qsc_instance.matrices["N"])
    for lam in (2j, 1.5 + 1.5j, -3.0):
        M = operator_matrix(weyl_family(bp, lam))
        assert np.allclose(M, q_function(T, N, lam), atol=1e-8)


def test_side_a_weyl_family_shape(symmetric_instance):
    bp = symmetric_instance.bp
    M_A = weyl_family(bp, 1j, SIDE_A)
    assert (M_A.dom_dim, M_A.codom_dim) == (bp.g1_dim, bp.g0_dim)


def test_unknown_side(symmetric_instance):
    with pytest.raises(ArgumentError):
        weyl_family(symmetric_instance.bp, 1j, "C")


def test_filter_grid_drops_eigenvalues(qsc_instance):
    bp = qsc_instance.bp
    eigenvalue = complex(np.linalg.eigvals(qsc_instance.matrices["T"])[0])
    assert filter_grid(bp, [eigenvalue, 2j], 1e-6) == [2j]


def test_krein_resolvent_formula(symmetric_instance, tol):
    bp = symmetric_instance.bp
    theta = random_theta(bp.g0_dim, bp.g1_dim, np.random.default_rng(21))
    for lam in (1j, -2j, 1 + 1j):
        report = krein_resolvent(bp, theta, lam, tol)
        assert report.strict
        assert report.inclusion
        assert report.equal
        assert report.distance <= tol.angle_atol


def test_eigen_criteria_agree_with_direct_classification(symmetric_instance, tol):
    bp = symmetric_instance.bp
    theta = random_theta(bp.g0_dim, bp.g1_dim, np.random.default_rng(4))
    for lam in (1j, 2 - 1j):
        assert eigen_criteria(bp, theta, lam, tol).agree


def test_eigen_criteria_refuse_eigenvalues_of_a0(qsc_instance):
    bp = qsc_instance.bp
    eigenvalue = complex(np.linalg.eigvals(qsc_instance.matrices["T"])[0])
    theta = random_theta(bp.g0_dim, bp.g1_dim, np.random.default_rng(0))
    with pytest.raises(PreconditionError):
        eigen_criteria(bp, theta, eigenvalue)
