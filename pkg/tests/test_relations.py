#!/usr/bin/env python3
"""
Test linear relations: algebra, adjoints, symmetry and spectra.

Usage:
    pytest tests/test_relations.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import DimensionMismatchError, NotSymmetricError, PreconditionError
from core.krein import hilbert_space, pontryagin_space
from core.linalg import column_space, coordinate_subspace, span, subspace_eq
from core.relations import (
    SpectralClass,
    compose,
    defect_numbers,
    difference,
    dom,
    from_operator,
    from_pairs,
    from_subspace,
    hilbert_adjoint,
    image,
    inverse,
    is_dissipative,
    is_neutral,
    is_operator,
    is_selfadjoint,
    is_symmetric,
    krein_adjoint,
    ker,
    mul,
    operator_matrix,
    point_spectrum,
    relation_contains,
    relation_eq,
    shift,
    spectral_classify,
    zero_relation,
)
from services.generators import fixture_f1, fixture_f2


def test_operator_graph_round_trip():
    T = np.array([[1, 2j], [0, 3]], dtype=complex)
    assert np.allclose(operator_matrix(from_operator(T)), T)


def test_compose_matches_matrix_product():
    S = np.array([[1, 1], [0, 2]], dtype=complex)
    R = np.array([[0, 1j], [1, 0]], dtype=complex)
    assert relation_eq(compose(from_operator(S), from_operator(R)), from_operator(S @ R))[0]


def test_compose_after_trivial_relation_keeps_multivalued_part():
    s = from_pairs([[0.0], [0.0]], [[1.0], [0.0]])
    sr = compose(s, zero_relation(2, 2))
    assert sr.dim == 1
    assert subspace_eq(mul(sr), coordinate_subspace(2, [0]))[0]
    assert dom(sr).dim == 0


def test_compose_checks_dimensions():
    with pytest.raises(DimensionMismatchError):
        compose(from_operator(np.eye(2)), from_operator(np.eye(3)))


def test_inverse_of_singular_operator_is_multivalued():
    r = from_operator(np.diag([1.0, 0.0]))
    inv = inverse(r)
    assert not is_operator(inv)
    assert subspace_eq(mul(inv), coordinate_subspace(2, [1]))[0]
    assert subspace_eq(ker(r), coordinate_subspace(2, [1]))[0]


def test_operator_matrix_rejects_multivalued_part():
    with pytest.raises(PreconditionError):
        operator_matrix(inverse(from_operator(np.diag([1.0, 0.0]))))


def test_difference_and_shift():
    T = np.array([[2, 1], [1j, 0]], dtype=complex)
    assert relation_eq(shift(from_operator(T), 1 + 1j), from_operator(T - (1 + 1j) * np.eye(2)))[0]
    assert relation_eq(difference(from_operator(T), from_operator(T)), from_operator(np.zeros((2, 2))))[0]


def test_image_under_partial_operator():
    r = from_pairs([[1.0], [0.0]], [[0.0], [5.0]])
    assert subspace_eq(image(r, span([1, 0])), span([0, 1]))[0]
    assert image(r, span([0, 1])).is_zero()


def test_hilbert_adjoint_of_operator_is_conjugate_transpose():
    T = np.array([[1, 2j], [3, 4]], dtype=complex)
    assert relation_eq(hilbert_adjoint(from_operator(T)), from_operator(T.conj().T))[0]


def test_double_adjoint_is_closure():
    space = pontryagin_space(3, 1)
    _, A = fixture_f2()
    twice = krein_adjoint(krein_adjoint(A, space, space), space, space)
    assert relation_eq(twice, A)[0]


def test_fixture_f1_is_symmetric_with_equal_defects():
    H, A = fixture_f1()
    assert is_symmetric(A, H)
    assert not is_selfadjoint(A, H)
    assert defect_numbers(A, H) == (1, 1)


def test_defect_numbers_need_symmetry():
    H = hilbert_space(2)
    with pytest.raises(NotSymmetricError):
        defect_numbers(from_operator(np.array([[0, 1], [0, 0]], dtype=complex)), H)


def test_j_selfadjoint_operator():
    space = pontryagin_space(3, 1)
    Hm = np.array([[2, 1, 0], [1, 3, 1], [0, 1, 1]], dtype=complex)
    S = from_operator(space.J @ Hm)
    assert is_selfadjoint(S, space)
    assert is_neutral(S, space)


def test_symmetric_relation_with_multivalued_part():
    H = hilbert_space(2)
    r = from_pairs([[0.0], [0.0]], [[1.0], [0.0]])
    assert is_symmetric(r, H)
    assert not is_operator(r)
    assert dom(r).is_zero()


def test_dissipative_operator():
    H = hilbert_space(2)
    assert is_dissipative(from_operator(1j * np.eye(2)), H)
    assert not is_dissipative(from_operator(-1j * np.eye(2)), H)


def test_point_spectrum_of_diagonal():
    values = np.sort(point_spectrum(from_operator(np.diag([3.0, 1.0, 2.0]))).real)
    assert np.allclose(values, [1.0, 2.0, 3.0])


def test_point_spectrum_ignores_multivalued_part():
    r = from_pairs([[1.0, 0.0], [0.0, 0.0]], [[4.0, 0.0], [0.0, 1.0]])
    assert np.allclose(point_spectrum(r), [4.0])


def test_spectral_classes():
    H, A = fixture_f1()
    point = spectral_classify(A, H, 1j)
    assert point.spectral_class == SpectralClass.RESIDUAL
    assert point.regular_type
    assert point.range_codim == 1

    T = from_operator(np.diag([1.0, 2.0]))
    assert spectral_classify(T, H, 2.0).spectral_class == SpectralClass.POINT
    assert spectral_classify(T, H, 1j).spectral_class == SpectralClass.RESOLVENT


def test_relation_contains_reports_residual():
    big = from_operator(np.eye(2))
    small = from_pairs([[1.0], [1.0]], [[1.0], [1.0]])
    ok, residual = relation_contains(big, small)
    assert ok and residual < 1e-12
    assert not relation_contains(small, big)[0]


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4), kappa=st.integers(0, 4))
def test_krein_adjoint_is_an_involution(seed, n, kappa):
    rng = np.random.default_rng(seed)
    space = pontryagin_space(n, min(kappa, n))
    k = int(rng.integers(0, 2 * n + 1))
    basis = rng.normal(size=(2 * n, k)) + 1j * rng.normal(size=(2 * n, k))
    r = from_subspace(n, n, column_space(basis))
    adj = krein_adjoint(r, space, space)
    assert adj.dim == 2 * n - r.dim
    assert relation_eq(krein_adjoint(adj, space, space), r)[0]
