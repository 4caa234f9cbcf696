#!/usr/bin/env python3
"""
Test subspaces, tolerances and Hermitian forms.

Usage:
    pytest tests/test_linalg.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from core.errors import DimensionMismatchError, SingularFormError
from core.linalg import (
    Tol,
    column_space,
    complement_wrt_form,
    containment_residual,
    coordinate_subspace,
    hermitian_congruence,
    inertia,
    null_space,
    orthogonal_complement,
    span,
    subspace_eq,
    subspace_intersect,
    subspace_sum,
)


def test_tol_rejects_non_positive_values():
    with pytest.raises(ValidationError):
        Tol(residual_atol=0.0)
    with pytest.raises(ValidationError):
        Tol(rank_rtol=1.5)


def test_column_space_drops_dependent_columns():
    m = np.array([[1, 2, 3], [0, 0, 0], [1, 2, 4]], dtype=complex)
    s = column_space(m)
    assert s.dim == 2
    assert np.allclose(s.basis.conj().T @ s.basis, np.eye(2))


def test_same_span_different_bases_are_equal():
    a = span([1, 0, 0], [0, 1, 0])
    b = span([1, 1, 0], [1, -1, 0])
    equal, angle = subspace_eq(a, b)
    assert equal
    assert angle < 1e-12


def test_different_dimensions_are_at_right_angle():
    _, angle = subspace_eq(coordinate_subspace(3, [0]), coordinate_subspace(3, [0, 1]))
    assert angle == pytest.approx(np.pi / 2)


def test_intersection_of_coordinate_planes():
    a = coordinate_subspace(3, [0, 1])
    b = coordinate_subspace(3, [1, 2])
    cut = subspace_intersect(a, b)
    assert cut.dim == 1
    assert subspace_eq(cut, coordinate_subspace(3, [1]))[0]


def test_sum_fills_the_space():
    total = subspace_sum(coordinate_subspace(3, [0, 1]), coordinate_subspace(3, [2]))
    assert total.is_full()


def test_ambient_mismatch_raises():
    with pytest.raises(DimensionMismatchError):
        subspace_sum(coordinate_subspace(2, [0]), coordinate_subspace(3, [0]))


def test_form_complement_of_neutral_vector_contains_it():
    J = np.diag([1.0, -1.0])
    s = span([1, 1])
    comp = complement_wrt_form(s, J)
    assert comp.dim == 1
    assert subspace_eq(comp, s)[0]


def test_form_complement_rejects_singular_form():
    with pytest.raises(SingularFormError):
        complement_wrt_form(span([1, 0]), np.diag([1.0, 0.0]))


def test_orthogonal_complement_is_orthogonal():
    s = span([1, 1j, 0], [0, 1, 1])
    comp = orthogonal_complement(s)
    assert comp.dim == 1
    assert np.allclose(s.basis.conj().T @ comp.basis, 0)


def test_containment_residual_zero_for_subspace():
    outer = coordinate_subspace(4, [0, 1, 2])
    inner = span([1, 2, 0, 0])
    assert containment_residual(outer, inner) < 1e-14
    assert containment_residual(outer, coordinate_subspace(4, [3])) == pytest.approx(1.0)


def test_inertia_counts_signs():
    assert inertia(np.diag([2.0, -1.0, 0.0])) == (1, 1, 1)


def test_hermitian_congruence_carries_target():
    target = np.array([[2.0, 1j], [-1j, -1.0]])
    model = np.array([[0, -1j], [1j, 0]])
    L = hermitian_congruence(target, model)
    assert np.allclose(L.conj().T @ model @ L, target)


def test_hermitian_congruence_needs_enough_directions():
    with pytest.raises(SingularFormError):
        hermitian_congruence(np.diag([1.0, 1.0]), np.diag([1.0, -1.0]))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rows=st.integers(1, 5), cols=st.integers(1, 6))
def test_null_space_is_an_orthonormal_kernel(seed, rows, cols):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    N = null_space(m)
    assert N.shape[1] == cols - np.linalg.matrix_rank(m)
    assert np.allclose(m @ N, 0, atol=1e-9)
    assert np.allclose(N.conj().T @ N, np.eye(N.shape[1]))
