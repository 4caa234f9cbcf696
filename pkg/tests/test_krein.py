#!/usr/bin/env python3
"""
Test Krein spaces, graph spaces and standard unitaries.

Usage:
    pytest tests/test_krein.py
"""

import numpy as np
import pytest

from core.errors import DimensionMismatchError, InvalidSpaceError
from core.krein import (
    direct_sum,
    hilbert_space,
    indefinite_product,
    is_standard_unitary,
    krein_space,
    make_graph_space,
    make_hat_space,
    operator_adjoint,
    pontryagin_space,
    signature,
)
from services.generators import j_unitary, random_invertible


def test_pontryagin_signature():
    assert signature(pontryagin_space(5, 2)) == (3, 2)
    assert signature(hilbert_space(3)) == (3, 0)


def test_kappa_out_of_range():
    with pytest.raises(DimensionMismatchError):
        pontryagin_space(2, 3)


def test_symmetry_must_be_an_involution():
    with pytest.raises(InvalidSpaceError):
        krein_space(np.diag([2.0, 1.0]))


def test_symmetry_must_be_hermitian():
    with pytest.raises(InvalidSpaceError):
        krein_space(np.array([[0, 1], [-1, 0]]))


def test_indefinite_product_is_linear_in_first_argument():
    space = pontryagin_space(2, 1)
    assert indefinite_product(space, [0, 1], [0, 1]) == pytest.approx(-1.0)
    assert indefinite_product(space, [2j, 0], [1, 0]) == pytest.approx(2j)


def test_graph_and_hat_spaces_are_balanced():
    base = pontryagin_space(3, 1)
    assert signature(make_graph_space(base)) == (3, 3)
    assert signature(make_hat_space(base)) == (3, 3)


def test_direct_sum_signature():
    assert signature(direct_sum(pontryagin_space(2, 1), hilbert_space(2))) == (3, 1)


def test_operator_adjoint_closed_form():
    space = pontryagin_space(3, 1)
    U = np.arange(9, dtype=complex).reshape(3, 3)
    assert np.allclose(operator_adjoint(U, space, space), space.J @ U.conj().T @ space.J)


def test_j_unitary_is_standard_unitary(rng):
    space = pontryagin_space(4, 1)
    U = j_unitary(space, rng)
    assert is_standard_unitary(U, space, space)


def test_generic_invertible_is_not_standard_unitary(rng):
    space = pontryagin_space(4, 1)
    assert not is_standard_unitary(random_invertible(4, rng), space, space)


def test_standard_unitary_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        is_standard_unitary(np.eye(2), hilbert_space(3), hilbert_space(3))
