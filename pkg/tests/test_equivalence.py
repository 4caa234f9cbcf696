#!/usr/bin/env python3
"""
Test similarity and unitary equivalence of boundary pairs.

Usage:
    pytest tests/test_equivalence.py
"""

import numpy as np
import pytest

from core.errors import DimensionMismatchError, GramMismatchError, PreconditionError, SingularFormError
from services.boundary import is_ibp
from services.equivalence import (
    Verdict,
    check_similarity,
    check_unit_condition,
    check_unitp,
    compare_triples,
    e_map,
    push,
    reconstruct_unitary,
    weyl_gram_gap,
    weyl_match,
)
from services.generators import haar_unitary, random_instance, random_invertible


def test_push_by_unitary_keeps_isometry(symmetric_instance, rng):
    bp = symmetric_instance.bp
    moved = push(bp, haar_unitary(bp.n, rng))
    assert is_ibp(moved)
    assert (moved.g0_dim, moved.g1_dim) == (bp.g0_dim, bp.g1_dim)


def test_push_checks_shape(symmetric_instance):
    with pytest.raises(DimensionMismatchError):
        push(symmetric_instance.bp, np.eye(2))


def test_unitary_push_is_unitarily_equivalent(symmetric_instance, grid, rng, tol):
    bp = symmetric_instance.bp
    U = haar_unitary(bp.n, rng)
    moved = push(bp, U)
    assert check_similarity(bp, moved, U, tol) <= tol.angle_atol
    report = compare_triples(bp, moved, grid, U=U, tol=tol)
    assert report.weyl_match
    assert report.unit_holds
    assert report.unitp_holds
    assert report.verdict == Verdict.UNITARILY_EQUIVALENT


def test_invertible_push_is_only_similar(symmetric_instance, grid, rng, tol):
    bp = symmetric_instance.bp
    U = random_invertible(bp.n, rng)
    moved = push(bp, U)
    assert weyl_match(bp, moved, grid, tol).matched
    assert not check_unit_condition(bp, moved, tol)[0]
    report = compare_triples(bp, moved, grid, U=U, tol=tol)
    assert report.verdict == Verdict.SIMILAR


def test_similarity_rejects_singular_operator(symmetric_instance):
    bp = symmetric_instance.bp
    with pytest.raises(SingularFormError):
        check_similarity(bp, bp, np.zeros((bp.n, bp.n)))


def test_unitary_relation_criterion_needs_a_self_dual_pair(tol):
    instance = random_instance("dualpair", 3, 2)
    assert not np.allclose(instance.relations["A"].graph.projector(), instance.relations["B"].graph.projector())
    with pytest.raises(PreconditionError):
        check_unitp(instance.bp, instance.bp, tol)


def test_different_pairs_do_not_match(grid, tol):
    first = random_instance("symmetric", 3, 1).bp
    second = random_instance("symmetric", 3, 2).bp
    assert not weyl_match(first, second, grid, tol).matched
    report = compare_triples(first, second, grid, tol=tol)
    assert report.verdict == Verdict.INDETERMINATE


def test_reconstruction_recovers_a_haar_push(symmetric_instance, grid, rng, tol):
    bp = symmetric_instance.bp
    moved = push(bp, haar_unitary(bp.n, rng))
    gap = weyl_gram_gap(bp, moved, grid, tol)
    assert gap is not None and gap <= tol.angle_atol
    U = reconstruct_unitary(bp, moved, grid, tol)
    assert np.allclose(U.conj().T @ U, np.eye(bp.n), atol=1e-8)
    assert check_similarity(bp, moved, U, tol) <= tol.angle_atol


def test_reconstruction_rejects_different_weyl_functions(grid, tol):
    first = random_instance("symmetric", 3, 1).bp
    second = random_instance("symmetric", 3, 2).bp
    assert weyl_gram_gap(first, second, grid, tol) > tol.angle_atol
    with pytest.raises(GramMismatchError):
        reconstruct_unitary(first, second, grid, tol)


def test_e_map_of_ordinary_triple(f1_triple, tol):
    _, _, distance = e_map(f1_triple, tol)
    assert distance <= tol.angle_atol
