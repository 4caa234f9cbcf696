#!/usr/bin/env python3
"""
Test fractional linear transforms, D-boundary triples and Pontryagin classes.

Usage:
    pytest tests/test_transforms.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import ArgumentError, NotDBoundaryError, PreconditionError
from core.krein import hilbert_space
from core.relations import from_operator, from_pairs, inverse, relation_eq
from services.boundary import classify, is_ibp, map_codomain
from services.equivalence import weyl_match
from services.generators import fixture_f2, haar_unitary, random_flt_params, random_instance, random_theta
from services.transforms import (
    DBTParams,
    FLTParams,
    adjoint_W,
    build_W,
    check_sysV,
    dbt_build,
    dbt_representing_pair,
    flt_push,
    flt_representing_pair,
    flt_weyl,
    generic_grid,
    halfplane_grid,
    kernel_equivalence,
    lp_analysis,
    matched_triple,
    ring_triple,
    ring_triple_weyl,
    simplicity_comparison,
    st1_equiv_check,
    theta_by_V,
    theta_transform,
    x_lambda_identity,
)
from services.weyl import SIDE_A, weyl_family


@pytest.fixture
def flt_instance():
    return random_instance("flt", 3, 9)


def test_params_validation():
    with pytest.raises(ValueError):
        FLTParams(K=np.eye(2), B=np.eye(3), C=np.eye(2))
    with pytest.raises(ValueError):
        FLTParams(K=np.eye(1), B=np.eye(1), C=np.eye(1), K_prime=np.eye(1))
    with pytest.raises(ValueError):
        DBTParams(g0_dim=1, g1_dim=2)
    with pytest.raises(PreconditionError):
        FLTParams(K=np.eye(1), B=np.eye(1), C=np.eye(1)).primed()


def test_w_and_its_adjoint_are_inverse_for_real_data():
    p = FLTParams(K=np.eye(2), B=np.diag([1.0, -2.0]), C=np.diag([0.5, 3.0]))
    W = build_W(p)
    assert np.allclose(W @ adjoint_W(W), np.eye(4))


def test_flt_push_keeps_isometry(flt_instance):
    obt, p = flt_instance.bp, flt_instance.flt
    pushed = flt_push(obt, p)
    assert is_ibp(pushed)
    assert classify(pushed).ibp


def test_transformed_weyl_function(flt_instance, tol):
    obt, p = flt_instance.bp, flt_instance.flt
    pushed = flt_push(obt, p)
    for lam in (1j, 2 - 1j):
        result = flt_weyl(p, weyl_family(obt, lam, tol=tol), tol)
        assert relation_eq(weyl_family(pushed, lam, tol=tol), result.image, tol)[0]
        assert result.closed_form is not None
        assert result.distance <= tol.angle_atol


def test_representing_pair_of_transformed_weyl_function(flt_instance, tol):
    obt, p = flt_instance.bp, flt_instance.flt
    pushed = flt_push(obt, p)
    M_A = weyl_family(pushed, 1j, SIDE_A, tol)
    _, _, distance = flt_representing_pair(p, M_A, tol)
    assert distance <= tol.angle_atol


def test_x_lambda_identity(flt_instance, rng):
    p = flt_instance.flt
    M = rng.normal(size=(p.dim, p.dim)) + 1j * rng.normal(size=(p.dim, p.dim))
    residual, _ = x_lambda_identity(p, M)
    assert residual < 1e-9


def test_compatibility_system_fails_for_non_hermitian_difference(rng):
    p = random_flt_params(2, rng)
    broken = FLTParams(K=p.K, B=p.B, C=p.C, K_prime=p.K_prime, B_prime=p.B_prime, C_prime=p.C + 1j * np.eye(2))
    report = check_sysV(broken)
    assert not report.hermitian_difference
    assert not report.holds
    assert st1_equiv_check(broken)


def _diag(*values):
    return np.diag(np.asarray(values, dtype=complex))


def test_compatibility_system_with_non_hermitian_b():
    p = FLTParams(
        K=np.eye(2),
        B=_diag(1 + 0.5j, -1),
        C=np.zeros((2, 2)),
        K_prime=_diag(2, 1),
        B_prime=_diag(3 + 2j, 0),
        C_prime=_diag(0, 1),
    )
    assert not np.allclose(p.B, p.B.conj().T)
    report = check_sysV(p)
    assert report.holds
    assert report.v_standard_unitary


def test_compatibility_system_fails_for_mismatched_imaginary_parts():
    p = FLTParams(
        K=np.eye(2), B=_diag(1 + 0.5j, -1), C=np.zeros((2, 2)),
        K_prime=np.eye(2), B_prime=_diag(2 + 1j, 0), C_prime=np.zeros((2, 2)),
    )
    report = check_sysV(p)
    assert report.hermitian_difference and report.range_condition
    assert not report.imaginary_parts
    assert not report.v_standard_unitary


def test_compatibility_system_fails_outside_the_agreement_range():
    p = FLTParams(
        K=np.eye(2), B=_diag(1 + 0.5j, -1), C=np.zeros((2, 2)),
        K_prime=np.eye(2), B_prime=_diag(1 + 0.5j, -1), C_prime=np.eye(2),
    )
    report = check_sysV(p)
    assert report.hermitian_difference and report.imaginary_parts
    assert not report.range_condition
    assert not report.v_standard_unitary


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 4))
def test_drawn_parameters_satisfy_the_compatibility_system(seed, m):
    report = check_sysV(random_flt_params(m, np.random.default_rng(seed)))
    assert report.holds
    assert report.consistent


def test_theta_transform_matches_v(rng, tol):
    p = random_flt_params(2, rng)
    theta = random_theta(2, 2, rng)
    assert relation_eq(theta_transform(p, theta, tol), theta_by_V(p, theta, tol), tol)[0]


def test_matched_triple_shares_the_transformed_weyl_function(flt_instance, grid, rng, tol):
    obt, p = flt_instance.bp, flt_instance.flt
    U = haar_unitary(obt.n, rng)
    matched = matched_triple(obt, p, U, tol)
    assert classify(matched).bt
    first = flt_push(obt, p, tol)
    second = flt_push(matched, p.primed(), tol)
    assert weyl_match(first, second, grid, tol).matched
    assert kernel_equivalence(obt, matched, p, U, tol)["a0"]


def test_ring_triple(flt_instance, grid, tol):
    obt, p = flt_instance.bp, flt_instance.flt
    ring = ring_triple(obt, p, tol)
    assert classify(ring).bt
    samples = ring_triple_weyl(obt, p, grid, tol)
    assert len(samples) == len(grid)
    evaluated = [s for s in samples if not s.skipped]
    assert evaluated
    assert all(s.distance <= tol.angle_atol for s in evaluated)


def test_d_boundary_triple(tol):
    instance = random_instance("dbt", 3, 4)
    bp, d = instance.bp, instance.dbt
    assert d.g2_dim == 1
    assert dbt_build(bp, d, tol) is bp
    flags = classify(bp, tol)
    assert flags.ibp
    assert not flags.ubp
    for lam in (1j, -1 + 2j):
        report = dbt_representing_pair(bp, d, lam, tol)
        assert report.pair_distance <= tol.angle_atol
        assert report.closed_form_distance <= tol.angle_atol


def test_d_boundary_triple_rejects_unlinked_pair(tol):
    instance = random_instance("dbt", 3, 4)
    bp, d = instance.bp, instance.dbt
    broken = bp.model_copy(update={"GammaA": map_codomain(bp.GammaA, 2 * np.eye(bp.g_dim), tol)})
    with pytest.raises(NotDBoundaryError):
        dbt_build(broken, d, tol)


def test_lp_analysis_of_pontryagin_fixture(tol):
    space, A = fixture_f2()
    report = lp_analysis(A, space, tol)
    assert report.kappa == 1
    assert report.in_L
    assert report.halfplane_bound is not None and report.halfplane_bound >= 0.0


def test_lp_analysis_in_hilbert_space(tol):
    H = hilbert_space(2)
    report = lp_analysis(from_operator(np.diag([1.0, 2.0])), H, tol)
    assert report.kappa == 0
    assert report.in_L and report.in_P and report.in_LP


def test_lp_analysis_needs_an_operator(tol):
    H = hilbert_space(2)
    multivalued = inverse(from_pairs([[1.0], [0.0]], [[0.0], [0.0]]))
    with pytest.raises(ArgumentError):
        lp_analysis(multivalued, H, tol)


def test_generic_grid_is_conjugate_closed_and_off_the_axis():
    grid = generic_grid(len(halfplane_grid(2.0)))
    assert len(grid) == 18
    assert min(abs(z.imag) for z in grid) > 0.1
    assert all(any(abs(np.conj(z) - w) < 1e-12 for w in grid) for z in grid)


def test_simplicity_grids_agree_in_higher_dimension(tol):
    instance = random_instance("pontryagin", 7, 11)
    comparison = simplicity_comparison(instance.bp.pair.A, instance.bp.H, tol)
    assert comparison["agree"]
