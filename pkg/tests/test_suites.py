#!/usr/bin/env python3
"""
Test the verification suites and their reports.

Usage:
    pytest tests/test_suites.py
"""

import numpy as np
import pytest

from config.settings import default_grid
from core.errors import ArgumentError
from services.boundary import map_codomain
from services.generators import KINDS, random_instance
from services.suites import SUITE_NAMES, build_report, run_suite


def test_unknown_suite_and_empty_grid(symmetric_instance, grid):
    with pytest.raises(ArgumentError):
        run_suite("nope", symmetric_instance, grid)
    with pytest.raises(ArgumentError):
        run_suite("green", symmetric_instance, [])


def test_suite_names_include_all():
    assert "all" in SUITE_NAMES
    assert {"green", "weyl", "resolvent", "coupling", "equivalence", "flt", "dbt"} <= set(SUITE_NAMES)


@pytest.mark.parametrize("kind", KINDS)
def test_green_suite_passes_for_every_kind(kind, grid, tol):
    report = run_suite("green", random_instance(kind, 3, 0), grid, tol)
    assert report.passed
    assert report.max_residual <= tol.angle_atol
    assert [c.check for c in report.checks if c.skipped] == []


@pytest.mark.parametrize("kind", ["symmetric", "qsc"])
def test_weyl_suite_passes(kind, grid, tol):
    report = run_suite("weyl", random_instance(kind, 3, 1), grid, tol)
    assert report.passed
    if kind == "qsc":
        assert any(c.check == "q_function" for c in report.checks)
    else:
        assert any(c.check == "nevanlinna" for c in report.checks)


def test_resolvent_and_coupling_suites(symmetric_instance, grid, tol):
    assert run_suite("resolvent", symmetric_instance, grid, tol).passed
    assert run_suite("coupling", symmetric_instance, grid, tol).passed


def test_equivalence_suite_against_a_unitary_copy(symmetric_instance, grid, tol):
    report = run_suite("equivalence", symmetric_instance, grid, tol)
    assert report.passed
    names = {c.check for c in report.checks}
    assert {"weyl_match", "unit", "unitp", "non_unitary_push"} <= names


def test_flt_suite(grid, tol):
    report = run_suite("flt", random_instance("flt", 3, 2), grid, tol)
    assert report.passed
    assert any(c.check == "sysv" for c in report.checks)


def test_flt_suite_without_parameters_is_skipped(symmetric_instance, grid, tol):
    report = run_suite("flt", symmetric_instance, grid, tol)
    assert report.passed
    assert all(c.skipped for c in report.checks)


def test_dbt_suite(grid, tol):
    report = run_suite("dbt", random_instance("dbt", 3, 3), grid, tol)
    assert report.passed
    assert any(c.check == "dbt_link" for c in report.checks)


@pytest.mark.parametrize("dim", [1, 2, 4, 7])
@pytest.mark.parametrize("kind", KINDS)
def test_every_suite_passes_for_every_kind(kind, dim, tol):
    report = run_suite("all", random_instance(kind, dim, 0), default_grid(), tol)
    assert report.passed, [(c.check, c.note) for c in report.checks if not c.passed]


def test_dual_pair_skips_the_self_dual_criteria(tol):
    report = run_suite("equivalence", random_instance("dualpair", 4, 0), default_grid(), tol)
    assert report.passed
    unit = [c for c in report.checks if c.check == "unit"]
    assert unit and all(c.skipped for c in unit)
    assert not any(c.check in ("unitp", "non_unitary_push") for c in report.checks)


def test_non_minimal_pair_skips_the_non_unitary_push(tol):
    report = run_suite("equivalence", random_instance("pontryagin", 1, 11), default_grid(), tol)
    assert report.passed
    pushed = [c for c in report.checks if c.check == "non_unitary_push"]
    assert pushed and all(c.skipped for c in pushed)


def test_flt_suite_breaks_each_compatibility_condition(grid, tol):
    report = run_suite("flt", random_instance("flt", 3, 2), grid, tol)
    names = {c.check for c in report.checks if not c.skipped}
    assert {"sysv_broken", "sysv_range_broken", "sysv_imaginary_broken"} <= names


def test_report_label_and_order(symmetric_instance, grid, tol):
    report = run_suite("weyl", symmetric_instance, grid, tol)
    assert report.instance == "symmetric/4/11"
    keys = [(c.anchor, c.lam or [-np.inf, -np.inf]) for c in report.checks]
    assert keys == sorted(keys)


def test_broken_pair_fails_the_green_suite(symmetric_instance, grid, tol):
    bp = symmetric_instance.bp
    broken = bp.model_copy(update={"GammaA": map_codomain(bp.GammaA, 2 * np.eye(bp.g_dim))})
    instance = symmetric_instance.model_copy(update={"bp": broken})
    report = run_suite("green", instance, grid, tol)
    assert not report.passed
    failed = {c.check for c in report.checks if not c.passed}
    assert "green" in failed


def test_empty_report_passes():
    report = build_report("green", "empty", [])
    assert report.passed
    assert report.max_residual == 0.0
