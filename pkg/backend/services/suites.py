#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Verification suites run by ``main.py verify`` and the campaign launcher.

A suite evaluates a family of identities on one instance and returns one
:class:`Check` per identity and grid point. Library errors that stand for a
violated precondition become skipped checks; everything else propagates.
"""

from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from config import anchors
from config.settings import GRID_MARGIN
from core.errors import ArgumentError, NotDBoundaryError, PreconditionError, SingularFormError
from core.linalg import DEFAULT_TOL, Subspace, Tol
from core.relations import from_operator, operator_matrix, relation_eq
from services.boundary import FROM_A, FROM_B, adjoint_formula, components, green_residual, isometry_defects, q_function
from services.coupling import couple, coupled_checks, defect_formula
from services.equivalence import (
    Verdict,
    check_unit_condition,
    check_unitp,
    compare_triples,
    minimality_check,
    push,
    qsc_imaginary_match,
)
from services.generators import (
    KIND_DBT,
    KIND_FLT,
    KIND_PONTRYAGIN,
    KIND_QSC,
    KIND_SYMMETRIC,
    Instance,
    haar_unitary,
    j_unitary,
    random_invertible,
    random_theta,
)
from services.transforms import (
    check_sysV,
    dbt_build,
    dbt_representing_pair,
    flt_closed_form,
    flt_push,
    flt_representing_pair,
    flt_weyl,
    kernel_equivalence,
    lp_analysis,
    matched_triple,
    real_regularity_check,
    ring_triple_weyl,
    simplicity_comparison,
    theta_by_V,
    theta_transform,
    x_lambda_identity,
)
from services.weyl import (
    SIDE_A,
    SIDE_B,
    check_gamma_adjoint,
    check_gamma_difference,
    check_weyl_difference,
    eigen_criteria,
    filter_grid,
    krein_resolvent,
    nevanlinna_check,
    weyl_adjoint_symmetry,
    weyl_family,
)

# Similarity of a reconstructed intertwiner is accepted up to this angle.
SIMILARITY_ATOL = 1e-6

# Precondition failures reported as skipped checks
SKIPPABLE = (PreconditionError, SingularFormError)


class Check(BaseModel):
    """One evaluated identity.

    Parameters:
        anchor: The identity, as listed in ``config.anchors``.
        check: Short check id.
        lam: Spectral parameter as ``[re, im]``, if the identity depends on one.
        residual: Measured residual or principal angle.
        threshold: Largest residual counted as a pass.
        passed: Outcome; skipped checks count as passed.
        skipped: The identity was not evaluated.
        note: Free text (skip reason, secondary flags).
    """

    anchor: str
    check: str
    lam: Optional[List[float]] = None
    residual: Optional[float] = None
    threshold: Optional[float] = None
    passed: bool = True
    skipped: bool = False
    note: str = ""


class SuiteReport(BaseModel):
    """Checks of one suite on one instance, in canonical order.

    Parameters:
        suite: Suite name.
        instance: Instance label (file path or ``kind/dim/seed``).
        checks: Checks sorted by anchor, then by ``lam``.
        passed: Every check passed.
        max_residual: Largest residual over the evaluated checks.
        artifacts: Matrices produced along the way (the intertwiner ``U``).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    suite: str
    instance: str
    checks: List[Check]
    passed: bool
    max_residual: float
    artifacts: Dict[str, np.ndarray] = Field(default_factory=dict)


# =============================================================================
# Check constructors
# =============================================================================


def _lam(lam: Optional[complex]) -> Optional[List[float]]:
    return None if lam is None else [float(np.real(lam)), float(np.imag(lam))]


def _measure(check: str, anchor: str, residual: float, threshold: float, lam=None, note: str = "") -> Check:
    residual = float(residual)
    return Check(
        anchor=anchor,
        check=check,
        lam=_lam(lam),
        residual=residual,
        threshold=threshold,
        passed=bool(np.isfinite(residual) and residual <= threshold),
        note=note,
    )


def _flag(check: str, anchor: str, ok: bool, lam=None, note: str = "") -> Check:
    return Check(anchor=anchor, check=check, lam=_lam(lam), passed=bool(ok), note=note)


def _skipped(check: str, anchor: str, note: str, lam=None) -> Check:
    return Check(anchor=anchor, check=check, lam=_lam(lam), skipped=True, note=note)


def _guarded(check: str, anchor: str, lam, build: Callable[[], Check]) -> Check:
    try:
        return build()
    except SKIPPABLE as e:
        logger.warning(f"{check} at lam={lam}: skipped ({e})")
        return _skipped(check, anchor, str(e), lam)


def _sort_key(c: Check):
    lam = c.lam if c.lam is not None else [-np.inf, -np.inf]
    return (c.anchor, lam[0], lam[1], c.check)


def build_report(suite: str, instance: str, checks: List[Check], artifacts=None) -> SuiteReport:
    ordered = sorted(checks, key=_sort_key)
    residuals = [c.residual for c in ordered if c.residual is not None and not c.skipped]
    return SuiteReport(
        suite=suite,
        instance=instance,
        checks=ordered,
        passed=all(c.passed for c in ordered),
        max_residual=max(residuals, default=0.0),
        artifacts=artifacts or {},
    )


def _other_point(points: List[complex], lam: complex) -> Optional[complex]:
    for z in points:
        if abs(z - lam) > 1e-12:
            return z
    return None


# =============================================================================
# Suites
# =============================================================================


def green_suite(instance: Instance, grid: List[complex], tol: Tol = DEFAULT_TOL) -> List[Check]:
    bp = instance.bp
    defects = isometry_defects(bp, tol)
    return [
        _measure("green", anchors.GREEN, defects["green"], tol.residual_atol),
        _measure("dom_GammaB", anchors.DOMAIN_B, defects["dom_GammaB"], tol.angle_atol),
        _measure("dom_GammaA", anchors.DOMAIN_A, defects["dom_GammaA"], tol.angle_atol),
        _measure("adjoint_B", anchors.ADJOINT_B, adjoint_formula(bp, FROM_B, tol), tol.angle_atol),
        _measure("adjoint_A", anchors.ADJOINT_A, adjoint_formula(bp, FROM_A, tol), tol.angle_atol),
    ]


def weyl_suite(instance: Instance, grid: List[complex], tol: Tol = DEFAULT_TOL) -> List[Check]:
    bp = instance.bp
    points = filter_grid(bp, grid, GRID_MARGIN, tol)
    nevanlinna = bp.H.is_hilbert() and instance.kind in (KIND_SYMMETRIC, KIND_FLT)
    checks = []
    for lam in points:
        lam0 = _other_point(points, lam)
        if lam0 is None:
            checks.append(_skipped("gamma_difference", anchors.GAMMA_DIFFERENCE, "needs a second grid point", lam))
        else:
            checks.append(
                _measure("gamma_difference", anchors.GAMMA_DIFFERENCE, check_gamma_difference(bp, lam, lam0, tol), tol.angle_atol, lam)
            )
            checks.append(
                _measure("weyl_difference", anchors.WEYL_DIFFERENCE, check_weyl_difference(bp, lam, lam0, tol), tol.angle_atol, lam)
            )
        report = check_gamma_adjoint(bp, lam, tol)
        checks.append(
            _flag(
                "gamma_adjoint",
                anchors.GAMMA_ADJOINT,
                report.consistent,
                lam,
                note=f"equal={report.equal} conditions={report.conditions_hold}",
            )
        )
        checks.append(_measure("weyl_symmetry", anchors.WEYL_SYMMETRY, weyl_adjoint_symmetry(bp, lam, tol), tol.angle_atol, lam))
        if nevanlinna:
            checks.append(
                _guarded("nevanlinna", anchors.NEVANLINNA, lam, lambda: _flag("nevanlinna", anchors.NEVANLINNA, nevanlinna_check(bp, lam, tol), lam))
            )
        if instance.kind == KIND_QSC and abs(lam) > 1.0:
            N = Subspace(ambient_dim=bp.n, basis=instance.matrices["N"])
            expected = from_operator(q_function(instance.matrices["T"], N, lam), tol)
            _, distance = relation_eq(weyl_family(bp, lam, SIDE_B, tol), expected, tol)
            checks.append(_measure("q_function", anchors.Q_FUNCTION, distance, tol.angle_atol, lam))
    return checks


def resolvent_suite(instance: Instance, grid: List[complex], tol: Tol = DEFAULT_TOL) -> List[Check]:
    """Resolvent formula for a seeded random ``theta`` on the unfiltered grid.

    Points of ``sigma_p(A0)`` keep the inclusion check and skip the equality.
    """
    bp = instance.bp
    theta = random_theta(bp.g0_dim, bp.g1_dim, np.random.default_rng(instance.seed + 1))
    checks = []
    for lam in grid:
        report = krein_resolvent(bp, theta, lam, tol)
        inclusion = report.inclusion and (report.inclusion_equal or not report.inclusion_equal_expected)
        checks.append(
            _flag("resolvent_inclusion", anchors.RESOLVENT, inclusion, lam, note=f"equal={report.inclusion_equal}")
        )
        if report.strict:
            checks.append(_measure("resolvent", anchors.RESOLVENT, report.distance, tol.angle_atol, lam))
        else:
            checks.append(_skipped("resolvent", anchors.RESOLVENT, "lam is an eigenvalue of A0", lam))
        checks.append(
            _guarded(
                "eigen_criteria",
                anchors.EIGEN_CRITERIA,
                lam,
                lambda: _flag("eigen_criteria", anchors.EIGEN_CRITERIA, eigen_criteria(bp, theta, lam, tol).agree, lam),
            )
        )
    return checks


def coupling_suite(instance: Instance, grid: List[complex], tol: Tol = DEFAULT_TOL) -> List[Check]:
    bp = instance.bp
    points = filter_grid(bp, grid, GRID_MARGIN, tol)
    record = coupled_checks(couple(bp, tol), points, tol)
    blocks = record["blocks"]
    checks = [
        _measure("decouple_B", anchors.DECOUPLE, record["decouple_B"], tol.angle_atol),
        _measure("decouple_A", anchors.DECOUPLE, record["decouple_A"], tol.angle_atol),
        _measure("block_domain", anchors.BLOCK_DOMAIN, blocks["domain"], tol.angle_atol),
        _measure("block_kernel", anchors.BLOCK_KERNEL, blocks["kernel"], tol.angle_atol),
        _measure("block_range", anchors.BLOCK_RANGE, blocks["range"], tol.angle_atol),
        _measure("block_mul", anchors.BLOCK_MUL, blocks["mul"], tol.angle_atol),
        _flag("t_symmetric", anchors.T_NEUTRAL, record["t_symmetric"]),
        _measure("t_neutral_K", anchors.T_NEUTRAL, record["t_neutral_K"], tol.residual_atol),
        _measure("t_neutral_H", anchors.T_NEUTRAL, record["t_neutral_H"], tol.residual_atol),
        _measure("t_adjoint", anchors.T_ADJOINT, record["t_adjoint"], tol.angle_atol),
        _measure("sharp_shape", anchors.SHARP_SHAPE, record["sharp_shape"], tol.angle_atol),
        _flag("ladder", anchors.LADDER, record["ladder_agree"]),
    ]
    for sample in record.get("weyl", []):
        lam = sample["lam"]
        checks.append(_measure("coupled_weyl", anchors.COUPLED_WEYL, sample["block_distance"], tol.angle_atol, lam))
        if sample["link_expected"]:
            checks.append(_measure("weyl_link", anchors.WEYL_LINK, sample["link_distance"], tol.angle_atol, lam))
        else:
            checks.append(_skipped("weyl_link", anchors.WEYL_LINK, "pair is not unitary or lam is not of regular type", lam))
    defect = defect_formula(bp.pair, tol)
    dims = f"dims ({defect.plus_dim}, {defect.minus_dim})"
    checks.append(_measure("defect_plus", anchors.DEFECT, defect.plus_distance, tol.angle_atol, note=dims))
    checks.append(_measure("defect_minus", anchors.DEFECT, defect.minus_distance, tol.angle_atol, note=dims))
    return checks


def _equivalence_report_checks(report, note: str = "") -> List[Check]:
    checks = [_flag("verdict", anchors.STANDARD_UNITARY, report.verdict == Verdict.UNITARILY_EQUIVALENT, note=report.verdict.value)]
    if report.similarity_residual is not None:
        checks.append(_measure("similarity", anchors.SIMILARITY, report.similarity_residual, SIMILARITY_ATOL, note=note))
    return checks


def _unit_check(report) -> Check:
    if report.unitp_holds is None:
        return _skipped("unit", anchors.UNIT, "A and B differ")
    return _flag("unit", anchors.UNIT, report.unit_holds)


def equivalence_suite(
    instance: Instance,
    grid: List[complex],
    tol: Tol = DEFAULT_TOL,
    other: Optional[Instance] = None,
    artifacts: Optional[Dict[str, np.ndarray]] = None,
) -> List[Check]:
    """Compare the instance with ``other`` or, without one, with seeded pushes of itself.

    A Hilbert instance is pushed by a Haar unitary that the comparison has
    to rebuild; a Krein instance by a standard unitary that is handed over.
    The transfer criteria are read only for pairs with ``A = B``; a minimal
    one is also pushed by a non-unitary invertible, which both must reject.
    """
    bp = instance.bp
    points = filter_grid(bp, grid, GRID_MARGIN, tol)
    artifacts = artifacts if artifacts is not None else {}

    if other is not None:
        report = compare_triples(bp, other.bp, points, tol=tol)
        if report.U is not None:
            artifacts["U"] = report.U
        return [
            _measure("weyl_match", anchors.WEYL_MATCH, report.weyl_residual, tol.angle_atol),
            _unit_check(report),
        ] + _equivalence_report_checks(report)

    rng = np.random.default_rng(instance.seed + 2)
    hilbert = bp.H.is_hilbert()
    U = haar_unitary(bp.n, rng) if hilbert else j_unitary(bp.H, rng)
    pushed = push(bp, U, tol=tol)
    report = compare_triples(bp, pushed, points, U=None if hilbert else U, tol=tol)
    if report.U is not None:
        artifacts["U"] = report.U
    checks = [
        _measure("weyl_match", anchors.WEYL_MATCH, report.weyl_residual, tol.angle_atol),
        _unit_check(report),
    ]
    minimal = minimality_check(bp, points, tol)
    if not hilbert or minimal:
        checks.extend(_equivalence_report_checks(report, note="haar push" if hilbert else "standard unitary push"))
    else:
        checks.append(_skipped("verdict", anchors.STANDARD_UNITARY, "defect spaces over the grid do not span H"))
    if report.unitp_holds is not None:
        checks.append(_flag("unitp", anchors.UNITP, report.unitp_holds))

    if report.unitp_holds is not None and not minimal:
        checks.append(_skipped("non_unitary_push", anchors.UNITP, "pair is not minimal over the grid"))
    elif report.unitp_holds is not None:
        V = random_invertible(bp.n, rng)
        skewed = push(bp, V, tol=tol)
        unit, _ = check_unit_condition(bp, skewed, tol)
        unitp, _ = check_unitp(bp, skewed, tol)
        checks.append(
            _flag("non_unitary_push", anchors.UNITP, not unit and not unitp, note=f"unit={unit} unitp={unitp}")
        )

    if instance.kind == KIND_QSC:
        T, Q = instance.matrices["T"], instance.matrices["N"]
        gap = qsc_imaginary_match(T, U @ T @ U.conj().T, Q, U @ Q, bp, pushed, tol)
        checks.append(_measure("qsc_imaginary", anchors.UNIT, gap, tol.residual_atol))
    return checks


def _relative_gap(lhs: np.ndarray, rhs: np.ndarray) -> float:
    if lhs.size == 0:
        return 0.0
    return float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(lhs))))


def flt_suite(instance: Instance, grid: List[complex], tol: Tol = DEFAULT_TOL) -> List[Check]:
    """Fractional linear transforms of the instance's ordinary triple."""
    p = instance.flt
    if p is None:
        return [_skipped("flt", anchors.FLT_WEYL, "instance carries no transform parameters")]
    obt = instance.bp
    points = filter_grid(obt, grid, GRID_MARGIN, tol)
    transformed = flt_push(obt, p, tol)
    checks = [_measure("flt_green", anchors.GREEN, green_residual(transformed), tol.residual_atol)]

    for lam in points:
        Mdot = weyl_family(obt, lam, SIDE_B, tol)
        image = flt_weyl(p, Mdot, tol)
        _, distance = relation_eq(image.image, weyl_family(transformed, lam, SIDE_B, tol), tol)
        checks.append(_measure("flt_image", anchors.FLT_WEYL, distance, tol.angle_atol, lam))
        if image.distance is None:
            checks.append(_skipped("flt_closed_form", anchors.FLT_WEYL, "B - M is singular", lam))
        else:
            checks.append(_measure("flt_closed_form", anchors.FLT_WEYL, image.distance, tol.angle_atol, lam))

        def x_identity() -> Check:
            residual, bijective = x_lambda_identity(p, operator_matrix(Mdot, tol), tol)
            return _measure("x_identity", anchors.X_IDENTITY, residual, tol.residual_atol, lam, note=f"bijective={bijective}")

        def representing_pair() -> Check:
            M_A = weyl_family(transformed, lam, SIDE_A, tol)
            _, _, pair_distance = flt_representing_pair(p, M_A, tol)
            return _measure("flt_pair", anchors.FLT_PAIR, pair_distance, tol.angle_atol, lam)

        checks.append(_guarded("x_identity", anchors.X_IDENTITY, lam, x_identity))
        checks.append(_guarded("flt_pair", anchors.FLT_PAIR, lam, representing_pair))

    for sample in ring_triple_weyl(obt, p, points, tol):
        if sample.skipped:
            checks.append(_skipped("ring_weyl", anchors.RING_WEYL, sample.note, sample.lam))
        else:
            checks.append(_measure("ring_weyl", anchors.RING_WEYL, sample.distance, tol.angle_atol, sample.lam))

    if not p.has_primed:
        return checks
    sysv = check_sysV(p, tol)
    checks.append(_flag("sysv", anchors.SYS_V, sysv.holds and sysv.consistent, note=f"V standard unitary={sysv.v_standard_unitary}"))
    variants = {
        "sysv_broken": {"C_prime": p.C_prime + 1j * np.eye(p.dim)},
        "sysv_range_broken": {"C_prime": p.C + np.eye(p.dim)},
        "sysv_imaginary_broken": {"B_prime": p.B_prime + (p.B_prime - p.B_prime.conj().T) / 2},
    }
    for name, update in variants.items():
        broken_sysv = check_sysV(p.model_copy(update=update), tol)
        checks.append(_flag(name, anchors.SYS_V, broken_sysv.consistent, note=f"holds={broken_sysv.holds}"))

    theta = random_theta(p.dim, p.dim, np.random.default_rng(instance.seed + 3))
    _, distance = relation_eq(theta_transform(p, theta, tol), theta_by_V(p, theta, tol), tol)
    checks.append(_measure("theta_prime", anchors.THETA_PRIME, distance, tol.angle_atol))

    U = haar_unitary(obt.n, np.random.default_rng(instance.seed + 4))
    obt_prime = matched_triple(obt, p, U, tol)
    primed = p.primed()
    for lam in points:

        def matched() -> Check:
            lhs = flt_closed_form(p, operator_matrix(weyl_family(obt, lam, SIDE_B, tol), tol))
            rhs = flt_closed_form(primed, operator_matrix(weyl_family(obt_prime, lam, SIDE_B, tol), tol))
            return _measure("matched_weyl", anchors.MATCHED_WEYL, _relative_gap(lhs, rhs), tol.residual_atol, lam)

        checks.append(_guarded("matched_weyl", anchors.MATCHED_WEYL, lam, matched))

    distinct = kernel_equivalence(obt, obt_prime, p, U, tol)
    same_c = p.model_copy(update={"C_prime": p.C})
    shared = kernel_equivalence(obt, matched_triple(obt, same_c, U, tol), same_c, U, tol)
    checks.extend(
        [
            _flag("kernel_a0", anchors.KERNEL_A0, distinct["a0"] and shared["a0"]),
            _flag("kernel_0_distinct_c", anchors.KERNEL_0, distinct["kernel0"] == distinct["c_equal"], note=str(distinct)),
            _flag("kernel_0_equal_c", anchors.KERNEL_0, shared["kernel0"] and shared["c_equal"], note=str(shared)),
        ]
    )
    return checks


def dbt_suite(instance: Instance, grid: List[complex], tol: Tol = DEFAULT_TOL) -> List[Check]:
    """D-boundary identities and, in Pontryagin spaces, the class checks."""
    bp = instance.bp
    d = instance.dbt
    checks = []
    if d is not None:
        try:
            dbt_build(bp, d, tol)
            checks.append(_flag("dbt_link", anchors.DBT, True))
        except NotDBoundaryError as e:
            checks.append(_flag("dbt_link", anchors.DBT, False, note=str(e)))
        for lam in filter_grid(bp, grid, GRID_MARGIN, tol):
            rep = dbt_representing_pair(bp, d, lam, tol)
            checks.append(_measure("dbt_pair", anchors.DBT_PAIR, rep.pair_distance, tol.angle_atol, lam))
            checks.append(_measure("dbt_closed_form", anchors.DBT_CLOSED, rep.closed_form_distance, tol.angle_atol, lam))

    if instance.kind not in (KIND_DBT, KIND_PONTRYAGIN):
        if not checks:
            checks.append(_skipped("dbt", anchors.DBT, "instance carries no D-boundary data"))
        return checks

    A = bp.pair.A
    report = _guarded_lp(A, bp, tol)
    if report is not None:
        note = f"kappa={report.kappa} P={report.in_P} L={report.in_L} bound={report.halfplane_bound}"
        if instance.kind == KIND_PONTRYAGIN:
            checks.append(_flag("lp_class", anchors.LP_CLASS, report.in_L, note=note))
        comparison = simplicity_comparison(A, bp.H, tol)
        checks.append(_flag("simplicity", anchors.SIMPLICITY, comparison["agree"], note=note))
    A0 = components(bp).A0
    if A0.dim == bp.n:
        regularity = real_regularity_check(A0, bp.H, tol=tol)
        checks.append(
            _flag(
                "real_regularity",
                anchors.REAL_REGULAR,
                not regularity["violations"],
                note=f"checked {regularity['checked']} points",
            )
        )
    else:
        checks.append(_skipped("real_regularity", anchors.REAL_REGULAR, "A0 is not maximal in dimension"))
    return checks


def _guarded_lp(A, bp, tol: Tol):
    try:
        return lp_analysis(A, bp.H, tol)
    except ArgumentError as e:
        logger.warning(f"class analysis skipped: {e}")
        return None


SUITES = {
    "green": green_suite,
    "weyl": weyl_suite,
    "resolvent": resolvent_suite,
    "coupling": coupling_suite,
    "equivalence": equivalence_suite,
    "flt": flt_suite,
    "dbt": dbt_suite,
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(
    suite: str,
    instance: Instance,
    grid: List[complex],
    tol: Tol = DEFAULT_TOL,
    other: Optional[Instance] = None,
    label: Optional[str] = None,
) -> SuiteReport:
    """Run one suite (or ``all``) and build its report.

    Raises:
        ArgumentError: For an unknown suite or an empty grid.
    """
    if suite not in SUITE_NAMES:
        raise ArgumentError(f"unknown suite {suite!r}; expected one of {', '.join(SUITE_NAMES)}")
    if not grid:
        raise ArgumentError("empty spectral grid")
    label = label or f"{instance.kind}/{instance.bp.n}/{instance.seed}"
    names = list(SUITES) if suite == "all" else [suite]
    checks: List[Check] = []
    artifacts: Dict[str, np.ndarray] = {}
    for name in names:
        logger.debug(f"{label}: running {name}")
        if name == "equivalence":
            checks.extend(equivalence_suite(instance, grid, tol, other=other, artifacts=artifacts))
        else:
            checks.extend(SUITES[name](instance, grid, tol))
    report = build_report(suite, label, checks, artifacts)
    level = "INFO" if report.passed else "WARNING"
    logger.log(level, f"{label}: {suite} {'passed' if report.passed else 'FAILED'} ({len(checks)} checks, max residual {report.max_residual:.2e})")
    return report
