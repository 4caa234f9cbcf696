#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Weyl families, gamma fields and the Krein resolvent formula.

Every identity is checked at the level of relations (graph equality by
principal angles), so multivalued Weyl parts and partially defined gamma
fields need no special treatment.
"""

from typing import List, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict

from core.errors import ArgumentError, PreconditionError
from core.linalg import DEFAULT_TOL, Subspace, Tol, column_space, subspace_contains, subspace_eq
from core.relations import (
    LinearRelation,
    SpectralClass,
    compose,
    difference,
    dom,
    eigenspace,
    from_operator,
    from_pairs,
    from_subspace,
    hilbert_adjoint,
    image,
    intersect,
    inverse,
    ker,
    krein_adjoint,
    mul,
    op_sum,
    operator_matrix,
    point_spectrum,
    ran,
    relation_contains,
    relation_eq,
    restrict,
    scale,
    shift,
    spectral_classify,
)
from core.krein import hilbert_space
from services.boundary import (
    BoundaryPair,
    adjoint,
    as_relation_in,
    components,
    extension_from_theta,
    gamma10,
    sharp_B,
)

SIDE_B = "B"
SIDE_A = "A"


class WeylSample(BaseModel):
    """Weyl family, gamma field and defect space at one point.

    Parameters:
        lam: The spectral parameter.
        M: ``GammaB(lam I)`` as a relation from G0 to G1.
        gamma: ``P (GammaB_0 | lam I)^{-1}``, a relation from G0 to H.
        defect: ``Ker(B^c - lam)``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lam: complex
    M: LinearRelation
    gamma: LinearRelation
    defect: Subspace


class GammaAdjointReport(BaseModel):
    """``GammaB_10 phi(lam)`` against ``gamma_A(conj lam)^c``."""

    contained: bool
    equal: bool
    conditions_hold: bool
    distance: float

    @property
    def consistent(self) -> bool:
        return self.contained and self.equal == self.conditions_hold


class ResolventReport(BaseModel):
    """Both sides of the Krein resolvent formula at one point.

    Parameters:
        lam: The spectral parameter.
        strict: Whether ``lam`` avoids the point spectrum of ``A0``, so that
            the restricted equality is expected.
        inclusion: The resolvent difference is contained in the correction term.
        inclusion_equal_expected: ``Ker(A0 - lam) = Ker(Ker GammaB - lam)``.
        inclusion_equal: Whether the inclusion is an equality.
        equal: Restricted resolvent equals ``(A0 - lam)^{-1}`` plus correction
            (only meaningful when ``strict``).
        distance: Principal-angle distance of the two sides of the equality.
    """

    lam: complex
    strict: bool
    inclusion: bool
    inclusion_equal_expected: bool
    inclusion_equal: bool
    equal: Optional[bool] = None
    distance: Optional[float] = None

    @property
    def passed(self) -> bool:
        included = self.inclusion and (self.inclusion_equal or not self.inclusion_equal_expected)
        return included and (self.equal is not False)


class EigenCriteria(BaseModel):
    """Boundary criteria for ``lam`` in the point spectrum or resolvent set of ``A_theta``."""

    lam: complex
    in_sigma_p: bool
    in_rho: Optional[bool] = None
    truth_sigma_p: bool
    truth_rho: bool

    @property
    def agree(self) -> bool:
        if self.in_sigma_p != self.truth_sigma_p:
            return False
        return self.in_rho is None or self.in_rho == self.truth_rho


# =============================================================================
# Basic objects
# =============================================================================


def lam_graph(n: int, lam: complex, tol: Tol = DEFAULT_TOL) -> Subspace:
    """``lam I = {(x, lam x)}`` as a subspace of H_Gamma."""
    return column_space(np.vstack([np.eye(n), lam * np.eye(n)]), tol)


def weyl_family(bp: BoundaryPair, lam: complex, side: str = SIDE_B, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``M_B(lam) = GammaB(lam I)`` (G0 to G1) or ``M_A(lam) = GammaA(lam I)`` (G1 to G0)."""
    graph = lam_graph(bp.n, lam, tol)
    if side == SIDE_B:
        return from_subspace(bp.g0_dim, bp.g1_dim, image(bp.GammaB, graph, tol))
    if side == SIDE_A:
        return from_subspace(bp.g1_dim, bp.g0_dim, image(bp.GammaA, graph, tol))
    raise ArgumentError(f"unknown side {side!r}")


def _first_half(n: int) -> LinearRelation:
    return from_operator(np.hstack([np.eye(n), np.zeros((n, n))]))


def gamma_field(bp: BoundaryPair, lam: complex, side: str = SIDE_B, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``P (Gamma_0 | lam I)^{-1}`` for ``GammaB`` (from G0) or ``GammaA`` (from G1)."""
    if side not in (SIDE_B, SIDE_A):
        raise ArgumentError(f"unknown side {side!r}")
    comps = components(bp)
    gamma0 = comps.GammaB0 if side == SIDE_B else comps.GammaA0
    sliced = restrict(gamma0, lam_graph(bp.n, lam, tol), tol)
    return compose(_first_half(bp.n), inverse(sliced), tol)


def weyl_at(bp: BoundaryPair, lam: complex, tol: Tol = DEFAULT_TOL) -> WeylSample:
    defect = eigenspace(adjoint(bp.pair.B, bp.H, tol), lam, tol)
    return WeylSample(
        lam=complex(lam),
        M=weyl_family(bp, lam, SIDE_B, tol),
        gamma=gamma_field(bp, lam, SIDE_B, tol),
        defect=defect,
    )


def phi_B(bp: BoundaryPair, lam: complex, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``{(y - lam x, (x, y)) : (x, y) in A0}``, a relation from H to H_Gamma."""
    A0 = components(bp).A0
    return from_pairs(A0.bottom - lam * A0.top, A0.graph.basis, tol)


def delta_field(bp: BoundaryPair, lam: complex, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``P (GammaB_10 | lam I)^{-1}``, a relation from G1 to H.

    Its domain is the multivalued part of ``M_B(lam)``.
    """
    sliced = restrict(gamma10(bp, tol), lam_graph(bp.n, lam, tol), tol)
    return compose(_first_half(bp.n), inverse(sliced), tol)


# =============================================================================
# Identities between Weyl data
# =============================================================================


def _phi_gamma(bp: BoundaryPair, lam: complex, lam0: complex, tol: Tol) -> LinearRelation:
    """``phi(lam) (lam - lam0) gamma(lam0)``, a relation from G0 to H_Gamma."""
    scaled = scale(gamma_field(bp, lam0, SIDE_B, tol), lam - lam0, tol)
    return compose(phi_B(bp, lam, tol), scaled, tol)


def check_gamma_difference(bp: BoundaryPair, lam: complex, lam0: complex, tol: Tol = DEFAULT_TOL) -> float:
    """Distance between ``gamma(lam) - gamma(lam0)`` and ``P phi(lam)(lam - lam0) gamma(lam0)``."""
    lhs = difference(gamma_field(bp, lam, SIDE_B, tol), gamma_field(bp, lam0, SIDE_B, tol), tol)
    rhs = compose(_first_half(bp.n), _phi_gamma(bp, lam, lam0, tol), tol)
    _, distance = relation_eq(lhs, rhs, tol)
    return distance


def check_weyl_difference(bp: BoundaryPair, lam: complex, lam0: complex, tol: Tol = DEFAULT_TOL) -> float:
    """Distance between ``M(lam) - M(lam0)`` and ``GammaB_10 phi(lam)(lam - lam0) gamma(lam0)``."""
    lhs = difference(weyl_family(bp, lam, SIDE_B, tol), weyl_family(bp, lam0, SIDE_B, tol), tol)
    rhs = compose(gamma10(bp, tol), _phi_gamma(bp, lam, lam0, tol), tol)
    _, distance = relation_eq(lhs, rhs, tol)
    return distance


def check_gamma_adjoint(bp: BoundaryPair, lam: complex, tol: Tol = DEFAULT_TOL) -> GammaAdjointReport:
    """``GammaB_10 phi(lam)`` is contained in ``gamma_A(conj lam)^c``.

    Equality is expected exactly when ``ran(A0 - lam)`` is the domain of the
    adjoint and ``mul M_B(lam) = mul M_A(conj lam)^*``.
    """
    left = compose(gamma10(bp, tol), phi_B(bp, lam, tol), tol)
    gamma_a = gamma_field(bp, np.conj(lam), SIDE_A, tol)
    right = krein_adjoint(gamma_a, hilbert_space(bp.g1_dim), bp.H, tol)
    contained, _ = relation_contains(right, left, tol)
    equal, distance = relation_eq(right, left, tol)

    A0 = components(bp).A0
    range_ok, _ = subspace_eq(ran(shift(A0, lam, tol), tol), dom(right, tol), tol)
    m_b = weyl_family(bp, lam, SIDE_B, tol)
    m_a_star = hilbert_adjoint(weyl_family(bp, np.conj(lam), SIDE_A, tol), tol)
    mul_ok, _ = subspace_eq(mul(m_b, tol), mul(m_a_star, tol), tol)
    return GammaAdjointReport(
        contained=contained, equal=equal, conditions_hold=range_ok and mul_ok, distance=distance
    )


def weyl_adjoint_symmetry(bp: BoundaryPair, lam: complex, tol: Tol = DEFAULT_TOL) -> float:
    """Distance between ``M_B(lam)^*`` and ``GammaB_#(conj lam I)``."""
    m_star = hilbert_adjoint(weyl_family(bp, lam, SIDE_B, tol), tol)
    graph = image(sharp_B(bp, tol), lam_graph(bp.n, np.conj(lam), tol), tol)
    candidate = from_subspace(bp.g1_dim, bp.g0_dim, graph)
    _, distance = relation_eq(m_star, candidate, tol)
    return distance


def gram_from_weyl(bp: BoundaryPair, lam: complex, mu: complex, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``(M_B(lam) - M_A(mu)^H) / (lam - conj mu)``, a ``g1 x g0`` matrix.

    It equals ``gamma_A(mu)^H J gamma_B(lam)``, the Gram data of the two
    gamma fields, whenever both Weyl families are everywhere defined operators.
    """
    denominator = lam - np.conj(mu)
    if abs(denominator) <= tol.residual_atol:
        raise ArgumentError("lam coincides with conj(mu)")
    m_b = operator_matrix(weyl_family(bp, lam, SIDE_B, tol), tol)
    m_a = operator_matrix(weyl_family(bp, mu, SIDE_A, tol), tol)
    return (m_b - m_a.conj().T) / denominator


def gram_direct(bp: BoundaryPair, lam: complex, mu: complex, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``gamma_A(mu)^H J gamma_B(lam)`` from the gamma fields themselves."""
    g_b = operator_matrix(gamma_field(bp, lam, SIDE_B, tol), tol)
    g_a = operator_matrix(gamma_field(bp, mu, SIDE_A, tol), tol)
    return g_a.conj().T @ bp.H.J @ g_b


def nevanlinna_check(bp: BoundaryPair, lam: complex, tol: Tol = DEFAULT_TOL) -> bool:
    """``Im M(lam) / Im lam`` is positive semidefinite (Hilbert ordinary triples)."""
    if not bp.H.is_hilbert():
        raise PreconditionError("the Nevanlinna property needs a Hilbert space")
    if abs(np.imag(lam)) <= tol.residual_atol:
        raise ArgumentError("lam must be non-real")
    m = operator_matrix(weyl_family(bp, lam, SIDE_B, tol), tol)
    form = (m - m.conj().T) / (2j * np.imag(lam))
    if form.size == 0:
        return True
    return float(np.min(np.linalg.eigvalsh((form + form.conj().T) / 2))) >= -tol.residual_atol


def filter_grid(bp: BoundaryPair, grid: List[complex], margin: float, tol: Tol = DEFAULT_TOL) -> List[complex]:
    """Drop grid points closer than ``margin`` to the point spectrum of ``A0``."""
    spectrum = point_spectrum(components(bp).A0, tol)
    kept = []
    for lam in grid:
        if spectrum.size and float(np.min(np.abs(spectrum - lam))) < margin:
            logger.warning(f"grid point {lam} dropped: within {margin:g} of sigma_p(A0)")
            continue
        kept.append(complex(lam))
    return kept


# =============================================================================
# Krein resolvent formula and eigenvalue criteria
# =============================================================================


def resolvent_correction(bp: BoundaryPair, theta: LinearRelation, lam: complex, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``gamma(lam) (theta - M(lam))^{-1} GammaB_10 phi(lam)``, a relation in H."""
    inner = inverse(difference(theta, weyl_family(bp, lam, SIDE_B, tol), tol))
    tail = compose(gamma10(bp, tol), phi_B(bp, lam, tol), tol)
    return compose(gamma_field(bp, lam, SIDE_B, tol), compose(inner, tail, tol), tol)


def krein_resolvent(bp: BoundaryPair, theta: LinearRelation, lam: complex, tol: Tol = DEFAULT_TOL) -> ResolventReport:
    """Assemble both sides of the resolvent formula independently and compare."""
    comps = components(bp)
    A0 = comps.A0
    A_theta = extension_from_theta(bp, theta, tol)
    res_theta = inverse(shift(A_theta, lam, tol))
    res_0 = inverse(shift(A0, lam, tol))
    correction = resolvent_correction(bp, theta, lam, tol)

    diff = difference(res_theta, res_0, tol)
    inclusion, _ = relation_contains(correction, diff, tol)
    inclusion_equal, _ = relation_eq(correction, diff, tol)
    ker_gamma = as_relation_in(bp.n, ker(bp.GammaB, tol))
    expected, _ = subspace_eq(eigenspace(A0, lam, tol), eigenspace(ker_gamma, lam, tol), tol)

    strict = eigenspace(A0, lam, tol).is_zero()
    report = ResolventReport(
        lam=complex(lam),
        strict=strict,
        inclusion=inclusion,
        inclusion_equal_expected=expected,
        inclusion_equal=inclusion_equal,
    )
    if not strict:
        logger.warning(f"lam={lam} is an eigenvalue of A0; only the inclusion is checked")
        return report
    lhs = restrict(res_theta, ran(shift(A0, lam, tol), tol), tol)
    rhs = op_sum(res_0, correction, tol)
    equal, distance = relation_eq(lhs, rhs, tol)
    return report.model_copy(update={"equal": equal, "distance": distance})


def eigen_criteria(bp: BoundaryPair, theta: LinearRelation, lam: complex, tol: Tol = DEFAULT_TOL) -> EigenCriteria:
    """Boundary tests for ``lam`` in ``sigma_p(A_theta)`` and ``rho(A_theta)``.

    Raises:
        PreconditionError: If ``lam`` is an eigenvalue of ``A0``.
    """
    comps = components(bp)
    H = bp.H
    if not eigenspace(comps.A0, lam, tol).is_zero():
        raise PreconditionError(f"lam={lam} is an eigenvalue of A0")
    m = weyl_family(bp, lam, SIDE_B, tol)
    cut = intersect(theta, m, tol)
    regular = subspace_contains(mul(comps.GammaB0, tol), dom(cut, tol), tol)

    in_rho = None
    if spectral_classify(comps.A0, H, lam, tol).spectral_class == SpectralClass.RESOLVENT:
        ranges = subspace_contains(
            ran(difference(theta, m, tol), tol), ran(gamma10(bp, tol), tol), tol
        )
        in_rho = regular and ranges

    truth = spectral_classify(extension_from_theta(bp, theta, tol), H, lam, tol)
    return EigenCriteria(
        lam=complex(lam),
        in_sigma_p=not regular,
        in_rho=in_rho,
        truth_sigma_p=truth.spectral_class == SpectralClass.POINT,
        truth_rho=truth.spectral_class == SpectralClass.RESOLVENT,
    )
