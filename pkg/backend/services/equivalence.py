#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Similarity and unitary equivalence of boundary pairs.

Two boundary pairs are (U-)similar when ``GammaB' = GammaB U~^{-1}`` with
``U~ = diag(U, U)`` acting on graphs. When ``U`` is a standard unitary the
pairs are unitarily equivalent. Weyl families are invariant under both;
the converse is recovered here by rebuilding ``U`` from the gamma fields.
"""

from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict
from scipy.linalg import polar

from core.errors import (
    ArgumentError,
    DimensionMismatchError,
    GramMismatchError,
    PreconditionError,
    RankDeficientError,
    SingularFormError,
)
from core.krein import KreinSpace, hilbert_space, is_standard_unitary, make_graph_space, operator_adjoint
from core.linalg import DEFAULT_TOL, Tol, as_cmatrix, subspace_eq, subspace_sum, zero_subspace
from core.relations import (
    LinearRelation,
    compose,
    dom,
    eigenspace,
    from_pairs,
    inverse,
    krein_adjoint,
    mul,
    operator_matrix,
    relation_eq,
)
from services.boundary import BoundaryPair, adjoint, boundary_pair, dual_pair, y_matrix
from services.weyl import SIDE_B, delta_field, gamma_field, gram_direct, gram_from_weyl, weyl_family

# Standard unitaries are the St1 operators of the Krein-space literature.
is_st1 = is_standard_unitary


class Verdict(str, Enum):
    UNITARILY_EQUIVALENT = "unitarily_equivalent"
    SIMILAR = "similar"
    INDETERMINATE = "indeterminate"


# =============================================================================
# Transport along U
# =============================================================================


def push_relation(r: LinearRelation, U) -> LinearRelation:
    """``{(U x, U y) : (x, y) in r}``."""
    Um = np.asarray(U, dtype=complex)
    return from_pairs(Um @ r.top, Um @ r.bottom)


def push(bp: BoundaryPair, U, target: Optional[KreinSpace] = None, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """Transport a boundary pair along an invertible ``U: H -> H'``.

    ``GammaB' = GammaB diag(U, U)^{-1}`` and ``GammaA' = GammaA diag(U22, U22)^{-1}``
    with ``U22 = (U^c)^{-1}``; for standard unitaries ``U22 = U``.
    """
    space = target if target is not None else bp.H
    Um = np.asarray(U, dtype=complex)
    if Um.shape != (space.dim, bp.n):
        raise DimensionMismatchError(f"U has shape {Um.shape}, expected ({space.dim}, {bp.n})")
    U22 = np.linalg.inv(operator_adjoint(Um, bp.H, space))
    big, big22 = np.kron(np.eye(2), Um), np.kron(np.eye(2), U22)
    pair = dual_pair(space, push_relation(bp.pair.A, Um), push_relation(bp.pair.B, U22), tol)
    GammaB = from_pairs(big @ bp.GammaB.top, bp.GammaB.bottom, tol)
    GammaA = from_pairs(big22 @ bp.GammaA.top, bp.GammaA.bottom, tol)
    return boundary_pair(pair, bp.g0_dim, bp.g1_dim, GammaB, GammaA, tol)


def check_similarity(bp: BoundaryPair, bp_prime: BoundaryPair, U, tol: Tol = DEFAULT_TOL) -> float:
    """Distance between ``GammaB'`` and ``GammaB U~^{-1}``.

    Raises:
        SingularFormError: If ``U`` is singular.
    """
    Um = as_cmatrix(U, rows=bp_prime.n, cols=bp.n)
    if Um.size and np.linalg.matrix_rank(Um) < min(Um.shape):
        raise SingularFormError("U is singular")
    if (bp.g0_dim, bp.g1_dim) != (bp_prime.g0_dim, bp_prime.g1_dim):
        raise DimensionMismatchError("boundary splits differ")
    big = np.kron(np.eye(2), Um)
    moved = from_pairs(big @ bp.GammaB.top, bp.GammaB.bottom, tol)
    return relation_eq(moved, bp_prime.GammaB, tol)[1]


# =============================================================================
# Unitarity criteria
# =============================================================================


def _check_splits(bp: BoundaryPair, bp_prime: BoundaryPair) -> None:
    if (bp.g0_dim, bp.g1_dim) != (bp_prime.g0_dim, bp_prime.g1_dim):
        raise DimensionMismatchError(
            f"splits ({bp.g0_dim},{bp.g1_dim}) and ({bp_prime.g0_dim},{bp_prime.g1_dim}) differ"
        )


def transfer_relation(bp: BoundaryPair, bp_prime: BoundaryPair, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``(GammaB)^{-1} GammaB'``, a relation from H'_Gamma to H_Gamma."""
    _check_splits(bp, bp_prime)
    return compose(inverse(bp.GammaB), bp_prime.GammaB, tol)


def check_unit_condition(bp: BoundaryPair, bp_prime: BoundaryPair, tol: Tol = DEFAULT_TOL) -> Tuple[bool, float]:
    """``(GammaB)^{-1} GammaB' = (GammaA)^{-1} GammaA'``."""
    lhs = transfer_relation(bp, bp_prime, tol)
    rhs = compose(inverse(bp.GammaA), bp_prime.GammaA, tol)
    return relation_eq(lhs, rhs, tol)


def _is_self_dual(bp: BoundaryPair, tol: Tol) -> bool:
    return relation_eq(bp.pair.A, bp.pair.B, tol)[0]


def check_unitp(bp: BoundaryPair, bp_prime: BoundaryPair, tol: Tol = DEFAULT_TOL) -> Tuple[bool, float]:
    """Whether ``(GammaB)^{-1} GammaB'`` is a unitary relation between the graph spaces.

    Raises:
        PreconditionError: Unless ``A = B`` for the source pair.
    """
    if not _is_self_dual(bp, tol):
        raise PreconditionError("the unitary-relation criterion needs A = B")
    R = transfer_relation(bp, bp_prime, tol)
    Rc = krein_adjoint(R, make_graph_space(bp_prime.H), make_graph_space(bp.H), tol)
    return relation_eq(Rc, inverse(R), tol)


# =============================================================================
# Weyl data
# =============================================================================


def _operator_part(M: LinearRelation, tol: Tol) -> LinearRelation:
    """``{(x, P y)}`` with ``P`` the projection off ``mul M``."""
    P = np.eye(M.codom_dim) - mul(M, tol).projector()
    return from_pairs(M.top, P @ M.bottom, tol)


class WeylMatch(BaseModel):
    matched: bool
    residual: float
    mismatched: List[complex] = []


def weyl_match(bp: BoundaryPair, bp_prime: BoundaryPair, grid: List[complex], tol: Tol = DEFAULT_TOL) -> WeylMatch:
    """Compare ``M_B`` and ``M_B'`` on the grid, operator and multivalued parts separately.

    Raises:
        ArgumentError: If the grid is empty.
    """
    if not grid:
        raise ArgumentError("empty grid")
    _check_splits(bp, bp_prime)
    residual, bad = 0.0, []
    for lam in grid:
        m, m_prime = weyl_family(bp, lam, SIDE_B, tol), weyl_family(bp_prime, lam, SIDE_B, tol)
        _, d_mul = subspace_eq(mul(m, tol), mul(m_prime, tol), tol)
        _, d_op = relation_eq(_operator_part(m, tol), _operator_part(m_prime, tol), tol)
        _, d_all = relation_eq(m, m_prime, tol)
        worst = max(d_mul, d_op, d_all)
        residual = max(residual, worst)
        if worst > tol.angle_atol:
            bad.append(complex(lam))
    return WeylMatch(matched=not bad, residual=residual, mismatched=bad)


def _closed_grid(grid: List[complex]) -> List[complex]:
    out: List[complex] = []
    for lam in list(grid) + [np.conj(z) for z in grid]:
        if all(abs(lam - z) > 1e-12 for z in out):
            out.append(complex(lam))
    return out


def minimality_check(bp: BoundaryPair, grid: List[complex], tol: Tol = DEFAULT_TOL) -> bool:
    """Eigenspaces of ``A^c`` and of ``B^c`` over the conjugate-closed grid both span H."""
    H = bp.H
    if H.dim == 0:
        return True
    closed = _closed_grid(grid)
    for r in (bp.pair.A, bp.pair.B):
        rc = adjoint(r, H, tol)
        total = zero_subspace(H.dim)
        for lam in closed:
            total = subspace_sum(total, eigenspace(rc, lam, tol), tol)
        if not total.is_full():
            return False
    return True


def e_map(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> Tuple[LinearRelation, LinearRelation, float]:
    """``E = GammaA (GammaB)^{-1}`` and ``[GammaB (GammaB)^c Y]^{-1}`` with their distance."""
    E = compose(bp.GammaA, inverse(bp.GammaB), tol)
    Bc = krein_adjoint(bp.GammaB, make_graph_space(bp.H), hilbert_space(bp.g_dim), tol)
    Y = from_pairs(np.eye(bp.g_dim), y_matrix(bp.g0_dim, bp.g1_dim), tol)
    other = inverse(compose(bp.GammaB, compose(Bc, Y, tol), tol))
    return E, other, relation_eq(E, other, tol)[1]


# =============================================================================
# Rebuilding U from gamma fields
# =============================================================================


def _field_columns(bp: BoundaryPair, bp_prime: BoundaryPair, grid: List[complex], tol: Tol) -> Tuple[np.ndarray, np.ndarray]:
    """Stack ``gamma(lam) l`` and ``delta(lam) h`` for both pairs over a shared basis."""
    left, right = [], []
    for lam in _closed_grid(grid):
        fields = (
            (gamma_field(bp, lam, SIDE_B, tol), gamma_field(bp_prime, lam, SIDE_B, tol)),
            (delta_field(bp, lam, tol), delta_field(bp_prime, lam, tol)),
        )
        for f, f_prime in fields:
            if not (mul(f, tol).is_zero() and mul(f_prime, tol).is_zero()):
                logger.warning(f"lam={lam}: field is multivalued, skipped")
                continue
            common = subspace_eq(dom(f, tol), dom(f_prime, tol), tol)
            if not common[0]:
                raise GramMismatchError(f"lam={lam}: field domains differ (angle {common[1]:.3e})")
            basis = dom(f, tol).basis
            if basis.shape[1] == 0:
                continue
            left.append(operator_matrix(f, tol, partial=True) @ basis)
            right.append(operator_matrix(f_prime, tol, partial=True) @ basis)
    if not left:
        return np.zeros((bp.n, 0), dtype=complex), np.zeros((bp_prime.n, 0), dtype=complex)
    return np.hstack(left), np.hstack(right)


def least_squares_intertwiner(
    bp: BoundaryPair, bp_prime: BoundaryPair, grid: List[complex], tol: Tol = DEFAULT_TOL
) -> Tuple[np.ndarray, float]:
    """Least-squares ``U`` with ``U gamma(lam) = gamma'(lam)`` on the grid.

    Returns:
        ``U`` and the relative residual of the stacked constraints.
    """
    X, X_prime = _field_columns(bp, bp_prime, grid, tol)
    U = X_prime @ np.linalg.pinv(X)
    scale = max(1.0, float(np.linalg.norm(X_prime)))
    residual = float(np.linalg.norm(U @ X - X_prime)) / scale if X.size else 0.0
    return U, residual


def weyl_gram_gap(
    bp: BoundaryPair, bp_prime: BoundaryPair, grid: List[complex], tol: Tol = DEFAULT_TOL
) -> Optional[float]:
    """Largest relative gap between ``gram_from_weyl`` of the two pairs over grid pairs.

    Pairs ``(lam, mu)`` with ``lam = conj mu`` or a Weyl family that is not an
    everywhere defined operator are left out; None when nothing was compared.
    ``gram_direct`` cross-checks the quotient on the first pair.
    """
    _check_splits(bp, bp_prime)
    gap, compared = 0.0, 0
    for lam in _closed_grid(grid):
        for mu in _closed_grid(grid):
            if abs(lam - np.conj(mu)) <= tol.residual_atol:
                continue
            try:
                gram = gram_from_weyl(bp, lam, mu, tol)
                gram_prime = gram_from_weyl(bp_prime, lam, mu, tol)
            except PreconditionError:
                continue
            if gram.size == 0:
                continue
            scale = max(1.0, float(np.max(np.abs(gram))))
            if compared == 0:
                try:
                    direct = gram_direct(bp, lam, mu, tol)
                    if float(np.max(np.abs(direct - gram))) > tol.angle_atol * scale:
                        logger.warning(f"lam={lam} mu={mu}: Weyl quotient and field Gram disagree")
                except PreconditionError:
                    pass
            gap = max(gap, float(np.max(np.abs(gram - gram_prime))) / scale)
            compared += 1
    return gap if compared else None


def reconstruct_unitary(
    bp: BoundaryPair, bp_prime: BoundaryPair, grid: List[complex], tol: Tol = DEFAULT_TOL
) -> Optional[np.ndarray]:
    """Unitary ``U`` with ``GammaB' = GammaB U~^{-1}``, built from the gamma fields.

    Only the Hilbert case is reconstructed; an indefinite metric yields None.

    Raises:
        RankDeficientError: If the field vectors do not span H.
        GramMismatchError: If the Gram matrices of the two families differ.
    """
    if not (bp.H.is_hilbert() and bp_prime.H.is_hilbert()):
        logger.warning("reconstruction needs a definite metric; result indeterminate")
        return None
    if bp.n != bp_prime.n:
        raise DimensionMismatchError(f"spaces of dim {bp.n} and {bp_prime.n}")
    X, X_prime = _field_columns(bp, bp_prime, grid, tol)
    rank = np.linalg.matrix_rank(X, tol=tol.rank_rtol * max(1.0, float(np.linalg.norm(X)))) if X.size else 0
    if rank < bp.n:
        raise RankDeficientError(f"field vectors span {rank} of {bp.n} dimensions; refine the grid")
    gap = weyl_gram_gap(bp, bp_prime, grid, tol)
    if gap is None:
        gram, gram_prime = X.conj().T @ X, X_prime.conj().T @ X_prime
        gap = float(np.max(np.abs(gram - gram_prime))) / max(1.0, float(np.max(np.abs(gram))))
    if gap > tol.angle_atol:
        raise GramMismatchError(f"Gram matrices differ by {gap:.3e}")
    U, _ = polar(X_prime @ np.linalg.pinv(X))
    logger.debug(f"reconstructed U from {X.shape[1]} field vectors, Gram gap {gap:.2e}")
    return U


# =============================================================================
# Comparison report
# =============================================================================


class EquivReport(BaseModel):
    """Outcome of comparing two boundary pairs.

    Parameters:
        weyl_match: Whether the Weyl families agree on the grid.
        weyl_residual: Largest distance between them.
        unit_holds: The transfer relations of GammaB and GammaA agree.
        unitp_holds: The transfer relation is unitary (only for ``A = B``).
        U: Intertwining operator, when one was found.
        similarity_residual: ``check_similarity`` for ``U``.
        verdict: unitarily_equivalent, similar or indeterminate.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    weyl_match: bool
    weyl_residual: float
    unit_holds: bool
    unitp_holds: Optional[bool] = None
    U: Optional[np.ndarray] = None
    similarity_residual: Optional[float] = None
    verdict: Verdict


def compare_triples(
    bp: BoundaryPair,
    bp_prime: BoundaryPair,
    grid: List[complex],
    U=None,
    tol: Tol = DEFAULT_TOL,
) -> EquivReport:
    """Weyl match, unitarity criteria and an intertwiner, if one can be produced.

    A supplied ``U`` is only verified. Otherwise the Hilbert case rebuilds a
    unitary and the general case falls back to a least-squares intertwiner.
    """
    match = weyl_match(bp, bp_prime, grid, tol)
    unit_holds, _ = check_unit_condition(bp, bp_prime, tol)
    unitp = None
    if _is_self_dual(bp, tol):
        unitp, _ = check_unitp(bp, bp_prime, tol)

    candidate = None if U is None else as_cmatrix(U)
    if candidate is None and match.matched:
        try:
            candidate = reconstruct_unitary(bp, bp_prime, grid, tol)
        except (GramMismatchError, RankDeficientError) as e:
            logger.info(f"no unitary reconstruction: {e}")
        if candidate is None:
            try:
                candidate, _ = least_squares_intertwiner(bp, bp_prime, grid, tol)
            except (GramMismatchError, RankDeficientError) as e:
                logger.info(f"no intertwiner: {e}")
                candidate = None

    verdict, sim = Verdict.INDETERMINATE, None
    if candidate is not None and candidate.shape == (bp_prime.n, bp.n):
        try:
            sim = check_similarity(bp, bp_prime, candidate, tol)
        except SingularFormError:
            sim = None
        if sim is not None and sim <= tol.angle_atol:
            unitary = is_st1(candidate, bp.H, bp_prime.H, tol)
            verdict = Verdict.UNITARILY_EQUIVALENT if unitary else Verdict.SIMILAR
    logger.debug(f"compare: weyl={match.matched} unit={unit_holds} unitp={unitp} verdict={verdict.value}")
    return EquivReport(
        weyl_match=match.matched,
        weyl_residual=match.residual,
        unit_holds=unit_holds,
        unitp_holds=unitp,
        U=candidate,
        similarity_residual=sim,
        verdict=verdict,
    )


def qsc_imaginary_match(
    T, T_prime, Q, Q_prime, bp: BoundaryPair, bp_prime: BoundaryPair, tol: Tol = DEFAULT_TOL
) -> float:
    """Compare ``(T^* - T) x`` with ``(T'^* - T') x'`` over ``((x', y'), (x, y))`` in ``(GammaB)^{-1} GammaB'``.

    Both vectors lie in N; they are compared in the coordinates ``Q``, ``Q'``
    the two boundary triples use for N.

    Returns:
        The largest coordinate difference.
    """
    Tm, Tpm = as_cmatrix(T, rows=bp.n, cols=bp.n), as_cmatrix(T_prime, rows=bp_prime.n, cols=bp_prime.n)
    R = transfer_relation(bp, bp_prime, tol)
    if R.dim == 0:
        return 0.0
    x_prime = R.top[: bp_prime.n]
    x = R.bottom[: bp.n]
    Qm, Qpm = as_cmatrix(Q, rows=bp.n), as_cmatrix(Q_prime, rows=bp_prime.n)
    gap = Qm.conj().T @ (Tm.conj().T - Tm) @ x - Qpm.conj().T @ (Tpm.conj().T - Tpm) @ x_prime
    return float(np.max(np.abs(gap))) if gap.size else 0.0
