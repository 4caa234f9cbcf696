#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Dual pairs, boundary pairs and boundary triples.

A boundary pair for a dual pair ``(A, B)`` in ``H`` consists of two relations

    GammaB : H_Gamma -> G  = G0 + G1,   boundary vector (l0, l1)
    GammaA : H_Gamma -> G' = G1 + G0,   boundary vector (h1, h0)

tied together by the Green identity ``[x^, y^]_Gamma = <l^, Y h^>_G`` with
``Y (h1, h0) = (-i h0, i h1)``. The boundary spaces are Hilbert spaces; only
their dimensions are stored.
"""

from typing import Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator

from core.errors import (
    ArgumentError,
    DimensionMismatchError,
    NotContractionError,
    NotIsometricError,
    PreconditionError,
    SubspaceTooSmallError,
)
from core.krein import KreinSpace, hilbert_space, make_graph_space
from core.linalg import (
    DEFAULT_TOL,
    Subspace,
    Tol,
    as_cmatrix,
    column_space,
    full_subspace,
    null_space,
    orthogonal_complement,
    subspace_contains,
    subspace_eq,
)
from core.relations import (
    LinearRelation,
    compose,
    dom,
    from_operator,
    from_pairs,
    from_subspace,
    hilbert_adjoint,
    image,
    inverse,
    intersect,
    ker,
    krein_adjoint,
    mul,
    preimage,
    ran,
    relation_contains,
    relation_eq,
    rel_sum,
    restrict,
)

# Directions accepted by gamma_sharp
FROM_B = "B"
FROM_A = "A"


class DualPair(BaseModel):
    """Relations ``A``, ``B`` in ``H`` with ``A`` contained in ``B^c``.

    Parameters:
        H: The Krein space.
        A: First relation.
        B: Second relation.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    H: KreinSpace
    A: LinearRelation
    B: LinearRelation

    @model_validator(mode="after")
    def _square(self) -> "DualPair":
        n = self.H.dim
        for name, r in (("A", self.A), ("B", self.B)):
            if (r.dom_dim, r.codom_dim) != (n, n):
                raise ValueError(f"{name} is not a relation in a space of dim {n}")
        return self


class BoundaryPair(BaseModel):
    """Boundary relations ``GammaB``, ``GammaA`` for a dual pair.

    Parameters:
        pair: The dual pair (A, B).
        g0_dim: Dimension of G0.
        g1_dim: Dimension of G1.
        GammaB: Relation from H_Gamma to G0 + G1.
        GammaA: Relation from H_Gamma to G1 + G0.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pair: DualPair
    g0_dim: int
    g1_dim: int
    GammaB: LinearRelation
    GammaA: LinearRelation

    @model_validator(mode="after")
    def _shapes(self) -> "BoundaryPair":
        n2, g = 2 * self.pair.H.dim, self.g0_dim + self.g1_dim
        for name, r in (("GammaB", self.GammaB), ("GammaA", self.GammaA)):
            if (r.dom_dim, r.codom_dim) != (n2, g):
                raise ValueError(f"{name} must map C^{n2} to C^{g}, got {r!r}")
        return self

    @property
    def H(self) -> KreinSpace:
        return self.pair.H

    @property
    def n(self) -> int:
        return self.pair.H.dim

    @property
    def g_dim(self) -> int:
        return self.g0_dim + self.g1_dim


class Components(BaseModel):
    """Boundary components and their kernels.

    Parameters:
        GammaB0: (x^, l0) part of GammaB.
        GammaB1: (x^, l1) part of GammaB.
        GammaA0: (y^, h1) part of GammaA.
        GammaA1: (y^, h0) part of GammaA.
        A0: Ker GammaB0.
        A1: Ker GammaB1.
        B0: Ker GammaA0.
        B1: Ker GammaA1.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    GammaB0: LinearRelation
    GammaB1: LinearRelation
    GammaA0: LinearRelation
    GammaA1: LinearRelation
    A0: LinearRelation
    A1: LinearRelation
    B0: LinearRelation
    B1: LinearRelation


class LadderFlags(BaseModel):
    """Which rungs of the boundary pair hierarchy a pair reaches."""

    ibp: bool
    ubp: bool
    bt: bool
    AB_gen: bool
    q_bt: bool
    ES_gen: bool
    S_gen: bool
    B_gen: bool
    operators: bool
    surjective: bool


class ExtensionAdjoint(BaseModel):
    """Comparison of ``A_theta^c`` with ``(GammaB_#)^{-1}(theta^*)``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    adjoint: LinearRelation
    candidate: LinearRelation
    contained: bool
    equal: bool
    distance: float


# =============================================================================
# Construction helpers
# =============================================================================


def y_matrix(g0_dim: int, g1_dim: int) -> np.ndarray:
    """``Y: G' -> G``, ``(h1, h0) -> (-i h0, i h1)``."""
    Y = np.zeros((g0_dim + g1_dim, g1_dim + g0_dim), dtype=complex)
    Y[:g0_dim, g1_dim:] = -1j * np.eye(g0_dim)
    Y[g0_dim:, :g1_dim] = 1j * np.eye(g1_dim)
    return Y


def adjoint(r: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    return krein_adjoint(r, space, space, tol)


def dual_pair(H: KreinSpace, A: LinearRelation, B: LinearRelation, tol: Tol = DEFAULT_TOL) -> DualPair:
    """Validated dual pair; raises ``ArgumentError`` unless ``A`` lies in ``B^c``."""
    pair = DualPair(H=H, A=A, B=B)
    ok, residual = relation_contains(adjoint(B, H, tol), A, tol)
    if not ok:
        logger.error(f"A is not contained in B^c (residual {residual:.3e})")
        raise ArgumentError(f"(A, B) is not a dual pair: residual {residual:.3e}")
    return pair


def boundary_pair(
    pair: DualPair,
    g0_dim: int,
    g1_dim: int,
    GammaB: LinearRelation,
    GammaA: LinearRelation,
    tol: Tol = DEFAULT_TOL,
) -> BoundaryPair:
    """Build a boundary pair and insist that it is isometric."""
    bp = BoundaryPair(pair=pair, g0_dim=g0_dim, g1_dim=g1_dim, GammaB=GammaB, GammaA=GammaA)
    check_ibp(bp, tol)
    return bp


def project_codomain(gamma: LinearRelation, start: int, stop: int) -> LinearRelation:
    """Keep the boundary coordinates ``start:stop`` of ``gamma``."""
    P = np.eye(gamma.codom_dim)[start:stop]
    return compose(from_operator(P), gamma)


def map_codomain(gamma: LinearRelation, M, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``M gamma`` for a matrix ``M`` acting on the boundary space."""
    return compose(from_operator(as_cmatrix(M, cols=gamma.codom_dim)), gamma, tol)


def as_relation_in(space_dim: int, s: Subspace) -> LinearRelation:
    """Read a subspace of C^(2n) as a relation in C^n."""
    return from_subspace(space_dim, space_dim, s)


# =============================================================================
# Dual boundary relations and the Green identity
# =============================================================================


def gamma_sharp(
    gamma: LinearRelation,
    base: KreinSpace,
    g0_dim: int,
    g1_dim: int,
    direction: str,
    tol: Tol = DEFAULT_TOL,
) -> LinearRelation:
    """The relation dual to ``gamma`` under the Green identity.

    Args:
        gamma: ``GammaB`` (direction ``"B"``) or ``GammaA`` (direction ``"A"``).
        base: The Krein space H.
        g0_dim: Dimension of G0.
        g1_dim: Dimension of G1.
        direction: Which boundary relation ``gamma`` is.
        tol: Tolerances.

    Returns:
        ``GammaB_#`` (into G') or ``GammaA_#`` (into G).
    """
    HG = make_graph_space(base)
    if gamma.dom_dim != HG.dim or gamma.codom_dim != g0_dim + g1_dim:
        raise DimensionMismatchError(
            f"{gamma!r} does not match H_Gamma of dim {HG.dim} and G0 + G1 = {g0_dim} + {g1_dim}"
        )
    if direction not in (FROM_B, FROM_A):
        raise ArgumentError(f"unknown direction {direction!r}")
    total = gamma.dom_dim + gamma.codom_dim
    if gamma.dim == 0:
        return from_subspace(gamma.dom_dim, gamma.codom_dim, full_subspace(total))
    Y = y_matrix(g0_dim, g1_dim)
    twist = Y.conj().T if direction == FROM_B else Y
    constraints = np.vstack([HG.J @ gamma.top, -(twist @ gamma.bottom)])
    kernel = null_space(constraints.conj().T, tol, scale=1.0)
    return from_subspace(gamma.dom_dim, gamma.codom_dim, Subspace(ambient_dim=total, basis=kernel))


def sharp_B(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    return gamma_sharp(bp.GammaB, bp.H, bp.g0_dim, bp.g1_dim, FROM_B, tol)


def sharp_A(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    return gamma_sharp(bp.GammaA, bp.H, bp.g0_dim, bp.g1_dim, FROM_A, tol)


def green_residual(bp: BoundaryPair) -> float:
    """Largest entry of ``Yh^H J_Gamma Xh - H^H Y^H L`` over the two graph bases."""
    if bp.GammaB.dim == 0 or bp.GammaA.dim == 0:
        return 0.0
    JG = make_graph_space(bp.H).J
    Y = y_matrix(bp.g0_dim, bp.g1_dim)
    Xh, L = bp.GammaB.top, bp.GammaB.bottom
    Yh, Hh = bp.GammaA.top, bp.GammaA.bottom
    gram = Yh.conj().T @ JG @ Xh - Hh.conj().T @ Y.conj().T @ L
    return float(np.max(np.abs(gram)))


def adjoint_formula(bp: BoundaryPair, direction: str = FROM_B, tol: Tol = DEFAULT_TOL) -> float:
    """Distance between ``(GammaB)^c`` and ``(Y GammaB_#)^{-1}``.

    For ``direction="A"`` compares ``(GammaA)^c`` with ``(Y^{-1} GammaA_#)^{-1}``.
    """
    HG = make_graph_space(bp.H)
    G = hilbert_space(bp.g_dim)
    Y = y_matrix(bp.g0_dim, bp.g1_dim)
    if direction == FROM_B:
        lhs = krein_adjoint(bp.GammaB, HG, G, tol)
        rhs = inverse(map_codomain(sharp_B(bp, tol), Y, tol))
    else:
        lhs = krein_adjoint(bp.GammaA, HG, G, tol)
        rhs = inverse(map_codomain(sharp_A(bp, tol), Y.conj().T, tol))
    _, angle = relation_eq(lhs, rhs, tol)
    return angle


def isometry_defects(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> dict:
    """Residuals of the three clauses of an isometric boundary pair."""
    H = bp.H
    _, dom_b = subspace_eq(dom(bp.GammaB, tol), adjoint(bp.pair.B, H, tol).graph, tol)
    _, dom_a = subspace_eq(dom(bp.GammaA, tol), adjoint(bp.pair.A, H, tol).graph, tol)
    return {"green": green_residual(bp), "dom_GammaB": dom_b, "dom_GammaA": dom_a}


def is_ibp(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> bool:
    defects = isometry_defects(bp, tol)
    return (
        defects["green"] <= tol.residual_atol
        and defects["dom_GammaB"] <= tol.angle_atol
        and defects["dom_GammaA"] <= tol.angle_atol
    )


def check_ibp(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> None:
    defects = isometry_defects(bp, tol)
    if not is_ibp(bp, tol):
        logger.error(f"boundary pair is not isometric: {defects}")
        raise NotIsometricError(f"not an isometric boundary pair: {defects}")
    logger.debug(f"ibp ok: n={bp.n} g0={bp.g0_dim} g1={bp.g1_dim} {defects}")


def is_ubp(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> bool:
    ok_a, _ = relation_eq(bp.GammaA, sharp_B(bp, tol), tol)
    ok_b, _ = relation_eq(bp.GammaB, sharp_A(bp, tol), tol)
    return ok_a and ok_b


def swap(bp: BoundaryPair) -> BoundaryPair:
    """The boundary pair for ``(B, A)``: the roles of the two relations exchange."""
    pair = DualPair(H=bp.H, A=bp.pair.B, B=bp.pair.A)
    return BoundaryPair(
        pair=pair, g0_dim=bp.g1_dim, g1_dim=bp.g0_dim, GammaB=bp.GammaA, GammaA=bp.GammaB
    )


# =============================================================================
# Components and classification
# =============================================================================


def components(bp: BoundaryPair) -> Components:
    g0, g1, n = bp.g0_dim, bp.g1_dim, bp.n
    GB0 = project_codomain(bp.GammaB, 0, g0)
    GB1 = project_codomain(bp.GammaB, g0, g0 + g1)
    GA0 = project_codomain(bp.GammaA, 0, g1)
    GA1 = project_codomain(bp.GammaA, g1, g1 + g0)
    return Components(
        GammaB0=GB0,
        GammaB1=GB1,
        GammaA0=GA0,
        GammaA1=GA1,
        A0=as_relation_in(n, ker(GB0)),
        A1=as_relation_in(n, ker(GB1)),
        B0=as_relation_in(n, ker(GA0)),
        B1=as_relation_in(n, ker(GA1)),
    )


def gamma10(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``{(x^, l1) : (x^, (0, l1)) in GammaB}``, a relation from H_Gamma to G1."""
    g0, g1 = bp.g0_dim, bp.g1_dim
    zero_first = Subspace(
        ambient_dim=g0 + g1,
        basis=np.vstack([np.zeros((g0, g1)), np.eye(g1)]),
    )
    sliced = restrict(inverse(bp.GammaB), zero_first, tol)
    return project_codomain(inverse(sliced), g0, g0 + g1)


def gamma10_inclusion(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> dict:
    """Compare ``GammaB_10`` with ``GammaB_1`` restricted to ``A0``.

    Returns:
        ``contained`` and ``equal`` flags, the ``distance`` between the two
        relations and ``criterion``: whether the range of ``mul GammaB`` (read
        as a relation from G0 to G1) equals its multivalued part.
    """
    comps = components(bp)
    g10 = gamma10(bp, tol)
    restricted = restrict(comps.GammaB1, comps.A0.graph, tol)
    contained, _ = relation_contains(restricted, g10, tol)
    equal, distance = relation_eq(restricted, g10, tol)
    ind = from_subspace(bp.g0_dim, bp.g1_dim, mul(bp.GammaB, tol))
    criterion, _ = subspace_eq(ran(ind, tol), mul(ind, tol), tol)
    return {"contained": contained, "equal": equal, "distance": distance, "criterion": criterion}


def _full_range(r: LinearRelation, tol: Tol) -> bool:
    return ran(r, tol).is_full()


def classify(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> LadderFlags:
    """Evaluate each rung of the boundary pair hierarchy literally.

    Raises:
        NotIsometricError: If ``bp`` is not even isometric.
    """
    check_ibp(bp, tol)
    H = bp.H
    comps = components(bp)
    ubp = is_ubp(bp, tol)
    operators = mul(bp.GammaB, tol).is_zero() and mul(bp.GammaA, tol).is_zero()
    surjective = _full_range(bp.GammaB, tol) and _full_range(bp.GammaA, tol)

    a0_ok, _ = relation_eq(comps.A0, adjoint(comps.B0, H, tol), tol)
    b0_ok, _ = relation_eq(comps.B0, adjoint(comps.A0, H, tol), tol)
    ran_0 = _full_range(comps.GammaB0, tol) and _full_range(comps.GammaA0, tol)
    ran_1 = _full_range(comps.GammaB1, tol) and _full_range(comps.GammaA1, tol)

    ab_gen = a0_ok and b0_ok and ran_0
    es_gen = ubp and a0_ok
    s_gen = es_gen and b0_ok
    flags = LadderFlags(
        ibp=True,
        ubp=ubp,
        bt=ubp and operators and surjective,
        AB_gen=ab_gen,
        q_bt=ab_gen and ran_1,
        ES_gen=es_gen,
        S_gen=s_gen,
        B_gen=s_gen and ran_0,
        operators=operators,
        surjective=surjective,
    )
    logger.debug(f"classify: {flags.model_dump()}")
    return flags


# =============================================================================
# Extensions parametrized by boundary conditions
# =============================================================================


def _check_theta(bp: BoundaryPair, theta: LinearRelation) -> None:
    if (theta.dom_dim, theta.codom_dim) != (bp.g0_dim, bp.g1_dim):
        raise DimensionMismatchError(
            f"theta must be a relation from C^{bp.g0_dim} to C^{bp.g1_dim}, got {theta!r}"
        )


def extension_from_theta(bp: BoundaryPair, theta: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``A_theta = (GammaB)^{-1}(theta)``."""
    _check_theta(bp, theta)
    return as_relation_in(bp.n, preimage(bp.GammaB, theta.graph, tol))


def theta_from_extension(bp: BoundaryPair, extension: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``theta = GammaB(A~)`` for ``Ker GammaB <= A~ <= B^c``."""
    lower = ker(bp.GammaB, tol)
    upper = adjoint(bp.pair.B, bp.H, tol).graph
    if not (subspace_contains(extension.graph, lower, tol) and subspace_contains(upper, extension.graph, tol)):
        raise PreconditionError("extension does not lie between Ker GammaB and B^c")
    return from_subspace(bp.g0_dim, bp.g1_dim, image(bp.GammaB, extension.graph, tol))


def reachable_theta(bp: BoundaryPair, theta: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``(theta & ran GammaB) + mul GammaB``, the image of ``A_theta`` under ``GammaB``."""
    _check_theta(bp, theta)
    cut = from_subspace(bp.g0_dim, bp.g1_dim, ran(bp.GammaB, tol))
    ind = from_subspace(bp.g0_dim, bp.g1_dim, mul(bp.GammaB, tol))
    return rel_sum(intersect(theta, cut, tol), ind, tol)


def adjoint_of_extension(bp: BoundaryPair, theta: LinearRelation, tol: Tol = DEFAULT_TOL) -> ExtensionAdjoint:
    """``A_theta^c`` against ``(GammaB_#)^{-1}(theta^*)``; equal for closed data."""
    A_theta = extension_from_theta(bp, theta, tol)
    lhs = adjoint(A_theta, bp.H, tol)
    theta_star = hilbert_adjoint(theta, tol)
    rhs = as_relation_in(bp.n, preimage(sharp_B(bp, tol), theta_star.graph, tol))
    contained, _ = relation_contains(lhs, rhs, tol)
    equal, distance = relation_eq(lhs, rhs, tol)
    return ExtensionAdjoint(
        adjoint=lhs, candidate=rhs, contained=contained, equal=equal, distance=distance
    )


# =============================================================================
# Quasi-selfadjoint contractions
# =============================================================================


def qsc_boundary_pair(T, N: Subspace, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """Boundary triple of a quasi-selfadjoint contraction.

    ``A = T`` restricted to the orthogonal complement of ``N`` and
    ``A^* = T + ({0} x N)``. With ``Q`` an orthonormal basis of ``N``:

        GammaB (x, y) = (Q^H (T x - y), Q^H x)
        GammaA (x, y) = (Q^H (T^* x - y), Q^H x)

    Args:
        T: Contraction on C^n.
        N: Subspace containing the range of ``T^* - T``.
        tol: Tolerances.

    Returns:
        A boundary triple for the dual pair ``(A, A)`` with ``G0 = G1 = N``.
    """
    Tm = as_cmatrix(T)
    n = Tm.shape[0]
    if Tm.shape != (n, n) or N.ambient_dim != n:
        raise DimensionMismatchError("T must be square and N must live in the same space")
    norm = float(np.linalg.norm(Tm, 2)) if n else 0.0
    if norm > 1.0 + tol.residual_atol:
        raise NotContractionError(f"||T|| = {norm:.6f} exceeds 1")
    imaginary = column_space(Tm.conj().T - Tm, tol)
    if not subspace_contains(N, imaginary, tol):
        raise SubspaceTooSmallError("N does not contain the range of T^* - T")

    Q = N.basis
    k = N.dim
    rest = orthogonal_complement(N, tol).basis
    A = from_pairs(rest, Tm @ rest, tol)
    H = hilbert_space(n)

    domain = np.zeros((2 * n, n + k), dtype=complex)
    domain[:n, :n] = np.eye(n)
    domain[n:, :n] = Tm
    domain[n:, n:] = Q
    Qh = Q.conj().T
    map_b = np.block([[Qh @ Tm, -Qh], [Qh, np.zeros((k, n))]])
    map_a = np.block([[Qh @ Tm.conj().T, -Qh], [Qh, np.zeros((k, n))]])
    GammaB = from_pairs(domain, map_b @ domain, tol)
    GammaA = from_pairs(domain, map_a @ domain, tol)
    logger.debug(f"qsc pair: n={n} dim N={k} ||T||={norm:.4f}")
    return boundary_pair(dual_pair(H, A, A, tol), k, k, GammaB, GammaA, tol)


def q_function(T, N: Subspace, lam: complex) -> np.ndarray:
    """``Q_T(lam) = P_N (T - lam)^{-1}`` restricted to ``N``, in the basis of ``N``."""
    Tm = as_cmatrix(T)
    Q = N.basis
    resolvent = np.linalg.inv(Tm - lam * np.eye(Tm.shape[0]))
    return Q.conj().T @ resolvent @ Q
