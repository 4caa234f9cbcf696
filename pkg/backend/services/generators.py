#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Seeded instances and fixtures.

Every random instance is built from one ``numpy.random.Generator`` seeded
once, so an instance is a pure function of ``(kind, dim, seed)``.
"""

from typing import Dict, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from config.settings import MAX_DIM, MIN_DIM
from core.errors import ArgumentError, DimensionMismatchError, NotSymmetricError, PreconditionError, SingularFormError
from core.krein import KreinSpace, hilbert_space, krein_space, make_graph_space, pontryagin_space
from core.linalg import (
    DEFAULT_TOL,
    Subspace,
    Tol,
    column_space,
    hermitian_congruence,
    inertia,
    orthogonal_complement,
    span,
    subspace_intersect,
)
from core.relations import LinearRelation, from_pairs, from_subspace, is_selfadjoint, is_symmetric
from services.boundary import (
    BoundaryPair,
    adjoint,
    boundary_pair,
    dual_pair,
    qsc_boundary_pair,
    y_matrix,
)
from services.transforms import DBTParams, FLTParams

KIND_SYMMETRIC = "symmetric"
KIND_DUALPAIR = "dualpair"
KIND_QSC = "qsc"
KIND_FLT = "flt"
KIND_DBT = "dbt"
KIND_PONTRYAGIN = "pontryagin"

KINDS = (KIND_SYMMETRIC, KIND_DUALPAIR, KIND_QSC, KIND_FLT, KIND_DBT, KIND_PONTRYAGIN)


class Instance(BaseModel):
    """A generated (or loaded) problem instance.

    Parameters:
        kind: One of ``KINDS``.
        seed: Seed the instance was drawn with.
        space: The Krein space H.
        bp: The boundary pair under test.
        relations: Named relations in H (at least ``A`` and ``B``).
        matrices: Named raw matrices (``T`` and ``N`` for qsc instances).
        flt: Fractional-linear parameters for ``flt`` instances.
        dbt: Splitting data for ``dbt`` instances.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: str
    seed: int
    space: KreinSpace
    bp: BoundaryPair
    relations: Dict[str, LinearRelation] = Field(default_factory=dict)
    matrices: Dict[str, np.ndarray] = Field(default_factory=dict)
    flt: Optional[FLTParams] = None
    dbt: Optional[DBTParams] = None


# =============================================================================
# Random building blocks
# =============================================================================


def complex_normal(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    z = complex_normal(rng, n, n)
    return (z + z.conj().T) / 2


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with the phases of R removed."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    q, r = np.linalg.qr(complex_normal(rng, n, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_invertible(n: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary times a diagonal in [1, 2]: condition number at most 2."""
    return haar_unitary(n, rng) @ np.diag(rng.uniform(1.0, 2.0, n))


def hyperbolic_rotation(t: float) -> np.ndarray:
    """Unitary for the form ``diag(1, -1)``."""
    return np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]], dtype=complex)


def j_unitary(space: KreinSpace, rng: np.random.Generator, boost: float = 0.7) -> np.ndarray:
    """Random standard unitary of a Krein space.

    Unitaries of the positive and negative parts, followed by a hyperbolic
    rotation of strength ``boost`` mixing one positive with one negative
    direction when both exist.
    """
    w, V = np.linalg.eigh(space.J)
    plus = np.flatnonzero(w > 0)
    minus = np.flatnonzero(w < 0)
    U = np.zeros((space.dim, space.dim), dtype=complex)
    U[np.ix_(plus, plus)] = haar_unitary(len(plus), rng)
    U[np.ix_(minus, minus)] = haar_unitary(len(minus), rng)
    if len(plus) and len(minus) and boost:
        R = np.eye(space.dim, dtype=complex)
        idx = [plus[0], minus[0]]
        R[np.ix_(idx, idx)] = hyperbolic_rotation(boost * rng.uniform(0.5, 1.0))
        U = R @ U
    return V @ U @ V.conj().T


def random_subspace(n: int, k: int, rng: np.random.Generator, tol: Tol = DEFAULT_TOL) -> Subspace:
    if k == 0:
        return column_space(np.zeros((n, 0)), tol)
    return column_space(complex_normal(rng, n, k), tol)


def random_theta(g0_dim: int, g1_dim: int, rng: np.random.Generator, dim: Optional[int] = None) -> LinearRelation:
    """A random relation from C^g0 to C^g1, of dimension g0 unless given."""
    k = g0_dim if dim is None else dim
    basis = complex_normal(rng, g0_dim + g1_dim, k)
    return from_subspace(g0_dim, g1_dim, column_space(basis))


def symmetric_operator(
    space: KreinSpace,
    rng: np.random.Generator,
    domain_dim: int,
    contains: Optional[np.ndarray] = None,
) -> LinearRelation:
    """``S`` restricted to a random domain, with ``S = J H`` J-selfadjoint.

    Args:
        space: The Krein space.
        rng: Random generator.
        domain_dim: Dimension of the domain.
        contains: Optional vector forced into the domain.

    Returns:
        A J-symmetric operator.
    """
    n = space.dim
    S = space.J @ random_hermitian(rng, n)
    if contains is None:
        D = random_subspace(n, domain_dim, rng).basis
    else:
        extra = complex_normal(rng, n, max(domain_dim - 1, 0))
        D = column_space(np.hstack([np.asarray(contains, dtype=complex).reshape(n, 1), extra])).basis
    return from_pairs(D, S @ D)


# =============================================================================
# Fixtures
# =============================================================================


def fixture_f1() -> tuple:
    """``A = diag(1, 2)`` restricted to ``span{(1, 1)}`` in C^2; defect numbers (1, 1)."""
    H = hilbert_space(2)
    A = from_pairs([[1.0], [1.0]], [[1.0], [2.0]])
    return H, A


def fixture_f2() -> tuple:
    """Pontryagin fixture in C^3 with ``J = diag(1, 1, -1)``.

    ``A = S|D`` with ``S = J H`` J-selfadjoint and ``D = span{(1, 1, 0), e3}``,
    so the negative direction ``e3`` lies in the domain.
    """
    space = pontryagin_space(3, 1)
    Hm = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 1.0]], dtype=complex)
    S = space.J @ Hm
    D = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]], dtype=complex)
    return space, from_pairs(D, S @ D)


# =============================================================================
# Boundary pairs
# =============================================================================


def _complement(outer: Subspace, inner: Subspace, tol: Tol) -> np.ndarray:
    """Basis of the Euclidean complement of ``inner`` inside ``outer``."""
    return subspace_intersect(outer, orthogonal_complement(inner, tol), tol).basis


def _green_form(space: KreinSpace, X: np.ndarray) -> np.ndarray:
    form = X.conj().T @ make_graph_space(space).J @ X
    return (form + form.conj().T) / 2


def ordinary_triple(
    space: KreinSpace,
    A: LinearRelation,
    rng: Optional[np.random.Generator] = None,
    tol: Tol = DEFAULT_TOL,
) -> BoundaryPair:
    """Ordinary boundary triple ``(C^m, Gamma_0, Gamma_1)`` for a symmetric relation.

    The Green form on a complement of ``A`` in ``A^c`` is carried onto the
    boundary form by a Hermitian congruence; ``GammaA = GammaB``.

    Raises:
        NotSymmetricError: If ``A`` is not symmetric.
        PreconditionError: If the Green form is unbalanced.
    """
    if not is_symmetric(A, space, tol):
        raise NotSymmetricError("an ordinary triple needs a symmetric relation")
    Ac = adjoint(A, space, tol)
    X = _complement(Ac.graph, A.graph, tol)
    omega = _green_form(space, X)
    plus, minus, _ = inertia(omega, tol)
    if plus != minus:
        raise PreconditionError(f"Green form has inertia ({plus}, {minus})")
    m = plus
    Y = y_matrix(m, m)
    L = hermitian_congruence(omega, Y, tol) if m else np.zeros((0, 0), dtype=complex)
    if rng is not None and m:
        L = j_unitary(krein_space(Y), rng) @ L
    Gamma = from_pairs(
        np.hstack([A.graph.basis, X]),
        np.hstack([np.zeros((2 * m, A.dim)), L]),
        tol,
    )
    logger.debug(f"ordinary triple: n={space.dim} dim A={A.dim} m={m}")
    return boundary_pair(dual_pair(space, A, A, tol), m, m, Gamma, Gamma, tol)


def boundary_triple_for_pair(
    space: KreinSpace,
    A: LinearRelation,
    B: LinearRelation,
    g0_dim: int,
    g1_dim: int,
    rng: np.random.Generator,
    tol: Tol = DEFAULT_TOL,
) -> BoundaryPair:
    """A boundary triple for an arbitrary dual pair and any split of its defect.

    ``GammaB`` sends a complement of ``A`` in ``B^c`` onto ``G`` by an invertible
    matrix ``R``; ``GammaA`` is then forced by the Green identity on a
    complement of ``B`` in ``A^c``.
    """
    pair = dual_pair(space, A, B, tol)
    X = _complement(adjoint(B, space, tol).graph, A.graph, tol)
    Xs = _complement(adjoint(A, space, tol).graph, B.graph, tol)
    d = X.shape[1]
    if g0_dim + g1_dim != d:
        raise DimensionMismatchError(f"g0 + g1 = {g0_dim + g1_dim}, defect is {d}")
    omega = Xs.conj().T @ make_graph_space(space).J @ X
    R = random_invertible(d, rng)
    Y = y_matrix(g0_dim, g1_dim)
    H_hat = Y.conj().T @ np.linalg.solve(R.conj().T, omega.conj().T) if d else np.zeros((0, 0))
    GammaB = from_pairs(np.hstack([A.graph.basis, X]), np.hstack([np.zeros((d, A.dim)), R]), tol)
    GammaA = from_pairs(np.hstack([B.graph.basis, Xs]), np.hstack([np.zeros((d, B.dim)), H_hat]), tol)
    logger.debug(f"bt for dual pair: n={space.dim} d={d} split=({g0_dim},{g1_dim})")
    return boundary_pair(pair, g0_dim, g1_dim, GammaB, GammaA, tol)


def d_boundary_pair(space: KreinSpace, A: LinearRelation, d: DBTParams, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """Boundary pair for ``(A, A)`` with ``GammaA = E GammaB``.

    With ``G2 = {0}`` this is an ordinary triple; otherwise the boundary
    maps are injective on ``A^c / A`` but miss part of ``G``.
    """
    if not is_symmetric(A, space, tol):
        raise NotSymmetricError("a D-boundary pair needs a symmetric relation")
    Ac = adjoint(A, space, tol)
    X = _complement(Ac.graph, A.graph, tol)
    omega = _green_form(space, X)
    E = d.e_matrix()
    Y = y_matrix(d.g0_dim, d.g1_dim)
    model = (Y @ E).conj().T
    try:
        L = hermitian_congruence(omega, model, tol) if X.shape[1] else np.zeros((d.g_dim, 0))
    except SingularFormError as e:
        raise DimensionMismatchError(f"split ({d.g0_dim},{d.g1_dim}) cannot carry the Green form: {e}") from e
    zeros = np.zeros((d.g_dim, A.dim))
    top = np.hstack([A.graph.basis, X])
    GammaB = from_pairs(top, np.hstack([zeros, L]), tol)
    GammaA = from_pairs(top, E @ np.hstack([zeros, L]), tol)
    return boundary_pair(dual_pair(space, A, A, tol), d.g0_dim, d.g1_dim, GammaB, GammaA, tol)


def range_restricted(bp: BoundaryPair, extra: int = 1, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """Enlarge G0 by ``extra`` directions outside the range of ``GammaB``.

    ``GammaA`` picks up the new directions as multivalued part, so the pair
    stays isometric (and unitary if it was) while ``ran GammaB_0`` is proper.
    """
    g0, g1 = bp.g0_dim, bp.g1_dim
    G0 = g0 + extra
    embed_b = np.zeros((G0 + g1, g0 + g1), dtype=complex)
    embed_b[:g0, :g0] = np.eye(g0)
    embed_b[G0:, g0:] = np.eye(g1)
    embed_a = np.zeros((g1 + G0, g1 + g0), dtype=complex)
    embed_a[: g1 + g0, :] = np.eye(g1 + g0)
    GammaB = from_pairs(bp.GammaB.top, embed_b @ bp.GammaB.bottom, tol)
    indeterminate = np.zeros((bp.GammaA.dom_dim + g1 + G0, extra), dtype=complex)
    indeterminate[bp.GammaA.dom_dim + g1 + g0 :, :] = np.eye(extra)
    stacked = np.hstack([np.vstack([bp.GammaA.top, embed_a @ bp.GammaA.bottom]), indeterminate])
    GammaA = from_subspace(bp.GammaA.dom_dim, g1 + G0, column_space(stacked, tol))
    return boundary_pair(bp.pair, G0, g1, GammaB, GammaA, tol)


def trivial_pair(space: KreinSpace, A: LinearRelation, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """``G = {0}`` and both boundary relations equal to ``A^c x {0}``."""
    if not is_selfadjoint(A, space, tol):
        raise PreconditionError("the trivial pair needs a selfadjoint relation")
    Gamma = from_subspace(2 * space.dim, 0, adjoint(A, space, tol).graph)
    return boundary_pair(dual_pair(space, A, A, tol), 0, 0, Gamma, Gamma, tol)


# =============================================================================
# FLT parameters
# =============================================================================


def random_flt_params(m: int, rng: np.random.Generator, primed: bool = True) -> FLTParams:
    """Parameters satisfying the compatibility system.

    ``Im B`` has a random rank and lives in ``K N`` for a random subspace ``N``;
    ``C' - C`` is Hermitian and vanishes on ``N``, and ``Im B'`` is the
    transport of ``Im B`` by ``K' K^{-1}``. The two transformed triples then
    have unitarily equivalent ``A0``.
    """
    K = random_invertible(m, rng)
    N = random_subspace(m, int(rng.integers(0, m + 1)), rng).basis
    Q = K @ N
    im_B = Q @ random_hermitian(rng, N.shape[1]) @ Q.conj().T
    B = random_hermitian(rng, m) + 1j * im_B
    C = complex_normal(rng, m, m)
    if not primed:
        return FLTParams(K=K, B=B, C=C)
    K_prime = random_invertible(m, rng)
    ratio = K_prime @ np.linalg.inv(K)
    # exact zero when N is everything, so that C' = C
    off_N = np.eye(m) - N @ N.conj().T if N.shape[1] < m else np.zeros((m, m))
    return FLTParams(
        K=K,
        B=B,
        C=C,
        K_prime=K_prime,
        B_prime=random_hermitian(rng, m) + 1j * ratio @ im_B @ ratio.conj().T,
        C_prime=C + off_N @ random_hermitian(rng, m) @ off_N,
    )


# =============================================================================
# Seeded instances
# =============================================================================


def _check_request(kind: str, dim: int) -> None:
    if kind not in KINDS:
        raise ArgumentError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if not MIN_DIM <= dim <= MAX_DIM:
        raise ArgumentError(f"dim={dim} outside [{MIN_DIM}, {MAX_DIM}]")


def _symmetric_instance(kind: str, dim: int, seed: int, rng: np.random.Generator) -> Instance:
    space = hilbert_space(dim)
    A = symmetric_operator(space, rng, dim - 1)
    bp = ordinary_triple(space, A, rng)
    flt = random_flt_params(bp.g0_dim, rng) if kind == KIND_FLT else None
    return Instance(kind=kind, seed=seed, space=space, bp=bp, relations={"A": A, "B": A}, flt=flt)


def _dualpair_instance(dim: int, seed: int, rng: np.random.Generator) -> Instance:
    kappa = int(rng.integers(0, dim + 1))
    space = pontryagin_space(dim, kappa)
    k = dim - 1
    B = from_subspace(dim, dim, random_subspace(2 * dim, k, rng))
    Bc = adjoint(B, space)
    coeffs = complex_normal(rng, Bc.dim, k)
    A = from_subspace(dim, dim, column_space(Bc.graph.basis @ coeffs))
    d = 2 * dim - A.dim - B.dim
    g0 = int(rng.integers(0, d + 1))
    bp = boundary_triple_for_pair(space, A, B, g0, d - g0, rng)
    return Instance(kind=KIND_DUALPAIR, seed=seed, space=space, bp=bp, relations={"A": A, "B": B})


def _qsc_instance(dim: int, seed: int, rng: np.random.Generator) -> Instance:
    q = complex_normal(rng, dim, 1)
    q /= np.linalg.norm(q)
    T0 = random_hermitian(rng, dim) + 1j * rng.uniform(0.2, 1.0) * (q @ q.conj().T)
    T = 0.9 * T0 / np.linalg.norm(T0, 2)
    vectors = [q]
    if dim >= 2 and rng.random() < 0.5:
        vectors.append(complex_normal(rng, dim, 1))
    N = span(*vectors)
    bp = qsc_boundary_pair(T, N)
    return Instance(
        kind=KIND_QSC,
        seed=seed,
        space=bp.H,
        bp=bp,
        relations={"A": bp.pair.A, "B": bp.pair.B},
        matrices={"T": T, "N": N.basis},
    )


def _krein_instance(kind: str, dim: int, seed: int, rng: np.random.Generator) -> Instance:
    space = pontryagin_space(dim, 1)
    negative = np.eye(dim)[:, dim - 1]
    if kind == KIND_PONTRYAGIN:
        A = symmetric_operator(space, rng, max(dim - 1, 1), contains=negative)
        bp = ordinary_triple(space, A, rng)
        return Instance(kind=kind, seed=seed, space=space, bp=bp, relations={"A": A, "B": A})
    A = symmetric_operator(space, rng, dim - 1)
    m = (2 * dim - 2 * A.dim) // 2
    params = DBTParams(g0_dim=m + 1, g1_dim=m)
    bp = d_boundary_pair(space, A, params)
    return Instance(kind=kind, seed=seed, space=space, bp=bp, relations={"A": A, "B": A}, dbt=params)


def random_instance(kind: str, dim: int, seed: int) -> Instance:
    """Deterministic instance of the given kind.

    Raises:
        ArgumentError: For an unknown kind or a dimension out of range.
    """
    _check_request(kind, dim)
    rng = np.random.default_rng(seed)
    if kind in (KIND_SYMMETRIC, KIND_FLT):
        instance = _symmetric_instance(kind, dim, seed, rng)
    elif kind == KIND_DUALPAIR:
        instance = _dualpair_instance(dim, seed, rng)
    elif kind == KIND_QSC:
        instance = _qsc_instance(dim, seed, rng)
    else:
        instance = _krein_instance(kind, dim, seed, rng)
    logger.debug(f"generated {kind} dim={dim} seed={seed}: g=({instance.bp.g0_dim},{instance.bp.g1_dim})")
    return instance
