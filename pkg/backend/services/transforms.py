#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Fractional linear transforms of ordinary triples and D-boundary triples.

An ordinary triple ``(L, Gdot)`` for ``A^c`` is turned into a boundary
triple for ``(A, A)`` by a homeomorphism ``W`` of the boundary graph space:

    GammaB = W Gdot,   GammaA = (W^c)^{-1} Gdot,

    W = [[K^{-1} B,          -K^{-1}  ],
         [K^* + C K^{-1} B,  -C K^{-1}]]

``W^c`` is the adjoint for the symmetry ``[[0, -i], [i, 0]]`` on both sides.
The same module carries the D-boundary triples of Pontryagin-type symmetric
operators and the (P)/(L) class checks.
"""

from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from core.errors import (
    ArgumentError,
    DimensionMismatchError,
    NotDBoundaryError,
    PreconditionError,
    SingularFormError,
)
from core.krein import KreinSpace, is_standard_unitary, krein_space, signature
from core.linalg import (
    DEFAULT_TOL,
    Tol,
    apply,
    as_cmatrix,
    column_space,
    null_space,
    subspace_contains,
    subspace_sum,
    zero_subspace,
)
from core.relations import (
    LinearRelation,
    compose,
    difference,
    dom,
    eigenspace,
    from_operator,
    from_subspace,
    inverse,
    is_operator,
    op_sum,
    operator_matrix,
    point_spectrum,
    preimage,
    ran,
    relation_eq,
    spectral_classify,
    SpectralClass,
)
from services.boundary import BoundaryPair, adjoint, boundary_pair, map_codomain, y_matrix
from services.equivalence import push
from services.weyl import SIDE_A, weyl_family

# Half-plane constant for Pontryagin-space symmetric operators of class (LP):
# every lam with |Im lam| > T0_HALFPLANE * ||A P^-|| is a point of regular type.
T0_HALFPLANE = 1.84


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def _imaginary_part(m: np.ndarray) -> np.ndarray:
    return (m - m.conj().T) / 2j


class FLTParams(BaseModel):
    """Parameters of the fractional linear transform.

    Parameters:
        K: Bijection from G0 onto L.
        B: Operator in L.
        C: Operator in G0.
        K_prime: ``K`` of a second triple, if compared.
        B_prime: ``B`` of a second triple.
        C_prime: ``C`` of a second triple.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    K: np.ndarray
    B: np.ndarray
    C: np.ndarray
    K_prime: Optional[np.ndarray] = None
    B_prime: Optional[np.ndarray] = None
    C_prime: Optional[np.ndarray] = None

    @field_validator("K", "B", "C", "K_prime", "B_prime", "C_prime", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        return None if value is None else as_cmatrix(value)

    @model_validator(mode="after")
    def _shapes(self) -> "FLTParams":
        m = self.K.shape[0]
        for name in ("K", "B", "C", "K_prime", "B_prime", "C_prime"):
            value = getattr(self, name)
            if value is not None and value.shape != (m, m):
                raise ValueError(f"{name} must be {m}x{m}, got {value.shape}")
        primed = [self.K_prime is None, self.B_prime is None, self.C_prime is None]
        if any(primed) and not all(primed):
            raise ValueError("the primed parameters come as a triple")
        return self

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    @property
    def has_primed(self) -> bool:
        return self.K_prime is not None

    def primed(self) -> "FLTParams":
        """The second triple of parameters as a parameter set of its own."""
        if not self.has_primed:
            raise PreconditionError("no primed parameters")
        return FLTParams(K=self.K_prime, B=self.B_prime, C=self.C_prime)


class DBTParams(BaseModel):
    """Splitting ``G0 = G1 + G2`` of a D-boundary triple.

    G1 is spanned by the first ``g1_dim`` coordinates of G0.

    Parameters:
        g0_dim: Dimension of G0.
        g1_dim: Dimension of G1, at most ``g0_dim``.
    """

    model_config = ConfigDict(frozen=True)

    g0_dim: int
    g1_dim: int

    @model_validator(mode="after")
    def _nested(self) -> "DBTParams":
        if not 0 <= self.g1_dim <= self.g0_dim:
            raise ValueError(f"G1 of dim {self.g1_dim} does not fit in G0 of dim {self.g0_dim}")
        return self

    @property
    def g2_dim(self) -> int:
        return self.g0_dim - self.g1_dim

    @property
    def g_dim(self) -> int:
        return self.g0_dim + self.g1_dim

    @property
    def E1(self) -> np.ndarray:
        return np.diag([1.0] * self.g1_dim + [0.0] * self.g2_dim).astype(complex)

    @property
    def E2(self) -> np.ndarray:
        return np.diag([0.0] * self.g1_dim + [1.0] * self.g2_dim).astype(complex)

    @property
    def embed(self) -> np.ndarray:
        """Inclusion of G1 into G0 (``g0 x g1``)."""
        return np.eye(self.g0_dim, self.g1_dim, dtype=complex)

    def e_matrix(self) -> np.ndarray:
        """``E(l0, l1) = (E1 l0, i E2 l0 + l1)`` from G0 + G1 to G1 + G0."""
        g0, g1 = self.g0_dim, self.g1_dim
        E = np.zeros((g1 + g0, g0 + g1), dtype=complex)
        E[:g1, :g0] = self.embed.conj().T
        E[g1:, :g0] = 1j * self.E2
        E[g1:, g0:] = self.embed
        return E


def boundary_graph_space(m: int) -> KreinSpace:
    """``C^m + C^m`` with symmetry ``[[0, -iI], [iI, 0]]``."""
    return krein_space(y_matrix(m, m))


# =============================================================================
# The transform W
# =============================================================================


def _inv(K: np.ndarray, name: str = "K") -> np.ndarray:
    if K.size == 0:
        return K.copy()
    try:
        inv = np.linalg.inv(K)
    except np.linalg.LinAlgError as e:
        raise SingularFormError(f"{name} is singular") from e
    if not np.all(np.isfinite(inv)) or np.linalg.cond(K) > 1e12:
        raise SingularFormError(f"{name} is singular at working precision")
    return inv


def build_W(p: FLTParams) -> np.ndarray:
    """The block matrix ``W`` acting from ``L + L`` to ``G0 + G0``."""
    Ki = _inv(p.K)
    return np.block([[Ki @ p.B, -Ki], [p.K.conj().T + p.C @ Ki @ p.B, -p.C @ Ki]])


def adjoint_W(W: np.ndarray) -> np.ndarray:
    """``W^c = Y W^H Y`` for the boundary symmetry ``Y`` on both sides."""
    Y = y_matrix(W.shape[0] // 2, W.shape[0] // 2)
    return Y @ W.conj().T @ Y


def flt_push(obt: BoundaryPair, p: FLTParams, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """``GammaB = W Gdot`` and ``GammaA = (W^c)^{-1} Gdot`` for an ordinary triple ``Gdot``."""
    if obt.g0_dim != p.dim or obt.g1_dim != p.dim:
        raise DimensionMismatchError(f"triple has split ({obt.g0_dim},{obt.g1_dim}), K is {p.dim}x{p.dim}")
    W = build_W(p)
    GammaB = map_codomain(obt.GammaB, W, tol)
    GammaA = map_codomain(obt.GammaB, _inv(adjoint_W(W), "W^c"), tol)
    return boundary_pair(obt.pair, p.dim, p.dim, GammaB, GammaA, tol)


class FLTWeyl(BaseModel):
    """``W(Mdot)`` and, when available, the closed form ``C + K^*(B - Mdot)^{-1} K``."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    image: LinearRelation
    closed_form: Optional[np.ndarray] = None
    distance: Optional[float] = None


def flt_closed_form(p: FLTParams, Mdot: np.ndarray) -> np.ndarray:
    return p.C + p.K.conj().T @ _inv(p.B - Mdot, "B - M") @ p.K


def flt_weyl(p: FLTParams, Mdot: LinearRelation, tol: Tol = DEFAULT_TOL) -> FLTWeyl:
    """Image of a Weyl family under ``W``, compared with the closed form where defined."""
    W = build_W(p)
    image = from_subspace(p.dim, p.dim, apply(W, Mdot.graph, tol))
    if not (is_operator(Mdot, tol) and Mdot.dim == p.dim):
        return FLTWeyl(image=image)
    try:
        closed = flt_closed_form(p, operator_matrix(Mdot, tol))
    except SingularFormError:
        logger.debug("B - M is singular; only the relation image is available")
        return FLTWeyl(image=image)
    _, distance = relation_eq(image, from_operator(closed, tol), tol)
    return FLTWeyl(image=image, closed_form=closed, distance=distance)


def flt_representing_pair(
    p: FLTParams, M_A: LinearRelation, tol: Tol = DEFAULT_TOL
) -> Tuple[np.ndarray, np.ndarray, float]:
    """Representing pair ``(Phi, Psi)`` of ``M_B = W W^c (M_A)``.

    ``Phi = I + L (M_A - C^*)``, ``Psi = C Phi + M_A - C^*`` with
    ``L = K^{-1} (B - B^*) K^{*-1}``.

    Returns:
        ``Phi``, ``Psi`` and the distance between ``{(Phi h, Psi h)}`` and
        ``W W^c (M_A)``.
    """
    Ki = _inv(p.K)
    L = Ki @ (p.B - p.B.conj().T) @ Ki.conj().T
    Ma = operator_matrix(M_A, tol)
    shifted = Ma - p.C.conj().T
    Phi = np.eye(p.dim) + L @ shifted
    Psi = p.C @ Phi + shifted
    W = build_W(p)
    target = from_subspace(p.dim, p.dim, apply(W @ adjoint_W(W), M_A.graph, tol))
    pair = from_subspace(p.dim, p.dim, column_space(np.vstack([Phi, Psi]), tol))
    _, distance = relation_eq(pair, target, tol)
    return Phi, Psi, distance


def x_lambda_identity(p: FLTParams, Mdot: np.ndarray, tol: Tol = DEFAULT_TOL) -> Tuple[float, bool]:
    """Residual of ``B^* - M = (B - M)^* (I - X)`` with ``X = 2i (B - M)^{*-1} Im M``.

    Returns:
        The residual and whether ``X`` is bijective.
    """
    M = as_cmatrix(Mdot, rows=p.dim, cols=p.dim)
    factor = (p.B - M).conj().T
    X = 2j * _inv(factor, "(B - M)^*") @ _imaginary_part(M)
    lhs = p.B.conj().T - M
    rhs = factor @ (np.eye(p.dim) - X)
    residual = float(np.max(np.abs(lhs - rhs))) if p.dim else 0.0
    bijective = p.dim == 0 or float(np.min(np.linalg.svd(X, compute_uv=False))) > tol.residual_atol
    return residual, bijective


# =============================================================================
# Compatibility of two parameter sets
# =============================================================================


def build_V(p: FLTParams) -> np.ndarray:
    """``V = W'^{-1} W`` assembled blockwise from the parameters."""
    if not p.has_primed:
        raise PreconditionError("V needs the primed parameters")
    Ki = _inv(p.K)
    Kpi = _inv(p.K_prime, "K'")
    V2 = Kpi.conj().T @ (p.C_prime - p.C) @ Ki
    V1 = (p.K @ Kpi).conj().T - V2 @ p.B
    ratio = p.K_prime @ Ki
    return np.block([[V1, V2], [p.B_prime @ V1 - ratio @ p.B, ratio + p.B_prime @ V2]])


class SysV(BaseModel):
    """The three compatibility conditions and the standard-unitary test of ``V``."""

    hermitian_difference: bool
    range_condition: bool
    imaginary_parts: bool
    v_standard_unitary: bool

    @property
    def holds(self) -> bool:
        return self.hermitian_difference and self.range_condition and self.imaginary_parts

    @property
    def consistent(self) -> bool:
        return self.holds == self.v_standard_unitary


def check_sysV(p: FLTParams, tol: Tol = DEFAULT_TOL) -> SysV:
    """Evaluate the compatibility system and whether ``V`` is a standard unitary.

    ``D_{C & C'}`` is read as the subspace where ``C`` and ``C'`` agree.
    """
    if not p.has_primed:
        raise PreconditionError("the compatibility system needs the primed parameters")
    diff = p.C_prime - p.C
    scale = max(1.0, float(np.max(np.abs(diff))) if diff.size else 1.0)
    hermitian = p.dim == 0 or float(np.max(np.abs(_imaginary_part(diff)))) <= tol.residual_atol * scale
    agree = column_space(p.K @ null_space(diff, tol), tol)
    range_ok = subspace_contains(agree, column_space(_imaginary_part(p.B), tol), tol)
    ratio = p.K_prime @ _inv(p.K)
    expected = ratio @ _imaginary_part(p.B) @ ratio.conj().T
    im_scale = max(1.0, float(np.max(np.abs(expected))) if expected.size else 1.0)
    im_ok = p.dim == 0 or float(np.max(np.abs(_imaginary_part(p.B_prime) - expected))) <= tol.residual_atol * im_scale
    space = boundary_graph_space(p.dim)
    st1 = is_standard_unitary(build_V(p), space, space, tol)
    return SysV(hermitian_difference=hermitian, range_condition=range_ok, imaginary_parts=im_ok, v_standard_unitary=st1)


def st1_equiv_check(p: FLTParams, tol: Tol = DEFAULT_TOL) -> bool:
    """``V`` is a standard unitary exactly when the compatibility system holds."""
    return check_sysV(p, tol).consistent


def theta_transform(p: FLTParams, theta: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``theta' = B' + K' [Re(C' - C) + K^* (theta - B)^{-1} K]^{-1} K'^*``."""
    if not p.has_primed:
        raise PreconditionError("theta' needs the primed parameters")
    Kop, Kstar = from_operator(p.K, tol), from_operator(p.K.conj().T, tol)
    inner = compose(Kstar, compose(inverse(difference(theta, from_operator(p.B, tol), tol)), Kop, tol), tol)
    bracket = op_sum(from_operator(_hermitian_part(p.C_prime - p.C), tol), inner, tol)
    middle = compose(from_operator(p.K_prime, tol), compose(inverse(bracket), from_operator(p.K_prime.conj().T, tol), tol), tol)
    return op_sum(from_operator(p.B_prime, tol), middle, tol)


def theta_by_V(p: FLTParams, theta: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``V(theta)``, which matches ``theta_transform`` when ``C' - C`` is Hermitian."""
    return from_subspace(p.dim, p.dim, apply(build_V(p), theta.graph, tol))


def kernel_equivalence(
    obt: BoundaryPair, obt_prime: BoundaryPair, p: FLTParams, U, tol: Tol = DEFAULT_TOL
) -> dict:
    """Compare kernels of the two ordinary triples after transport by ``U``.

    Returns:
        ``a0``: whether ``U~ Ker(Gdot_1 - B Gdot_0) = Ker(Gdot'_1 - B' Gdot'_0)``;
        ``kernel0``: whether ``U~ Ker Gdot_0 = Ker Gdot'_0``;
        ``c_equal``: whether ``C = C'``.
    """
    if not p.has_primed:
        raise PreconditionError("kernel comparison needs the primed parameters")
    big = np.kron(np.eye(2), np.asarray(U, dtype=complex))
    m = p.dim

    def kernel(gamma: LinearRelation, B: np.ndarray):
        graph_B = column_space(np.vstack([np.eye(m), B]), tol)
        return preimage(gamma, graph_B, tol)

    def kernel0(gamma: LinearRelation):
        return preimage(gamma, column_space(np.vstack([np.zeros((m, m)), np.eye(m)]), tol), tol)

    a0 = relation_eq(
        from_subspace(obt.n, obt.n, apply(big, kernel(obt.GammaB, p.B), tol)),
        from_subspace(obt.n, obt.n, kernel(obt_prime.GammaB, p.B_prime)),
        tol,
    )[0]
    k0 = relation_eq(
        from_subspace(obt.n, obt.n, apply(big, kernel0(obt.GammaB), tol)),
        from_subspace(obt.n, obt.n, kernel0(obt_prime.GammaB)),
        tol,
    )[0]
    c_equal = bool(np.max(np.abs(p.C - p.C_prime), initial=0.0) <= tol.residual_atol)
    return {"a0": a0, "kernel0": k0, "c_equal": c_equal}


def matched_triple(obt: BoundaryPair, p: FLTParams, U, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """Ordinary triple ``Gdot' = V Gdot U~^{-1}`` whose primed transform matches ``flt_push(obt, p)``.

    ``W' Gdot' = W Gdot U~^{-1}``, so both transformed triples share their
    Weyl family.

    Raises:
        PreconditionError: If the primed parameters are missing.
    """
    pushed = push(obt, U, tol=tol)
    Gamma = map_codomain(pushed.GammaB, build_V(p), tol)
    return boundary_pair(pushed.pair, p.dim, p.dim, Gamma, Gamma, tol)


# =============================================================================
# The ring triple
# =============================================================================


def ring_W(p: FLTParams) -> np.ndarray:
    """``[[-K^{-1} Re B, K^{-1}], [-K^*, 0]]``."""
    Ki = _inv(p.K)
    return np.block([[-Ki @ _hermitian_part(p.B), Ki], [-p.K.conj().T, np.zeros((p.dim, p.dim))]])


def ring_triple(obt: BoundaryPair, p: FLTParams, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """Ordinary triple with ``G_0 = K^{-1}(Gdot_1 - Re B Gdot_0)`` and ``G_1 = -K^* Gdot_0``."""
    Gamma = map_codomain(obt.GammaB, ring_W(p), tol)
    return boundary_pair(obt.pair, p.dim, p.dim, Gamma, Gamma, tol)


class RingSample(BaseModel):
    lam: complex
    skipped: bool = False
    distance: Optional[float] = None
    note: str = ""


def ring_triple_weyl(obt: BoundaryPair, p: FLTParams, grid: List[complex], tol: Tol = DEFAULT_TOL) -> List[RingSample]:
    """Weyl function of the ring triple against ``K^* (Re B - Mdot)^{-1} K``."""
    ring = ring_triple(obt, p, tol)
    samples = []
    for lam in grid:
        Mdot = weyl_family(obt, lam, tol=tol)
        if not (is_operator(Mdot, tol) and Mdot.dim == p.dim):
            samples.append(RingSample(lam=lam, skipped=True, note="Mdot is not an operator"))
            continue
        try:
            core = _inv(_hermitian_part(p.B) - operator_matrix(Mdot, tol), "Re B - M")
        except SingularFormError as e:
            logger.warning(f"ring triple: lam={lam} skipped ({e})")
            samples.append(RingSample(lam=lam, skipped=True, note=str(e)))
            continue
        closed = p.K.conj().T @ core @ p.K
        _, distance = relation_eq(weyl_family(ring, lam, tol=tol), from_operator(closed, tol), tol)
        samples.append(RingSample(lam=lam, distance=distance))
    return samples


# =============================================================================
# D-boundary triples
# =============================================================================


def dbt_build(bp: BoundaryPair, d: DBTParams, tol: Tol = DEFAULT_TOL) -> BoundaryPair:
    """Check that ``GammaA = E GammaB`` and return the pair unchanged.

    Raises:
        NotDBoundaryError: If the boundary relations are not linked by ``E``.
    """
    if (bp.g0_dim, bp.g1_dim) != (d.g0_dim, d.g1_dim):
        raise DimensionMismatchError(f"split ({bp.g0_dim},{bp.g1_dim}) differs from ({d.g0_dim},{d.g1_dim})")
    ok, distance = relation_eq(bp.GammaA, map_codomain(bp.GammaB, d.e_matrix(), tol), tol)
    if not ok:
        logger.error(f"GammaA differs from E GammaB by {distance:.3e}")
        raise NotDBoundaryError(f"GammaA != E GammaB (distance {distance:.3e})")
    return bp


class DBTRepresentation(BaseModel):
    """Representing pair of ``M_B(lam)`` built from ``M_A(lam)``.

    Parameters:
        lam: The spectral parameter.
        Phi: ``I_1 - i E2 M_A(lam)`` when ``M_A(lam)`` is an operator.
        Psi: ``P1 M_A(lam)`` (restriction to G1) when ``M_A(lam)`` is an operator.
        pair_distance: Distance between ``{(Phi h, Psi h)}`` and ``M_B(lam)``.
        closed_form_distance: Distance between ``E1 (M_A^{-1} - i E2)^{-1}`` and ``M_B(lam)``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    lam: complex
    Phi: Optional[np.ndarray] = None
    Psi: Optional[np.ndarray] = None
    pair_distance: float
    closed_form_distance: float


def dbt_representing_pair(bp: BoundaryPair, d: DBTParams, lam: complex, tol: Tol = DEFAULT_TOL) -> DBTRepresentation:
    M_A = weyl_family(bp, lam, SIDE_A, tol)
    M_B = weyl_family(bp, lam, tol=tol)
    g0, g1 = d.g0_dim, d.g1_dim
    # (h, k) in M_A  ->  (h - i E2 k, E1 k) in G0 x G1
    mixer = np.zeros((g0 + g1, g1 + g0), dtype=complex)
    mixer[:g0, :g1] = d.embed
    mixer[:g0, g1:] = -1j * d.E2
    mixer[g0:, g1:] = d.embed.conj().T
    pair = from_subspace(g0, g1, apply(mixer, M_A.graph, tol))
    _, pair_distance = relation_eq(pair, M_B, tol)

    shifted = difference(compose(from_operator(d.embed, tol), inverse(M_A), tol), from_operator(1j * d.E2, tol), tol)
    closed = compose(from_operator(d.embed.conj().T, tol), inverse(shifted), tol)
    _, closed_distance = relation_eq(closed, M_B, tol)

    Phi = Psi = None
    if is_operator(M_A, tol) and M_A.dim == g1:
        Ma = operator_matrix(M_A, tol)
        Phi = d.embed - 1j * d.E2 @ Ma
        Psi = d.embed.conj().T @ Ma
    return DBTRepresentation(
        lam=complex(lam), Phi=Phi, Psi=Psi, pair_distance=pair_distance, closed_form_distance=closed_distance
    )


# =============================================================================
# Pontryagin-space classes
# =============================================================================


class LPReport(BaseModel):
    """Class membership of a symmetric operator in a Pontryagin space.

    Parameters:
        kappa: Number of negative squares.
        in_P: ``dom A + ran A`` fills the space.
        in_L: A maximal negative subspace lies in ``dom A``.
        in_LP: Both of the above.
        halfplane_bound: ``T0_HALFPLANE * ||A P^-||`` when ``in_L``.
        simple: Eigenspaces of ``A^c`` beyond the bound span the space.
    """

    kappa: int
    in_P: bool
    in_L: bool
    in_LP: bool
    halfplane_bound: Optional[float] = None
    simple: Optional[bool] = None


def negative_subspace_in_domain(A: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> Optional[np.ndarray]:
    """Basis of a maximal negative subspace inside ``dom A``, or None.

    The metric restricted to ``dom A`` has as many negative directions as
    the largest negative subspace of the domain, so the eigenvectors of the
    restricted Gram matrix decide the question.
    """
    _, kappa = signature(space, tol)
    D = dom(A, tol).basis
    if kappa == 0:
        return np.zeros((space.dim, 0), dtype=complex)
    if D.shape[1] == 0:
        return None
    gram = D.conj().T @ space.J @ D
    w, v = np.linalg.eigh(_hermitian_part(gram))
    negative = np.flatnonzero(w < -tol.rank_rtol * max(1.0, float(np.max(np.abs(w)))))
    if len(negative) < kappa:
        return None
    return D @ v[:, negative[:kappa]]


def j_projection(N: np.ndarray, space: KreinSpace) -> np.ndarray:
    """``P = N (N^H J N)^{-1} N^H J``, the J-orthogonal projection onto ``span N``."""
    if N.shape[1] == 0:
        return np.zeros((space.dim, space.dim), dtype=complex)
    JN = space.J @ N
    return N @ np.linalg.solve(N.conj().T @ JN, JN.conj().T)


def halfplane_grid(bound: float, points: int = 3) -> List[complex]:
    """Conjugate-closed points strictly beyond ``|Im lam| = bound``."""
    grid = []
    for k in range(1, points + 1):
        im = bound + k
        for re in (0.0, float(k), -float(k)):
            grid.extend([complex(re, im), complex(re, -im)])
    return grid


def generic_grid(count: int, centre: complex = 0.3, radius: float = 1.3) -> List[complex]:
    """``count`` conjugate-closed points on a circle, none of them real."""
    pairs = max(1, count // 2)
    grid = []
    for k in range(pairs):
        lam = centre + radius * np.exp(1j * np.pi * (k + 0.5) / pairs)
        grid.extend([complex(lam), complex(np.conj(lam))])
    return grid


def _grid_rows(n: int) -> int:
    # six points per row; one more point than the space dimension
    return max(3, -(-(n + 1) // 6))


def defect_span(A: LinearRelation, space: KreinSpace, grid: List[complex], tol: Tol = DEFAULT_TOL):
    """Span of ``Ker(A^c - lam)`` over the grid."""
    Ac = adjoint(A, space, tol)
    total = zero_subspace(space.dim)
    for lam in grid:
        total = subspace_sum(total, eigenspace(Ac, lam, tol), tol)
    return total


def lp_analysis(A: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> LPReport:
    """(P), (L) and (LP) membership, the half-plane bound and simplicity.

    Raises:
        ArgumentError: If ``A`` is multivalued.
    """
    if not is_operator(A, tol):
        raise ArgumentError("the (LP) analysis needs an operator")
    _, kappa = signature(space, tol)
    in_P = subspace_sum(dom(A, tol), ran(A, tol), tol).is_full()
    negative = negative_subspace_in_domain(A, space, tol)
    in_L = negative is not None
    bound = None
    simple = None
    if in_L:
        P_minus = j_projection(negative, space)
        A_matrix = operator_matrix(A, tol, partial=True)
        bound = T0_HALFPLANE * float(np.linalg.norm(A_matrix @ P_minus, 2)) if space.dim else 0.0
        simple = defect_span(A, space, halfplane_grid(bound, _grid_rows(space.dim)), tol).is_full()
    logger.debug(f"lp analysis: kappa={kappa} P={in_P} L={in_L} bound={bound}")
    return LPReport(kappa=kappa, in_P=in_P, in_L=in_L, in_LP=in_P and in_L, halfplane_bound=bound, simple=simple)


def simplicity_comparison(A: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> dict:
    """Defect spans over a half-plane grid and over a generic grid of the same size, both against the space."""
    report = lp_analysis(A, space, tol)
    bound = report.halfplane_bound if report.halfplane_bound is not None else 0.0
    high_grid = halfplane_grid(bound, _grid_rows(space.dim))
    high = defect_span(A, space, high_grid, tol).is_full()
    generic = defect_span(A, space, generic_grid(len(high_grid)), tol).is_full()
    return {"high": high, "generic": generic, "agree": high == generic}


def real_regularity_check(
    A: LinearRelation, space: KreinSpace, points: Optional[List[float]] = None, tol: Tol = DEFAULT_TOL
) -> dict:
    """Real points of regular type are resolvent points of a relation with an n-dimensional graph.

    Samples the given real points and the midpoints between consecutive
    real eigenvalues.

    Returns:
        ``checked`` (number of points) and ``violations`` (real points of
        regular type outside the resolvent set).
    """
    spectrum = point_spectrum(A, tol)
    real = np.sort(spectrum[np.abs(spectrum.imag) <= tol.residual_atol].real) if spectrum.size else np.zeros(0)
    samples = list(points) if points is not None else [-3.0, -0.5, 0.25, 1.5, 4.0]
    samples += [(a + b) / 2 for a, b in zip(real[:-1], real[1:]) if b - a > tol.residual_atol]
    violations = []
    for x in samples:
        point = spectral_classify(A, space, x, tol)
        if point.regular_type and point.spectral_class != SpectralClass.RESOLVENT:
            violations.append(float(x))
    return {"checked": len(samples), "violations": violations}
