#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Coupling a boundary pair for ``(A, B)`` into one ordinary-type triple.

``T = diag(A, B)`` is a relation in the hat space over H, so its graph lives
in the K space. The boundary relation of the coupled triple is

    Gamma = {(((x, y), (x', y')), ((l0, h1), (h0, l1))) :
             ((x, x'), (l0, l1)) in GammaB,  ((y, y'), (h1, h0)) in GammaA}

with values in the graph space over the Hilbert space G0 + G1.

Coordinates are kept in two orders. The split order stacks a graph vector
of ``GammaB`` on one of ``GammaA``: ``(x, x', l0, l1, y, y', h1, h0)``. The
coupled order is ``(x, y, x', y', l0, h1, h0, l1)``. All conversions go
through ``interleave`` and ``deinterleave``.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict

from core.errors import DimensionMismatchError
from core.krein import HatSpace, KreinSpace, krein_space, make_graph_space, make_hat_space
from core.linalg import DEFAULT_TOL, Subspace, Tol, column_space, subspace_eq
from core.relations import (
    LinearRelation,
    block_diagonal,
    compose,
    dom,
    eigenspace,
    from_operator,
    from_subspace,
    hilbert_adjoint,
    intersect,
    inverse,
    is_neutral,
    is_symmetric,
    ker,
    krein_adjoint,
    mul,
    ran,
    relation_eq,
    scale,
    spectral_classify,
)
from services.boundary import (
    BoundaryPair,
    DualPair,
    LadderFlags,
    adjoint,
    boundary_pair,
    classify,
    dual_pair,
    is_ubp,
    sharp_A,
    sharp_B,
    y_matrix,
)
from services.weyl import SIDE_A, SIDE_B, weyl_family

# Rungs compared between the coupled triple and the split pair.
RUNGS = ("ibp", "ubp", "AB_gen", "q_bt", "ES_gen", "S_gen", "B_gen", "bt")


# =============================================================================
# Index bookkeeping
# =============================================================================


def _blocks(sizes: List[Tuple[str, int]]) -> Dict[str, np.ndarray]:
    out, start = {}, 0
    for name, size in sizes:
        out[name] = np.arange(start, start + size)
        start += size
    return out


def domain_order(n: int) -> np.ndarray:
    """Split ``(x, x', y, y')`` to coupled ``(x, y, x', y')``."""
    b = _blocks([("x", n), ("xp", n), ("y", n), ("yp", n)])
    return np.concatenate([b["x"], b["y"], b["xp"], b["yp"]])


def boundary_order(g0_dim: int, g1_dim: int) -> np.ndarray:
    """Split ``(l0, l1, h1, h0)`` to coupled ``(l0, h1, h0, l1)``."""
    b = _blocks([("l0", g0_dim), ("l1", g1_dim), ("h1", g1_dim), ("h0", g0_dim)])
    return np.concatenate([b["l0"], b["h1"], b["h0"], b["l1"]])


def interleave_order(n: int, g0_dim: int, g1_dim: int) -> np.ndarray:
    """Row order taking split ``(x, x', l0, l1, y, y', h1, h0)`` to coupled order."""
    b = _blocks(
        [("x", n), ("xp", n), ("l0", g0_dim), ("l1", g1_dim), ("y", n), ("yp", n), ("h1", g1_dim), ("h0", g0_dim)]
    )
    return np.concatenate([b[k] for k in ("x", "y", "xp", "yp", "l0", "h1", "h0", "l1")])


def interleave(v, n: int, g0_dim: int, g1_dim: int) -> np.ndarray:
    """Rows of ``v`` from split order to coupled order."""
    return np.asarray(v)[interleave_order(n, g0_dim, g1_dim)]


def deinterleave(v, n: int, g0_dim: int, g1_dim: int) -> np.ndarray:
    """Inverse of ``interleave``."""
    arr = np.asarray(v)
    out = np.empty_like(arr)
    out[interleave_order(n, g0_dim, g1_dim)] = arr
    return out


def _product(a: np.ndarray, b: np.ndarray, order: np.ndarray, tol: Tol) -> Subspace:
    """``span a x span b`` with rows rearranged by ``order``."""
    stacked = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    stacked[: a.shape[0], : a.shape[1]] = a
    stacked[a.shape[0] :, a.shape[1] :] = b
    return column_space(stacked[order], tol, scale=1.0)


def couple_relations(
    gamma_b: LinearRelation, gamma_a: LinearRelation, n: int, g0_dim: int, g1_dim: int, tol: Tol = DEFAULT_TOL
) -> LinearRelation:
    """The coupled relation built from a ``GammaB``-shaped and a ``GammaA``-shaped relation."""
    g = g0_dim + g1_dim
    for r in (gamma_b, gamma_a):
        if (r.dom_dim, r.codom_dim) != (2 * n, g):
            raise DimensionMismatchError(f"{r!r} does not map C^{2 * n} to C^{g}")
    graph = _product(gamma_b.graph.basis, gamma_a.graph.basis, interleave_order(n, g0_dim, g1_dim), tol)
    return from_subspace(4 * n, 2 * g, graph)


# =============================================================================
# The coupled triple
# =============================================================================


class CoupledTriple(BaseModel):
    """``T = diag(A, B)`` with the coupled boundary relation.

    Parameters:
        source: The boundary pair for ``(A, B)`` that was coupled.
        big: The coupled triple as a boundary pair for ``(T, T)`` in the hat space,
            split ``(g, g)`` with ``g = g0 + g1``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: BoundaryPair
    big: BoundaryPair

    @property
    def hat(self) -> HatSpace:
        return self.big.H

    @property
    def K_space(self) -> KreinSpace:
        return make_graph_space(self.hat)

    @property
    def G_space(self) -> KreinSpace:
        """Graph space over the Hilbert space G0 + G1."""
        g = self.source.g_dim
        return krein_space(y_matrix(g, g))

    @property
    def T(self) -> LinearRelation:
        return self.big.pair.A

    @property
    def Gamma(self) -> LinearRelation:
        return self.big.GammaB


def couple(bp: BoundaryPair, tol: Tol = DEFAULT_TOL) -> CoupledTriple:
    """Couple an isometric boundary pair into one triple for ``T^c = diag(B^c, A^c)``.

    Raises:
        NotIsometricError: If the coupled relation fails the Green identity,
            which happens exactly when ``bp`` does.
    """
    n, g0, g1 = bp.n, bp.g0_dim, bp.g1_dim
    hat = make_hat_space(bp.H)
    T = block_diagonal(bp.pair.A, bp.pair.B, tol)
    Gamma = couple_relations(bp.GammaB, bp.GammaA, n, g0, g1, tol)
    big = boundary_pair(dual_pair(hat, T, T, tol), g0 + g1, g0 + g1, Gamma, Gamma, tol)
    logger.debug(f"coupled: n={n} split=({g0},{g1}) dim T={T.dim} dim Gamma={Gamma.dim}")
    return CoupledTriple(source=bp, big=big)


def decouple(ct: CoupledTriple, tol: Tol = DEFAULT_TOL) -> Tuple[LinearRelation, LinearRelation]:
    """Recover ``(GammaB, GammaA)`` by slicing the coupled graph."""
    n, g0, g1 = ct.source.n, ct.source.g0_dim, ct.source.g1_dim
    cut = 2 * n + g0 + g1
    split = deinterleave(ct.Gamma.graph.basis, n, g0, g1)
    gamma_b = from_subspace(2 * n, g0 + g1, column_space(split[:cut], tol))
    gamma_a = from_subspace(2 * n, g0 + g1, column_space(split[cut:], tol))
    return gamma_b, gamma_a


class BlockFormulas(BaseModel):
    """Distances between the parts of the coupled relation and their block assemblies."""

    domain: float
    kernel: float
    range: float
    mul: float

    def holds(self, tol: Tol = DEFAULT_TOL) -> bool:
        return max(self.domain, self.kernel, self.range, self.mul) <= tol.angle_atol


def block_formulas(ct: CoupledTriple, tol: Tol = DEFAULT_TOL) -> BlockFormulas:
    """Domain and kernel are diagonal; range and multivalued part are antidiagonal."""
    bp = ct.source
    d_order = domain_order(bp.n)
    b_order = boundary_order(bp.g0_dim, bp.g1_dim)

    def distance(part, order) -> float:
        expected = _product(part(bp.GammaB, tol).basis, part(bp.GammaA, tol).basis, order, tol)
        return subspace_eq(part(ct.Gamma, tol), expected, tol)[1]

    return BlockFormulas(
        domain=distance(dom, d_order),
        kernel=distance(ker, d_order),
        range=distance(ran, b_order),
        mul=distance(mul, b_order),
    )


def t_neutrality(ct: CoupledTriple) -> Tuple[float, float]:
    """Largest Gram entry of ``T`` in the K metric and in the hat metric over H_Gamma.

    The second reads a graph element ``((x, y), (x', y'))`` of ``T`` as the
    pair ``((x, x'), (y, y'))`` of elements of H_Gamma with
    ``[(a, b), (c, d)] = [a, d] + [b, c]``.
    """
    T = ct.T
    basis = T.graph.basis
    if basis.shape[1] == 0:
        return 0.0, 0.0
    k_gram = basis.conj().T @ ct.K_space.J @ basis
    split = np.empty_like(basis)
    split[domain_order(ct.source.n)] = basis
    J = make_hat_space(make_graph_space(ct.source.H)).J
    h_gram = split.conj().T @ J @ split
    return float(np.max(np.abs(k_gram))), float(np.max(np.abs(h_gram)))


def t_adjoint_distance(ct: CoupledTriple, tol: Tol = DEFAULT_TOL) -> float:
    """Distance between ``T^c`` and ``diag(B^c, A^c)``."""
    H = ct.source.H
    expected = block_diagonal(adjoint(ct.source.pair.B, H, tol), adjoint(ct.source.pair.A, H, tol), tol)
    return relation_eq(adjoint(ct.T, ct.hat, tol), expected, tol)[1]


# =============================================================================
# Weyl families and defects
# =============================================================================


class CoupledWeyl(BaseModel):
    """Weyl family of the coupled triple at ``lam``.

    Parameters:
        lam: The spectral parameter.
        M: ``Gamma(lam I)``, a relation in G0 + G1.
        block_distance: Distance to the antidiagonal assembly of ``M_B(lam)`` and ``M_A(lam)``.
        link_expected: The source pair is unitary and ``lam`` is of regular type for A and B.
        link_distance: Distance between ``M_A(lam)`` and ``M_B(conj lam)^*``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    lam: complex
    M: LinearRelation
    block_distance: float
    link_expected: bool
    link_distance: float


def coupled_weyl(ct: CoupledTriple, lam: complex, tol: Tol = DEFAULT_TOL) -> CoupledWeyl:
    bp = ct.source
    g = bp.g_dim
    M = weyl_family(ct.big, lam, SIDE_B, tol)
    m_b = weyl_family(bp, lam, SIDE_B, tol)
    m_a = weyl_family(bp, lam, SIDE_A, tol)
    expected = from_subspace(g, g, _product(m_b.graph.basis, m_a.graph.basis, boundary_order(bp.g0_dim, bp.g1_dim), tol))
    _, block_distance = relation_eq(M, expected, tol)

    link = hilbert_adjoint(weyl_family(bp, np.conj(lam), SIDE_B, tol), tol)
    _, link_distance = relation_eq(m_a, link, tol)
    regular = all(
        spectral_classify(r, bp.H, lam, tol).regular_type for r in (bp.pair.A, bp.pair.B)
    )
    return CoupledWeyl(
        lam=complex(lam),
        M=M,
        block_distance=block_distance,
        link_expected=regular and is_ubp(bp, tol),
        link_distance=link_distance,
    )


class DefectFormula(BaseModel):
    """``Ker(J^ T^c -+ i)`` computed directly and as ``+-i((J A^c)^{-1} & -J B^c)``."""

    plus_distance: float
    minus_distance: float
    plus_dim: int
    minus_dim: int

    @property
    def dims_equal(self) -> bool:
        return self.plus_dim == self.minus_dim


def defect_formula(pair: DualPair, tol: Tol = DEFAULT_TOL) -> DefectFormula:
    H = pair.H
    hat = make_hat_space(H)
    T = block_diagonal(pair.A, pair.B, tol)
    JT = compose(from_operator(hat.J, tol), adjoint(T, hat, tol), tol)
    Jop = from_operator(H.J, tol)
    core = intersect(
        inverse(compose(Jop, adjoint(pair.A, H, tol), tol)),
        scale(compose(Jop, adjoint(pair.B, H, tol), tol), -1.0, tol),
        tol,
    )
    distances, dims = [], []
    for sign in (1, -1):
        direct = eigenspace(JT, sign * 1j, tol)
        formula = scale(core, sign * 1j, tol).graph
        distances.append(subspace_eq(direct, formula, tol)[1])
        dims.append(direct.dim)
    return DefectFormula(
        plus_distance=distances[0], minus_distance=distances[1], plus_dim=dims[0], minus_dim=dims[1]
    )


# =============================================================================
# Classification and the sharp relations
# =============================================================================


class CoupledLadder(BaseModel):
    coupled: LadderFlags
    split: LadderFlags
    mismatched: List[str]

    @property
    def agree(self) -> bool:
        return not self.mismatched


def classify_coupled(ct: CoupledTriple, tol: Tol = DEFAULT_TOL) -> CoupledLadder:
    """Classify both sides rung by rung."""
    coupled = classify(ct.big, tol)
    split = classify(ct.source, tol)
    mismatched = [r for r in RUNGS if getattr(coupled, r) != getattr(split, r)]
    if mismatched:
        logger.warning(f"coupled and split ladders differ on {mismatched}")
    return CoupledLadder(coupled=coupled, split=split, mismatched=mismatched)


def sharp_shape_check(ct: CoupledTriple, tol: Tol = DEFAULT_TOL) -> float:
    """Distance between ``(Gamma^c)^{-1}`` and the coupling of ``(GammaA_#, GammaB_#)``."""
    bp = ct.source
    lhs = inverse(krein_adjoint(ct.Gamma, ct.K_space, ct.G_space, tol))
    rhs = couple_relations(sharp_A(bp, tol), sharp_B(bp, tol), bp.n, bp.g0_dim, bp.g1_dim, tol)
    return relation_eq(lhs, rhs, tol)[1]


def coupled_checks(ct: CoupledTriple, grid: Optional[List[complex]] = None, tol: Tol = DEFAULT_TOL) -> dict:
    """All structural checks of a coupled triple in one record."""
    gamma_b, gamma_a = decouple(ct, tol)
    k_res, h_res = t_neutrality(ct)
    out = {
        "decouple_B": relation_eq(gamma_b, ct.source.GammaB, tol)[1],
        "decouple_A": relation_eq(gamma_a, ct.source.GammaA, tol)[1],
        "blocks": block_formulas(ct, tol).model_dump(),
        "t_symmetric": is_symmetric(ct.T, ct.hat, tol) and is_neutral(ct.T, ct.hat, tol),
        "t_neutral_K": k_res,
        "t_neutral_H": h_res,
        "t_adjoint": t_adjoint_distance(ct, tol),
        "sharp_shape": sharp_shape_check(ct, tol),
        "ladder_agree": classify_coupled(ct, tol).agree,
    }
    if grid:
        out["weyl"] = [coupled_weyl(ct, lam, tol).model_dump(exclude={"M"}) for lam in grid]
    return out
