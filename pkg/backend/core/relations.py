#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Linear relations between finite-dimensional spaces.

A relation from C^n to C^m is a subspace of C^(n+m); pairs ``(x, y)`` are
stacked with ``x`` on top. Every operation reduces to null spaces of stacked
blocks of orthonormal bases, so all of them inherit the rank rule of
:mod:`core.linalg`.
"""

from enum import Enum
from typing import Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import linalg as sla

from core.errors import DimensionMismatchError, NotSymmetricError, PreconditionError
from core.krein import KreinSpace, hilbert_space, make_graph_space
from core.linalg import (
    DEFAULT_TOL,
    Subspace,
    Tol,
    as_cmatrix,
    column_space,
    containment_residual,
    full_subspace,
    null_space,
    subspace_eq,
    subspace_intersect,
    subspace_sum,
    zero_subspace,
)


class LinearRelation(BaseModel):
    """A relation from C^dom_dim to C^codom_dim.

    Parameters:
        dom_dim: Dimension of the departure space.
        codom_dim: Dimension of the arrival space.
        graph: Subspace of C^(dom_dim + codom_dim) holding the pairs.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dom_dim: int
    codom_dim: int
    graph: Subspace

    @model_validator(mode="after")
    def _graph_fits(self) -> "LinearRelation":
        if self.graph.ambient_dim != self.dom_dim + self.codom_dim:
            raise ValueError(
                f"graph lives in C^{self.graph.ambient_dim}, "
                f"expected C^{self.dom_dim + self.codom_dim}"
            )
        return self

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def top(self) -> np.ndarray:
        return self.graph.basis[: self.dom_dim]

    @property
    def bottom(self) -> np.ndarray:
        return self.graph.basis[self.dom_dim :]

    def __repr__(self) -> str:
        return f"LinearRelation({self.dom_dim}->{self.codom_dim}, dim={self.dim})"


# =============================================================================
# Constructors
# =============================================================================


def from_subspace(dom_dim: int, codom_dim: int, s: Subspace) -> LinearRelation:
    return LinearRelation(dom_dim=dom_dim, codom_dim=codom_dim, graph=s)


def from_pairs(X, Y, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """Relation spanned by the column pairs ``(X[:, j], Y[:, j])``."""
    xs, ys = as_cmatrix(X), as_cmatrix(Y)
    if xs.shape[1] != ys.shape[1]:
        raise DimensionMismatchError("X and Y need the same number of columns")
    return LinearRelation(
        dom_dim=xs.shape[0], codom_dim=ys.shape[0], graph=column_space(np.vstack([xs, ys]), tol)
    )


def from_operator(T, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """Graph of the matrix ``T`` (everywhere defined operator)."""
    m = as_cmatrix(T)
    return from_pairs(np.eye(m.shape[1]), m, tol)


def identity(n: int) -> LinearRelation:
    return from_operator(np.eye(n))


def scalar(n: int, lam: complex) -> LinearRelation:
    """Graph of ``lam * I`` on C^n."""
    return from_operator(lam * np.eye(n))


def zero_relation(n: int, m: int) -> LinearRelation:
    """The relation {(0, 0)}."""
    return LinearRelation(dom_dim=n, codom_dim=m, graph=zero_subspace(n + m))


def full_relation(n: int, m: int) -> LinearRelation:
    return LinearRelation(dom_dim=n, codom_dim=m, graph=full_subspace(n + m))


def product(dom: Subspace, ran: Subspace, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """The relation ``dom x ran``."""
    n, m = dom.ambient_dim, ran.ambient_dim
    basis = np.zeros((n + m, dom.dim + ran.dim), dtype=complex)
    basis[:n, : dom.dim] = dom.basis
    basis[n:, dom.dim :] = ran.basis
    return LinearRelation(dom_dim=n, codom_dim=m, graph=column_space(basis, tol, scale=1.0))


# =============================================================================
# Domains, ranges, kernels, multivalued parts
# =============================================================================


def dom(r: LinearRelation, tol: Tol = DEFAULT_TOL) -> Subspace:
    return column_space(r.top, tol, scale=1.0)


def ran(r: LinearRelation, tol: Tol = DEFAULT_TOL) -> Subspace:
    return column_space(r.bottom, tol, scale=1.0)


def ker(r: LinearRelation, tol: Tol = DEFAULT_TOL) -> Subspace:
    """``{x : (x, 0) in r}``."""
    if r.dim == 0:
        return zero_subspace(r.dom_dim)
    coeffs = null_space(r.bottom, tol, scale=1.0)
    return column_space(r.top @ coeffs, tol, scale=1.0)


def mul(r: LinearRelation, tol: Tol = DEFAULT_TOL) -> Subspace:
    """Multivalued part ``{y : (0, y) in r}``."""
    if r.dim == 0:
        return zero_subspace(r.codom_dim)
    coeffs = null_space(r.top, tol, scale=1.0)
    return column_space(r.bottom @ coeffs, tol, scale=1.0)


def is_operator(r: LinearRelation, tol: Tol = DEFAULT_TOL) -> bool:
    return mul(r, tol).is_zero()


def operator_matrix(r: LinearRelation, tol: Tol = DEFAULT_TOL, partial: bool = False) -> np.ndarray:
    """Matrix of an operator relation.

    Args:
        r: The relation; its multivalued part must be trivial.
        tol: Tolerances.
        partial: Allow a domain smaller than the whole space; the returned
            matrix then vanishes on the orthogonal complement of the domain.

    Returns:
        A ``codom_dim x dom_dim`` matrix ``M`` with ``r = graph(M|dom r)``.
    """
    if not is_operator(r, tol):
        raise PreconditionError("relation has a nontrivial multivalued part")
    if r.dom_dim == 0:
        return np.zeros((r.codom_dim, 0), dtype=complex)
    if not partial:
        if r.dim != r.dom_dim:
            raise PreconditionError("operator is not everywhere defined")
        return np.linalg.solve(r.top.T, r.bottom.T).T
    return r.bottom @ np.linalg.pinv(r.top)


# =============================================================================
# Algebra
# =============================================================================


def inverse(r: LinearRelation) -> LinearRelation:
    basis = np.vstack([r.bottom, r.top])
    return LinearRelation(
        dom_dim=r.codom_dim,
        codom_dim=r.dom_dim,
        graph=Subspace(ambient_dim=r.graph.ambient_dim, basis=basis),
    )


def compose(s: LinearRelation, r: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``s r = {(x, z) : (x, y) in r, (y, z) in s for some y}``."""
    if r.codom_dim != s.dom_dim:
        raise DimensionMismatchError(
            f"cannot compose {s!r} after {r!r}: {r.codom_dim} != {s.dom_dim}"
        )
    if r.dim == 0:
        return product(zero_subspace(r.dom_dim), mul(s, tol), tol)
    coeffs = null_space(np.hstack([r.bottom, -s.top]), tol, scale=1.0)
    c, d = coeffs[: r.dim], coeffs[r.dim :]
    stacked = np.vstack([r.top @ c, s.bottom @ d])
    return LinearRelation(
        dom_dim=r.dom_dim, codom_dim=s.codom_dim, graph=column_space(stacked, tol, scale=1.0)
    )


def op_sum(r: LinearRelation, s: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """Operator-like sum ``{(x, y + y') : (x, y) in r, (x, y') in s}``."""
    if (r.dom_dim, r.codom_dim) != (s.dom_dim, s.codom_dim):
        raise DimensionMismatchError(f"cannot add {r!r} and {s!r}")
    coeffs = null_space(np.hstack([r.top, -s.top]), tol, scale=1.0)
    c, d = coeffs[: r.dim], coeffs[r.dim :]
    stacked = np.vstack([r.top @ c, r.bottom @ c + s.bottom @ d])
    return LinearRelation(
        dom_dim=r.dom_dim, codom_dim=r.codom_dim, graph=column_space(stacked, tol, scale=1.0)
    )


def scale(r: LinearRelation, alpha: complex, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``alpha r = {(x, alpha y)}``; ``alpha = 0`` gives ``dom r x {0}``."""
    stacked = np.vstack([r.top, alpha * r.bottom])
    return LinearRelation(
        dom_dim=r.dom_dim,
        codom_dim=r.codom_dim,
        graph=column_space(stacked, tol, scale=max(1.0, abs(alpha))),
    )


def difference(r: LinearRelation, s: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``r - s = {(x, y - y')}``."""
    return op_sum(r, scale(s, -1.0, tol), tol)


def shift(r: LinearRelation, lam: complex, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``r - lam I = {(x, y - lam x)}``."""
    if r.dom_dim != r.codom_dim:
        raise DimensionMismatchError("shift needs a relation in one space")
    stacked = np.vstack([r.top, r.bottom - lam * r.top])
    return LinearRelation(
        dom_dim=r.dom_dim,
        codom_dim=r.codom_dim,
        graph=column_space(stacked, tol, scale=max(1.0, abs(lam))),
    )


def eigenspace(r: LinearRelation, lam: complex, tol: Tol = DEFAULT_TOL) -> Subspace:
    """``Ker(r - lam I)``."""
    return ker(shift(r, lam, tol), tol)


def intersect(r: LinearRelation, s: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    _same_shape(r, s)
    return from_subspace(r.dom_dim, r.codom_dim, subspace_intersect(r.graph, s.graph, tol))


def rel_sum(r: LinearRelation, s: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """Componentwise sum of graphs."""
    _same_shape(r, s)
    return from_subspace(r.dom_dim, r.codom_dim, subspace_sum(r.graph, s.graph, tol))


def restrict(r: LinearRelation, s: Subspace, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``r`` restricted to the lineal ``s`` of its departure space."""
    return intersect(r, product(s, full_subspace(r.codom_dim), tol), tol)


def image(r: LinearRelation, s: Subspace, tol: Tol = DEFAULT_TOL) -> Subspace:
    """``r(s) = {y : (x, y) in r, x in s}``."""
    if s.ambient_dim != r.dom_dim:
        raise DimensionMismatchError("subspace does not live in the departure space")
    return ran(restrict(r, s, tol), tol)


def preimage(r: LinearRelation, s: Subspace, tol: Tol = DEFAULT_TOL) -> Subspace:
    """``r^{-1}(s)``."""
    return image(inverse(r), s, tol)


def block_diagonal(r: LinearRelation, s: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    """``diag(r, s)`` acting from C^(n1+n2) to C^(m1+m2), pairs ((x1, x2), (y1, y2))."""
    n1, n2, m1, m2 = r.dom_dim, s.dom_dim, r.codom_dim, s.codom_dim
    basis = np.zeros((n1 + n2 + m1 + m2, r.dim + s.dim), dtype=complex)
    basis[:n1, : r.dim] = r.top
    basis[n1 + n2 : n1 + n2 + m1, : r.dim] = r.bottom
    basis[n1 : n1 + n2, r.dim :] = s.top
    basis[n1 + n2 + m1 :, r.dim :] = s.bottom
    return LinearRelation(
        dom_dim=n1 + n2, codom_dim=m1 + m2, graph=column_space(basis, tol, scale=1.0)
    )


def _same_shape(r: LinearRelation, s: LinearRelation) -> None:
    if (r.dom_dim, r.codom_dim) != (s.dom_dim, s.codom_dim):
        raise DimensionMismatchError(f"shapes differ: {r!r} vs {s!r}")


def relation_eq(r: LinearRelation, s: LinearRelation, tol: Tol = DEFAULT_TOL) -> Tuple[bool, float]:
    """Principal-angle equality of graphs."""
    _same_shape(r, s)
    return subspace_eq(r.graph, s.graph, tol)


def relation_contains(
    outer: LinearRelation, inner: LinearRelation, tol: Tol = DEFAULT_TOL
) -> Tuple[bool, float]:
    """Whether ``inner`` is a subset of ``outer``; returns the sine residual as well."""
    _same_shape(outer, inner)
    residual = containment_residual(outer.graph, inner.graph)
    return residual <= tol.angle_atol, residual


# =============================================================================
# Adjoints and symmetry
# =============================================================================


def krein_adjoint(
    r: LinearRelation, dom_space: KreinSpace, codom_space: KreinSpace, tol: Tol = DEFAULT_TOL
) -> LinearRelation:
    """``r^c = {(y, y') : [x', y] = [x, y'] for all (x, x') in r}``.

    Args:
        r: Relation from ``dom_space`` to ``codom_space``.
        dom_space: Krein space the relation departs from.
        codom_space: Krein space the relation arrives in.
        tol: Tolerances.

    Returns:
        The adjoint, a relation from ``codom_space`` to ``dom_space``.
    """
    if (r.dom_dim, r.codom_dim) != (dom_space.dim, codom_space.dim):
        raise DimensionMismatchError(
            f"{r!r} does not map C^{dom_space.dim} to C^{codom_space.dim}"
        )
    total = r.dom_dim + r.codom_dim
    if r.dim == 0:
        return LinearRelation(
            dom_dim=r.codom_dim, codom_dim=r.dom_dim, graph=full_subspace(total)
        )
    constraints = np.vstack([codom_space.J @ r.bottom, -(dom_space.J @ r.top)])
    kernel = null_space(constraints.conj().T, tol, scale=1.0)
    return LinearRelation(
        dom_dim=r.codom_dim,
        codom_dim=r.dom_dim,
        graph=Subspace(ambient_dim=total, basis=kernel),
    )


def hilbert_adjoint(r: LinearRelation, tol: Tol = DEFAULT_TOL) -> LinearRelation:
    return krein_adjoint(r, hilbert_space(r.dom_dim), hilbert_space(r.codom_dim), tol)


def _check_square(r: LinearRelation, space: KreinSpace) -> None:
    if r.dom_dim != space.dim or r.codom_dim != space.dim:
        raise DimensionMismatchError(f"{r!r} is not a relation in a space of dim {space.dim}")


def graph_form(r: LinearRelation, space: KreinSpace) -> np.ndarray:
    """Gram matrix of the graph metric ``[., .]_Gamma`` on the basis of ``r``."""
    _check_square(r, space)
    JG = make_graph_space(space).J
    B = r.graph.basis
    return B.conj().T @ JG @ B


def is_neutral(r: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> bool:
    gram = graph_form(r, space)
    return gram.size == 0 or float(np.max(np.abs(gram))) <= tol.residual_atol


def is_symmetric(r: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> bool:
    _check_square(r, space)
    ok, _ = relation_contains(krein_adjoint(r, space, space, tol), r, tol)
    return ok


def is_selfadjoint(r: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> bool:
    _check_square(r, space)
    ok, _ = relation_eq(krein_adjoint(r, space, space, tol), r, tol)
    return ok


def is_dissipative(r: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> bool:
    """``Im [x', x] >= 0`` on the graph, tested on the compressed Hermitian form."""
    _check_square(r, space)
    if r.dim == 0:
        return True
    F = r.top.conj().T @ space.J @ r.bottom
    H = (F - F.conj().T) / 2j
    return float(np.min(np.linalg.eigvalsh(H))) >= -tol.residual_atol


# =============================================================================
# Spectral points
# =============================================================================


class SpectralClass(str, Enum):
    RESOLVENT = "rho"
    POINT = "sigma_p"
    RESIDUAL = "sigma_r"


class SpectralPoint(BaseModel):
    """Classification of one point.

    Parameters:
        lam: The point.
        spectral_class: Exactly one of rho, sigma_p, sigma_r.
        regular_type: Whether the point is of regular type (trivial eigenspace).
        in_r0: Always true in finite dimensions (ranges are closed).
        eigen_dim: Dimension of ``Ker(r - lam I)``.
        range_codim: Codimension of ``ran(r - lam I)``.
    """

    lam: complex
    spectral_class: SpectralClass
    regular_type: bool
    in_r0: bool = True
    eigen_dim: int
    range_codim: int


def spectral_classify(
    r: LinearRelation, space: KreinSpace, lam: complex, tol: Tol = DEFAULT_TOL
) -> SpectralPoint:
    _check_square(r, space)
    shifted = shift(r, lam, tol)
    eigen_dim = ker(shifted, tol).dim
    range_codim = space.dim - ran(shifted, tol).dim
    if eigen_dim:
        cls = SpectralClass.POINT
    elif range_codim:
        cls = SpectralClass.RESIDUAL
    else:
        cls = SpectralClass.RESOLVENT
    return SpectralPoint(
        lam=complex(lam),
        spectral_class=cls,
        regular_type=eigen_dim == 0,
        eigen_dim=eigen_dim,
        range_codim=range_codim,
    )


def point_spectrum(r: LinearRelation, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Finite eigenvalues of a relation in one space.

    With ``C`` spanning the coefficient vectors ``c`` of graph elements with
    ``X c != 0`` and ``P`` the projection onto the orthogonal complement of
    ``mul r``, an eigenpair satisfies ``P Y C a = lam P X C a``. The square
    pencil obtained by multiplying with ``(P X C)^H`` yields candidates, each
    of which is confirmed by an eigenspace computation.
    """
    if r.dom_dim != r.codom_dim:
        raise DimensionMismatchError("point spectrum needs a relation in one space")
    if r.dim == 0:
        return np.zeros(0, dtype=complex)
    C = column_space(r.top.conj().T, tol, scale=1.0).basis
    if C.shape[1] == 0:
        return np.zeros(0, dtype=complex)
    P = np.eye(r.codom_dim) - mul(r, tol).projector()
    X, Y = P @ r.top @ C, P @ r.bottom @ C
    values = sla.eigvals(X.conj().T @ Y, X.conj().T @ X)
    candidates = values[np.isfinite(values)]
    found = [lam for lam in candidates if eigenspace(r, lam, tol).dim > 0]
    logger.debug(f"point spectrum: {len(found)} of {len(candidates)} candidates confirmed")
    return np.array(found, dtype=complex)


def defect_numbers(T: LinearRelation, space: KreinSpace, tol: Tol = DEFAULT_TOL) -> Tuple[int, int]:
    """Dimensions of ``Ker(T^c - i)`` and ``Ker(T^c + i)`` for symmetric ``T``."""
    if not is_symmetric(T, space, tol):
        raise NotSymmetricError("defect numbers need a symmetric relation")
    Tc = krein_adjoint(T, space, space, tol)
    return eigenspace(Tc, 1j, tol).dim, eigenspace(Tc, -1j, tol).dim
