#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Tolerance-aware dense complex linear algebra.

Every lineal used by the toolkit (graphs, kernels, ranges, defect spaces) is a
:class:`Subspace`: an ambient dimension plus an orthonormal basis obtained from
an SVD. Equality of subspaces is principal-angle equality.

Rank decisions keep singular values ``s >= rank_rtol * scale`` where ``scale``
defaults to the largest singular value. Internal callers working with blocks of
orthonormal bases pass ``scale=1.0`` so that a block made of roundoff is not
promoted to a nonzero subspace.
"""

from typing import Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

try:
    from scipy import linalg as sla
except ModuleNotFoundError as e:
    logger.error(f"Exception: {e}")
    logger.error("Install scipy for the SVD kernels: pip install scipy")
    raise Exception(f"Missing module: {e}")

from core.errors import ArgumentError, DimensionMismatchError, SingularFormError


class Tol(BaseModel):
    """Numerical thresholds shared by every module.

    Parameters:
        rank_rtol: Relative singular-value cutoff for rank decisions.
        residual_atol: Absolute threshold for identity residuals.
        angle_atol: Largest principal angle (radians) still counted as equality.
    """

    model_config = ConfigDict(frozen=True)

    rank_rtol: float = 1e-9
    residual_atol: float = 1e-8
    angle_atol: float = 1e-7

    @field_validator("rank_rtol", "residual_atol", "angle_atol")
    @classmethod
    def _strictly_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("tolerances must be strictly positive")
        return value

    @model_validator(mode="after")
    def _rank_below_one(self) -> "Tol":
        if self.rank_rtol >= 1:
            raise ValueError("rank_rtol must be below 1")
        return self


DEFAULT_TOL = Tol()


class Subspace(BaseModel):
    """A subspace of C^n stored by an orthonormal basis (n x k).

    Parameters:
        ambient_dim: Dimension n of the ambient space.
        basis: Matrix with orthonormal columns spanning the subspace.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ambient_dim: int
    basis: np.ndarray

    @field_validator("basis", mode="before")
    @classmethod
    def _as_complex(cls, value) -> np.ndarray:
        arr = np.array(value, dtype=complex)
        if arr.ndim != 2:
            raise ValueError("basis must be a 2-d array")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _shape(self) -> "Subspace":
        if self.ambient_dim < 0 or self.basis.shape[0] != self.ambient_dim:
            raise ValueError(
                f"basis has {self.basis.shape[0]} rows, ambient dim is {self.ambient_dim}"
            )
        if self.basis.shape[1] > self.ambient_dim:
            raise ValueError("more basis vectors than the ambient dimension")
        return self

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal (Euclidean) projector onto the subspace."""
        return self.basis @ self.basis.conj().T

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def __repr__(self) -> str:
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


# =============================================================================
# Matrix helpers
# =============================================================================


def as_cmatrix(m, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    """Coerce ``m`` to a finite complex 2-d array, checking its shape.

    Args:
        m: Array-like input; a 1-d input becomes a single column.
        rows: Expected row count, if any.
        cols: Expected column count, if any.

    Returns:
        A complex ndarray.
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ArgumentError(f"expected a matrix, got an array of rank {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError("matrix has non-finite entries")
    if rows is not None and arr.shape[0] != rows:
        raise DimensionMismatchError(f"expected {rows} rows, got {arr.shape[0]}")
    if cols is not None and arr.shape[1] != cols:
        raise DimensionMismatchError(f"expected {cols} columns, got {arr.shape[1]}")
    return arr


def _numerical_rank(s: np.ndarray, tol: Tol, scale: Optional[float]) -> int:
    if s.size == 0:
        return 0
    reference = float(s[0]) if scale is None else float(scale)
    if reference <= 0.0:
        return 0
    return int(np.count_nonzero(s >= tol.rank_rtol * reference))


def null_space(m, tol: Tol = DEFAULT_TOL, scale: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of the kernel of ``m``.

    Args:
        m: Matrix of shape (r, n).
        tol: Tolerances; ``rank_rtol`` decides the numerical rank.
        scale: Reference magnitude for the cutoff (largest singular value if None).

    Returns:
        Matrix of shape (n, n - rank) with orthonormal columns.
    """
    arr = as_cmatrix(m)
    rows, cols = arr.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=complex)
    if rows == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = sla.svd(arr, full_matrices=True, lapack_driver="gesvd")
    rank = _numerical_rank(s, tol, scale)
    return vh[rank:].conj().T


def column_space(m, tol: Tol = DEFAULT_TOL, scale: Optional[float] = None) -> Subspace:
    """Orthonormal basis of the span of the columns of ``m``.

    Args:
        m: Matrix whose columns span the subspace.
        tol: Tolerances; singular values below ``rank_rtol * scale`` are dropped.
        scale: Reference magnitude for the cutoff (largest singular value if None).

    Returns:
        The spanned :class:`Subspace`; a zero matrix gives the zero subspace.
    """
    arr = as_cmatrix(m)
    rows, cols = arr.shape
    if cols == 0 or rows == 0:
        return zero_subspace(rows)
    u, s, _ = sla.svd(arr, full_matrices=False, lapack_driver="gesvd")
    rank = _numerical_rank(s, tol, scale)
    return Subspace(ambient_dim=rows, basis=u[:, :rank])


def zero_subspace(n: int) -> Subspace:
    return Subspace(ambient_dim=n, basis=np.zeros((n, 0), dtype=complex))


def full_subspace(n: int) -> Subspace:
    return Subspace(ambient_dim=n, basis=np.eye(n, dtype=complex))


def span(*vectors, tol: Tol = DEFAULT_TOL) -> Subspace:
    """Subspace spanned by the given vectors (all of the same length)."""
    return column_space(np.column_stack([np.asarray(v, dtype=complex) for v in vectors]), tol)


def coordinate_subspace(n: int, indices) -> Subspace:
    """Subspace spanned by the standard basis vectors ``e_i`` for ``i`` in ``indices``."""
    idx = list(indices)
    basis = np.zeros((n, len(idx)), dtype=complex)
    for col, i in enumerate(idx):
        basis[i, col] = 1.0
    return Subspace(ambient_dim=n, basis=basis)


# =============================================================================
# Subspace arithmetic
# =============================================================================


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )


def subspace_sum(a: Subspace, b: Subspace, tol: Tol = DEFAULT_TOL) -> Subspace:
    """Span of the union of two subspaces."""
    _same_ambient(a, b)
    return column_space(np.hstack([a.basis, b.basis]), tol, scale=1.0)


def subspace_intersect(a: Subspace, b: Subspace, tol: Tol = DEFAULT_TOL) -> Subspace:
    """Intersection of two subspaces via the null space of ``[A | -B]``."""
    _same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(a.ambient_dim)
    coeffs = null_space(np.hstack([a.basis, -b.basis]), tol, scale=1.0)
    if coeffs.shape[1] == 0:
        return zero_subspace(a.ambient_dim)
    return column_space(a.basis @ coeffs[: a.dim], tol, scale=1.0)


def complement_wrt_form(s: Subspace, gram, tol: Tol = DEFAULT_TOL) -> Subspace:
    """The form-orthogonal complement ``{y : <gram x, y> = 0 for all x in s}``.

    Args:
        s: The subspace to complement.
        gram: Hermitian invertible matrix defining the form.
        tol: Tolerances.

    Returns:
        Subspace of dimension ``ambient_dim - dim(s)``.
    """
    g = as_cmatrix(gram, rows=s.ambient_dim, cols=s.ambient_dim)
    if s.ambient_dim == 0:
        return s
    if np.max(np.abs(g - g.conj().T)) > tol.residual_atol * max(1.0, np.max(np.abs(g))):
        raise SingularFormError("form matrix is not Hermitian")
    sv = sla.svdvals(g)
    if sv[-1] < tol.rank_rtol * sv[0]:
        raise SingularFormError(f"form matrix is singular (smallest singular value {sv[-1]:.3e})")
    if s.dim == 0:
        return full_subspace(s.ambient_dim)
    kernel = null_space((g @ s.basis).conj().T, tol, scale=float(sv[0]))
    return Subspace(ambient_dim=s.ambient_dim, basis=kernel)


def orthogonal_complement(s: Subspace, tol: Tol = DEFAULT_TOL) -> Subspace:
    """Euclidean orthogonal complement."""
    return complement_wrt_form(s, np.eye(s.ambient_dim), tol)


def max_principal_angle(a: Subspace, b: Subspace) -> float:
    """Largest principal angle between two subspaces of equal dimension.

    Subspaces of different dimensions are at angle pi/2. The sine-based formula
    ``||(I - P_a) B||`` is used, which stays accurate for tiny angles.
    """
    _same_ambient(a, b)
    if a.dim != b.dim:
        return float(np.pi / 2)
    if a.dim == 0:
        return 0.0
    residual = b.basis - a.basis @ (a.basis.conj().T @ b.basis)
    sine = float(np.linalg.norm(residual, 2))
    return float(np.arcsin(min(1.0, sine)))


def subspace_eq(a: Subspace, b: Subspace, tol: Tol = DEFAULT_TOL) -> Tuple[bool, float]:
    """Principal-angle equality.

    Returns:
        ``(equal, angle)`` where ``angle`` is the largest principal angle.
    """
    angle = max_principal_angle(a, b)
    return a.dim == b.dim and angle <= tol.angle_atol, angle


def containment_residual(outer: Subspace, inner: Subspace) -> float:
    """Sine of the largest angle between ``inner`` and ``outer`` (0 iff inner is inside)."""
    _same_ambient(outer, inner)
    if inner.dim == 0:
        return 0.0
    residual = inner.basis - outer.basis @ (outer.basis.conj().T @ inner.basis)
    return float(np.linalg.norm(residual, 2))


def subspace_contains(outer: Subspace, inner: Subspace, tol: Tol = DEFAULT_TOL) -> bool:
    """Whether ``inner`` lies in ``outer`` up to ``angle_atol``."""
    return containment_residual(outer, inner) <= tol.angle_atol


def apply(matrix, s: Subspace, tol: Tol = DEFAULT_TOL) -> Subspace:
    """Image of a subspace under a matrix."""
    m = as_cmatrix(matrix, cols=s.ambient_dim)
    return column_space(m @ s.basis, tol, scale=max(1.0, float(np.linalg.norm(m, 2))))


# =============================================================================
# Hermitian forms
# =============================================================================


def inertia(h, tol: Tol = DEFAULT_TOL) -> Tuple[int, int, int]:
    """Counts of positive, negative and zero eigenvalues of a Hermitian matrix."""
    arr = as_cmatrix(h)
    if arr.shape[0] == 0:
        return 0, 0, 0
    w = np.linalg.eigvalsh((arr + arr.conj().T) / 2)
    cutoff = tol.rank_rtol * max(1.0, float(np.max(np.abs(w))))
    return (
        int(np.count_nonzero(w > cutoff)),
        int(np.count_nonzero(w < -cutoff)),
        int(np.count_nonzero(np.abs(w) <= cutoff)),
    )


def hermitian_congruence(target, model, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Find ``L`` (model_dim x target_dim) with ``L^H model L = target``.

    ``target`` must be invertible; ``model`` must offer at least as many positive
    and negative directions as ``target`` has. The columns of ``L`` live on
    eigenvectors of ``model`` with matching signs.

    Args:
        target: Hermitian invertible d x d matrix.
        model: Hermitian g x g matrix.
        tol: Tolerances.

    Returns:
        The g x d matrix ``L``.
    """
    t = as_cmatrix(target)
    mdl = as_cmatrix(model)
    t = (t + t.conj().T) / 2
    mdl = (mdl + mdl.conj().T) / 2
    wt, vt = np.linalg.eigh(t)
    wm, vm = np.linalg.eigh(mdl)
    cutoff = tol.rank_rtol * max(1.0, float(np.max(np.abs(wt))) if wt.size else 1.0)
    if np.any(np.abs(wt) <= cutoff):
        raise SingularFormError("target form is singular")
    t_pos, t_neg = np.flatnonzero(wt > 0), np.flatnonzero(wt < 0)
    m_cut = tol.rank_rtol * max(1.0, float(np.max(np.abs(wm))) if wm.size else 1.0)
    m_pos = np.flatnonzero(wm > m_cut)[::-1]
    m_neg = np.flatnonzero(wm < -m_cut)
    if len(m_pos) < len(t_pos) or len(m_neg) < len(t_neg):
        raise SingularFormError(
            f"model form with inertia ({len(m_pos)},{len(m_neg)}) cannot carry "
            f"({len(t_pos)},{len(t_neg)})"
        )
    picked = np.concatenate([m_pos[: len(t_pos)], m_neg[: len(t_neg)]]).astype(int)
    order = np.concatenate([t_pos, t_neg]).astype(int)
    left = vm[:, picked] / np.sqrt(np.abs(wm[picked]))
    right = np.sqrt(np.abs(wt[order]))[:, None] * vt[:, order].conj().T
    return left @ right
