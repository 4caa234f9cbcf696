#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Krein spaces and the graph spaces built over them.

Convention: ``<u, v> = v^H u`` is linear in the first argument and the
indefinite metric is ``[x, y] = <J x, y>``.

Three derived spaces appear throughout:

    GraphSpace  H_Gamma over H, symmetry [[0, -iJ], [iJ, 0]],
                metric [(x, x'), (y, y')] = i[x, y'] - i[x', y]
    HatSpace    over H, symmetry (x, y) -> (Jy, Jx),
                metric [(x1, y1), (x2, y2)] = [x1, y2] + [y1, x2]
    K space     the GraphSpace built over a HatSpace
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from core.errors import DimensionMismatchError, InvalidSpaceError
from core.linalg import DEFAULT_TOL, Tol, as_cmatrix, inertia


# Entries of J are validated against this threshold.
SYMMETRY_ATOL = 1e-8


class KreinSpace(BaseModel):
    """Finite-dimensional Krein space C^dim with fundamental symmetry J.

    Parameters:
        dim: Dimension of the carrier.
        J: Hermitian involution defining the metric.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dim: int
    J: np.ndarray

    @field_validator("J", mode="before")
    @classmethod
    def _as_complex(cls, value) -> np.ndarray:
        arr = np.array(value, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("J must be a square matrix")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _involution(self) -> "KreinSpace":
        if self.J.shape[0] != self.dim:
            raise ValueError(f"J is {self.J.shape[0]}x{self.J.shape[0]}, dim is {self.dim}")
        if self.dim and np.max(np.abs(self.J - self.J.conj().T)) > SYMMETRY_ATOL:
            raise InvalidSpaceError("J is not Hermitian")
        if self.dim and np.max(np.abs(self.J @ self.J - np.eye(self.dim))) > SYMMETRY_ATOL:
            raise InvalidSpaceError("J is not an involution")
        return self

    def is_hilbert(self) -> bool:
        return self.dim == 0 or bool(np.allclose(self.J, np.eye(self.dim), atol=SYMMETRY_ATOL))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, signature={signature(self)})"


class GraphSpace(KreinSpace):
    """The Krein space H_Gamma = H + H with symmetry [[0, -iJ], [iJ, 0]]."""

    base: KreinSpace


class HatSpace(KreinSpace):
    """H + H with symmetry (x, y) -> (Jy, Jx)."""

    base: KreinSpace


def hilbert_space(n: int) -> KreinSpace:
    return KreinSpace(dim=n, J=np.eye(n))


def krein_space(J) -> KreinSpace:
    arr = as_cmatrix(J)
    return KreinSpace(dim=arr.shape[0], J=arr)


def pontryagin_space(n: int, kappa: int) -> KreinSpace:
    """C^n with J = diag(1, ..., 1, -1, ..., -1) and ``kappa`` negative squares."""
    if not 0 <= kappa <= n:
        raise DimensionMismatchError(f"kappa={kappa} outside [0, {n}]")
    return KreinSpace(dim=n, J=np.diag([1.0] * (n - kappa) + [-1.0] * kappa))


def direct_sum(a: KreinSpace, b: KreinSpace) -> KreinSpace:
    n = a.dim + b.dim
    J = np.zeros((n, n), dtype=complex)
    J[: a.dim, : a.dim] = a.J
    J[a.dim :, a.dim :] = b.J
    return KreinSpace(dim=n, J=J)


def indefinite_product(space: KreinSpace, x, y) -> complex:
    """``[x, y] = <J x, y>``, linear in ``x``.

    Args:
        space: The Krein space.
        x: First vector.
        y: Second vector.

    Returns:
        The complex value of the metric.
    """
    xv = np.asarray(x, dtype=complex).reshape(-1)
    yv = np.asarray(y, dtype=complex).reshape(-1)
    if xv.size != space.dim or yv.size != space.dim:
        raise DimensionMismatchError(
            f"vectors of length {xv.size}, {yv.size} in a space of dim {space.dim}"
        )
    return complex(np.vdot(yv, space.J @ xv))


def signature(space: KreinSpace, tol: Tol = DEFAULT_TOL) -> Tuple[int, int]:
    """Counts ``(kappa_plus, kappa_minus)`` of the eigenvalues +1 and -1 of J."""
    plus, minus, zero = inertia(space.J, tol)
    if zero:
        raise InvalidSpaceError("J has zero eigenvalues")
    return plus, minus


def make_graph_space(base: KreinSpace) -> GraphSpace:
    n = base.dim
    J = np.zeros((2 * n, 2 * n), dtype=complex)
    J[:n, n:] = -1j * base.J
    J[n:, :n] = 1j * base.J
    return GraphSpace(dim=2 * n, J=J, base=base)


def make_hat_space(base: KreinSpace) -> HatSpace:
    n = base.dim
    J = np.zeros((2 * n, 2 * n), dtype=complex)
    J[:n, n:] = base.J
    J[n:, :n] = base.J
    return HatSpace(dim=2 * n, J=J, base=base)


def make_K_space(hat: HatSpace) -> GraphSpace:
    return make_graph_space(hat)


def operator_adjoint(U, dom: KreinSpace, codom: KreinSpace) -> np.ndarray:
    """Closed form ``U^c = J_dom U^H J_codom`` of the Krein adjoint of ``U: dom -> codom``."""
    m = as_cmatrix(U, rows=codom.dim, cols=dom.dim)
    return dom.J @ m.conj().T @ codom.J


def is_standard_unitary(U, dom: KreinSpace, codom: KreinSpace, tol: Tol = DEFAULT_TOL) -> bool:
    """Whether ``U: dom -> codom`` is bijective with ``U^c U = I`` and ``U U^c = I``."""
    m = as_cmatrix(U)
    if m.shape != (codom.dim, dom.dim):
        raise DimensionMismatchError(f"U has shape {m.shape}, expected ({codom.dim}, {dom.dim})")
    if dom.dim != codom.dim:
        return False
    if dom.dim == 0:
        return True
    Uc = operator_adjoint(m, dom, codom)
    scale = max(1.0, float(np.linalg.norm(m, 2)) ** 2)
    left = float(np.max(np.abs(Uc @ m - np.eye(dom.dim))))
    right = float(np.max(np.abs(m @ Uc - np.eye(codom.dim))))
    return max(left, right) <= tol.residual_atol * scale
