#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""JSON instance files and report serialization.

Complex scalars are always written as ``[re, im]`` pairs and matrices as
nested lists of such pairs, row by row. Relations are stored by the
orthonormal basis of their graph.

Instance layout::

    {"kind", "seed",
     "space": {"dim", "J"},
     "relations": {"A": {"dom_dim", "codom_dim", "basis"}, "B": ...},
     "boundary": {"g0", "g1", "GammaB", "GammaA"},
     "matrices": {"T": ..., "N": ...},
     "params": {"flt": {"K", "B", "C", ...}, "dbt": {"g0", "g1"}},
     "tol": {"rank_rtol", "residual_atol", "angle_atol"}}
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ValidationError

from core.errors import InstanceFormatError, KreinToolkitError
from core.krein import KreinSpace
from core.linalg import Subspace, Tol
from core.relations import LinearRelation, from_subspace, is_operator, mul, operator_matrix
from services.boundary import BoundaryPair, DualPair
from services.generators import KINDS, Instance
from services.transforms import DBTParams, FLTParams

ComplexMatrix = List[List[List[float]]]

FLT_FIELDS = ("K", "B", "C", "K_prime", "B_prime", "C_prime")


# =============================================================================
# Complex encoding
# =============================================================================


def encode_complex(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def encode_matrix(m: np.ndarray) -> ComplexMatrix:
    arr = np.asarray(m, dtype=complex)
    return [[encode_complex(z) for z in row] for row in arr]


def decode_matrix(value: Any, rows: Optional[int] = None) -> np.ndarray:
    """Inverse of :func:`encode_matrix`.

    Args:
        value: Nested ``[re, im]`` lists.
        rows: Row count, needed to restore matrices without columns.

    Raises:
        InstanceFormatError: If the nesting is not ``rows x cols x 2``.
    """
    arr = np.asarray(value, dtype=float)
    if arr.size == 0:
        n = rows if rows is not None else (arr.shape[0] if arr.ndim >= 1 else 0)
        return np.zeros((n, 0), dtype=complex)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InstanceFormatError(f"expected rows x cols x [re, im], got shape {arr.shape}")
    out = arr[..., 0] + 1j * arr[..., 1]
    if rows is not None and out.shape[0] != rows:
        raise InstanceFormatError(f"matrix has {out.shape[0]} rows, expected {rows}")
    return out


def encode_relation(r: LinearRelation) -> Dict[str, Any]:
    return {"dom_dim": r.dom_dim, "codom_dim": r.codom_dim, "basis": encode_matrix(r.graph.basis)}


# =============================================================================
# File model
# =============================================================================


class RelationBlock(BaseModel):
    dom_dim: int
    codom_dim: int
    basis: ComplexMatrix

    def decode(self) -> LinearRelation:
        ambient = self.dom_dim + self.codom_dim
        basis = decode_matrix(self.basis, rows=ambient)
        return from_subspace(self.dom_dim, self.codom_dim, Subspace(ambient_dim=ambient, basis=basis))


class SpaceBlock(BaseModel):
    dim: int
    J: ComplexMatrix


class BoundaryBlock(BaseModel):
    g0: int
    g1: int
    GammaB: ComplexMatrix
    GammaA: ComplexMatrix


class DBTBlock(BaseModel):
    g0: int
    g1: int


class ParamsBlock(BaseModel):
    flt: Optional[Dict[str, ComplexMatrix]] = None
    dbt: Optional[DBTBlock] = None


class InstanceFile(BaseModel):
    """On-disk form of an :class:`Instance`.

    Parameters:
        kind: Instance kind.
        seed: Seed it was generated with.
        space: Dimension and fundamental symmetry.
        relations: Named relations in H; ``A`` and ``B`` are required.
        boundary: Split and graph bases of both boundary relations.
        matrices: Named raw matrices.
        params: Optional FLT and D-boundary blocks.
        tol: Tolerances the instance was generated with.
    """

    kind: str
    seed: int
    space: SpaceBlock
    relations: Dict[str, RelationBlock]
    boundary: BoundaryBlock
    matrices: Dict[str, ComplexMatrix] = {}
    params: ParamsBlock = ParamsBlock()
    tol: Optional[Tol] = None

    @classmethod
    def from_instance(cls, instance: Instance, tol: Optional[Tol] = None) -> "InstanceFile":
        bp = instance.bp
        flt = None
        if instance.flt is not None:
            flt = {
                name: encode_matrix(getattr(instance.flt, name))
                for name in FLT_FIELDS
                if getattr(instance.flt, name) is not None
            }
        dbt = None if instance.dbt is None else DBTBlock(g0=instance.dbt.g0_dim, g1=instance.dbt.g1_dim)
        relations = dict(instance.relations)
        relations.setdefault("A", bp.pair.A)
        relations.setdefault("B", bp.pair.B)
        return cls(
            kind=instance.kind,
            seed=instance.seed,
            space=SpaceBlock(dim=instance.space.dim, J=encode_matrix(instance.space.J)),
            relations={name: RelationBlock(**encode_relation(r)) for name, r in relations.items()},
            boundary=BoundaryBlock(
                g0=bp.g0_dim,
                g1=bp.g1_dim,
                GammaB=encode_matrix(bp.GammaB.graph.basis),
                GammaA=encode_matrix(bp.GammaA.graph.basis),
            ),
            matrices={name: encode_matrix(m) for name, m in instance.matrices.items()},
            params=ParamsBlock(flt=flt, dbt=dbt),
            tol=tol,
        )

    def to_instance(self) -> Instance:
        """Rebuild the library objects.

        The boundary pair is not re-checked for isometry, so a broken file
        reaches the suites and fails there.

        Raises:
            InstanceFormatError: If a block does not describe a valid object.
        """
        try:
            return self._to_instance()
        except InstanceFormatError:
            raise
        except (KreinToolkitError, ValidationError, ValueError, KeyError) as e:
            raise InstanceFormatError(f"invalid instance: {e}") from e

    def _to_instance(self) -> Instance:
        if self.kind not in KINDS:
            raise InstanceFormatError(f"unknown kind {self.kind!r}")
        n = self.space.dim
        space = KreinSpace(dim=n, J=decode_matrix(self.space.J, rows=n))
        relations = {name: block.decode() for name, block in self.relations.items()}
        if "A" not in relations or "B" not in relations:
            raise InstanceFormatError("relations A and B are required")
        g0, g1 = self.boundary.g0, self.boundary.g1
        graphs = []
        for name in ("GammaB", "GammaA"):
            basis = decode_matrix(getattr(self.boundary, name), rows=2 * n + g0 + g1)
            graphs.append(from_subspace(2 * n, g0 + g1, Subspace(ambient_dim=2 * n + g0 + g1, basis=basis)))
        bp = BoundaryPair(
            pair=DualPair(H=space, A=relations["A"], B=relations["B"]),
            g0_dim=g0,
            g1_dim=g1,
            GammaB=graphs[0],
            GammaA=graphs[1],
        )
        flt = None
        if self.params.flt is not None:
            flt = FLTParams(**{name: decode_matrix(m) for name, m in self.params.flt.items()})
        dbt = None
        if self.params.dbt is not None:
            dbt = DBTParams(g0_dim=self.params.dbt.g0, g1_dim=self.params.dbt.g1)
        return Instance(
            kind=self.kind,
            seed=self.seed,
            space=space,
            bp=bp,
            relations=relations,
            matrices={name: decode_matrix(m, rows=n) for name, m in self.matrices.items()},
            flt=flt,
            dbt=dbt,
        )


# =============================================================================
# Files
# =============================================================================


def write_instance(path: Union[str, Path], instance: Instance, tol: Optional[Tol] = None) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(InstanceFile.from_instance(instance, tol).model_dump_json(indent=1), encoding="utf-8")
    logger.debug(f"wrote {instance.kind} instance to {target}")
    return target


def read_instance_file(path: Union[str, Path]) -> InstanceFile:
    """Parse an instance file without building the library objects.

    Raises:
        InstanceFormatError: If the file is missing or is not a valid instance document.
    """
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"cannot read {source}: {e}") from e
    try:
        return InstanceFile.model_validate_json(text)
    except ValidationError as e:
        raise InstanceFormatError(f"{source}: {e.error_count()} format error(s): {e.errors()[0]['msg']}") from e


def read_instance(path: Union[str, Path]) -> Instance:
    return read_instance_file(path).to_instance()


# =============================================================================
# Reports
# =============================================================================


def encode_weyl(sample) -> Dict[str, Any]:
    """JSON form of a ``WeylSample``; ``value`` is the matrix of ``M`` when it is an operator."""
    M = sample.M
    value = None
    if is_operator(M) and M.dim == M.dom_dim:
        value = encode_matrix(operator_matrix(M))
    return {
        "lam": encode_complex(sample.lam),
        "M": encode_relation(M),
        "value": value,
        "mul_dim": mul(M).dim,
        "defect_dim": sample.defect.dim,
    }


def encode_report(report: BaseModel) -> Dict[str, Any]:
    """Dump a report model, turning complex numbers and matrices into ``[re, im]`` form."""
    return _plain(report.model_dump())


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {key: _plain(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return encode_matrix(value) if value.ndim == 2 else [_plain(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value
