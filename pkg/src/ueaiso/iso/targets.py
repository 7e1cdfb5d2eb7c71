"""Filtered targets for homomorphism searches.

A target is a finite-dimensional algebra with a basis split into levels
(level >= s spans the s-th filtration term) and a bilinear bracket stored
as a dense tensor ``P[a, b, c]`` over GF(p).  Lie algebras use their own
bracket; associative algebras use the commutator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..assoc import AssocAlgebra, filtration_levels
from ..envelope import TruncatedEnvelope
from ..field import FieldSpec
from ..lie import LieAlgebra, graded_algebra, is_homogeneous, vector_weights


class TargetError(ValueError):
    pass


@dataclass
class FilteredTarget:
    field: FieldSpec
    levels: Tuple[int, ...]
    P: np.ndarray
    labels: Tuple[str, ...]
    kind: str  # "lie" | "envelope" | "assoc"
    obj: object
    # graded Lie algebra whose degree-1 part matches the target's level-1
    # coordinates (used for Stage 0 when available)
    graded_lie: Optional[LieAlgebra] = None
    _graded_P: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.levels)

    @property
    def top_level(self) -> int:
        return max(self.levels)

    @property
    def p(self) -> int:
        return self.field.modulus

    def level_indices(self, s: int) -> list:
        return [c for c, l in enumerate(self.levels) if l == s]

    def graded_P(self) -> np.ndarray:
        """Bracket of gr: keep only components of level exactly la + lb."""
        if self._graded_P is None:
            lv = np.asarray(self.levels)
            mask = lv[None, None, :] == (lv[:, None, None] + lv[None, :, None])
            self._graded_P = np.where(mask, self.P, 0)
        return self._graded_P

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abc->c", u, v, self.P) % self.p


def _need_finite(F: FieldSpec):
    if not F.is_finite:
        raise TargetError("searches need a finite prime field")


def lie_tensor(L: LieAlgebra) -> np.ndarray:
    d = L.dim
    P = np.zeros((d, d, d), dtype=np.int64)
    for (i, j), terms in L.table.items():
        for k, c in terms.items():
            P[i, j, k] = c
            P[j, i, k] = (-c) % L.field.modulus
    return P


def commutator_tensor(A: AssocAlgebra) -> np.ndarray:
    M = A.tensor()
    return (M - M.transpose(1, 0, 2)) % A.field.modulus


def target_from_lie(K: LieAlgebra) -> FilteredTarget:
    _need_finite(K.field)
    if K.weights is None or not is_homogeneous(K) or tuple(K.weights) != vector_weights(K):
        raise TargetError("target Lie algebra needs a homogeneous basis with its weights")
    G = graded_algebra(K).algebra
    return FilteredTarget(K.field, tuple(K.weights), lie_tensor(K), K.labels, "lie", K, G)


def target_from_envelope(E: TruncatedEnvelope) -> FilteredTarget:
    _need_finite(E.field)
    K = E.source
    G = graded_algebra(K).algebra
    return FilteredTarget(E.field, tuple(E.levels), commutator_tensor(E), E.labels, "envelope", E, G)


def target_from_assoc(A: AssocAlgebra) -> FilteredTarget:
    _need_finite(A.field)
    levels = A.levels if A.levels is not None else filtration_levels(A)
    if levels is None:
        raise TargetError("basis is not adapted to the power filtration; re-base with adapted_basis")
    return FilteredTarget(A.field, tuple(levels), commutator_tensor(A), A.labels, "assoc", A, None)


def as_target(obj) -> FilteredTarget:
    if isinstance(obj, FilteredTarget):
        return obj
    if isinstance(obj, TruncatedEnvelope):
        return target_from_envelope(obj)
    if isinstance(obj, AssocAlgebra):
        return target_from_assoc(obj)
    if isinstance(obj, LieAlgebra):
        return target_from_lie(obj)
    raise TargetError(f"cannot use {type(obj).__name__} as a search target")


def source_weights(L: LieAlgebra) -> Tuple[int, ...]:
    if L.weights is None or not is_homogeneous(L) or tuple(L.weights) != vector_weights(L):
        raise TargetError("source Lie algebra needs a homogeneous basis with its weights")
    return tuple(L.weights)


def generator_count(L: LieAlgebra) -> int:
    w = source_weights(L)
    return sum(1 for x in w if x == 1)


def embed_degree_one(T: FilteredTarget, g: Sequence[Sequence[int]]) -> np.ndarray:
    """Columns of ``g`` (level-1 coordinates) as full target vectors, one row per column."""
    idx = T.level_indices(1)
    g = np.asarray(g, dtype=np.int64)
    out = np.zeros((g.shape[1], T.dim), dtype=np.int64)
    out[:, idx] = g.T
    return out
