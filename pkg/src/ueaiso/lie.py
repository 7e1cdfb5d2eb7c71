"""Finite-dimensional Lie algebras given by structure constants.

Basis indices are 0-based internally; the text format and all printed output
use 1-based names ``e.1 .. e.d`` (or ``x1 .. xd``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .field import FieldSpec, Subspace, nullspace, rref, solve_affine, transpose

Bracket = Dict[int, object]


class LieError(ValueError):
    pass


class ParseError(LieError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class NotNilpotent(LieError):
    pass


class LieAlgebra:
    """Lie algebra with brackets stored for ``i < j`` only.

    ``table[(i, j)]`` maps ``k`` to the coefficient of ``e_k`` in
    ``[e_i, e_j]``; antisymmetric completion is synthesised on access.
    """

    def __init__(
        self,
        field: FieldSpec,
        dim: int,
        table: Optional[Dict[Tuple[int, int], Bracket]] = None,
        weights: Optional[Sequence[int]] = None,
        labels: Optional[Sequence[str]] = None,
        name: str = "",
    ):
        if dim < 1:
            raise LieError("dimension must be positive")
        self.field = field
        self.dim = dim
        clean: Dict[Tuple[int, int], Bracket] = {}
        for (i, j), terms in (table or {}).items():
            if not (0 <= i < j < dim):
                raise LieError(f"bracket index pair ({i + 1},{j + 1}) must satisfy 1 <= i < j <= {dim}")
            row = {}
            for k, c in terms.items():
                if not 0 <= k < dim:
                    raise LieError(f"basis index {k + 1} out of range")
                c = field(c)
                if c != 0:
                    row[k] = c
            if row:
                clean[(i, j)] = row
        self.table = clean
        if weights is not None:
            weights = tuple(int(w) for w in weights)
            if len(weights) != dim or any(w < 1 for w in weights):
                raise LieError("weights must be positive integers, one per basis element")
        self.weights: Optional[Tuple[int, ...]] = weights
        self.labels = tuple(labels) if labels else tuple(f"x{i + 1}" for i in range(dim))
        self.name = name
        self._tensor = None
        self._lcs = None

    # -- access ---------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> Bracket:
        if i == j:
            return {}
        if i < j:
            return dict(self.table.get((i, j), {}))
        F = self.field
        return {k: F.norm(-c) for k, c in self.table.get((j, i), {}).items()}

    def structure_tensor(self) -> list:
        """Dense ``T[i][j][k]`` with full antisymmetric completion."""
        if self._tensor is None:
            F = self.field
            d = self.dim
            T = [[[F.zero] * d for _ in range(d)] for _ in range(d)]
            for (i, j), terms in self.table.items():
                for k, c in terms.items():
                    T[i][j][k] = c
                    T[j][i][k] = F.norm(-c)
            self._tensor = T
        return self._tensor

    def bracket(self, u: Sequence, v: Sequence) -> list:
        F = self.field
        out = [F.zero] * self.dim
        for (i, j), terms in self.table.items():
            c = u[i] * v[j] - u[j] * v[i]
            if c:
                for k, s in terms.items():
                    out[k] += c * s
        return [F.norm(x) for x in out]

    def basis_vector(self, i: int) -> list:
        F = self.field
        v = [F.zero] * self.dim
        v[i] = F.one
        return v

    def over(self, F: FieldSpec) -> "LieAlgebra":
        """Same integer/rational table read in another field."""
        return LieAlgebra(F, self.dim, self.table, self.weights, self.labels, self.name)

    def with_weights(self, weights: Optional[Sequence[int]]) -> "LieAlgebra":
        return LieAlgebra(self.field, self.dim, self.table, weights, self.labels, self.name)

    def renamed(self, name: str) -> "LieAlgebra":
        return LieAlgebra(self.field, self.dim, self.table, self.weights, self.labels, name)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LieAlgebra)
            and self.field == other.field
            and self.dim == other.dim
            and self.table == other.table
            and self.weights == other.weights
        )

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<LieAlgebra{tag} dim={self.dim} over {self.field}>"

    # -- derived data ---------------------------------------------------

    @property
    def nilpotency_class(self) -> int:
        return lower_central_series(self).nilpotency_class

    def brackets_text(self) -> List[str]:
        out = []
        for (i, j) in sorted(self.table):
            terms = self.table[(i, j)]
            rhs = " + ".join(f"{c}*{self.labels[k]}" for k, c in sorted(terms.items()))
            out.append(f"[{self.labels[i]},{self.labels[j]}] = {rhs}")
        return out


# ---------------------------------------------------------------------------
# text format


_BRACKET_RE = re.compile(r"^\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.*)$")
_TERM_RE = re.compile(r"^([+-]?\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*e\.(\d+)$")


def _split_terms(rhs: str) -> List[str]:
    rhs = rhs.replace(" ", "").replace("+-", "-")
    if not rhs:
        return []
    parts = re.split(r"(?<=[^\^*/])(?=[+-])", rhs)
    return [p for p in parts if p]


def _parse_coeff(s: str):
    s = s.replace(" ", "")
    if s in ("", "+"):
        return Fraction(1)
    if s == "-":
        return Fraction(-1)
    return Fraction(s)


def parse_lie_algebra(text: str, name: str = "") -> LieAlgebra:
    """Parse the line-oriented Lie algebra format (``field`` defaults to Q).

    ::

        field Q
        dim 5
        weights 1 1 1 2 3
        [1,2] = 1*e.4
        [1,4] = 1*e.5
    """
    F: Optional[FieldSpec] = None
    dim: Optional[int] = None
    weights = None
    table: Dict[Tuple[int, int], Bracket] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("field"):
            try:
                F = FieldSpec.parse(line[5:])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            continue
        if line.startswith("dim"):
            try:
                dim = int(line[3:])
            except ValueError:
                raise ParseError(f"bad dimension {line[3:].strip()!r}", lineno) from None
            if dim < 1:
                raise ParseError("dimension must be positive", lineno)
            continue
        if line.startswith("weights"):
            try:
                weights = [int(w) for w in line[7:].split()]
            except ValueError:
                raise ParseError("weights must be integers", lineno) from None
            continue
        m = _BRACKET_RE.match(line)
        if not m:
            raise ParseError(f"cannot parse {raw.strip()!r}", lineno)
        if dim is None:
            raise ParseError("bracket before dim header", lineno)
        if F is None:
            F = FieldSpec.rationals()
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i < j <= dim):
            raise ParseError(f"bracket [{i},{j}] must satisfy 1 <= i < j <= {dim}", lineno)
        terms: Bracket = {}
        for tok in _split_terms(m.group(3)):
            tm = _TERM_RE.match(tok)
            if not tm:
                raise ParseError(f"bad term {tok!r}", lineno)
            k = int(tm.group(2))
            if not 1 <= k <= dim:
                raise ParseError(f"basis index e.{k} out of range", lineno)
            try:
                c = F(_parse_coeff(tm.group(1)))
            except ZeroDivisionError as exc:
                raise ParseError(str(exc), lineno) from None
            terms[k - 1] = F.norm(terms.get(k - 1, F.zero) + c)
        if (i - 1, j - 1) in table:
            raise ParseError(f"bracket [{i},{j}] given twice", lineno)
        table[(i - 1, j - 1)] = terms
    if F is None:
        F = FieldSpec.rationals()
    if dim is None:
        raise ParseError("missing 'dim' line")
    if weights is not None and len(weights) != dim:
        raise ParseError(f"expected {dim} weights, got {len(weights)}")
    try:
        return LieAlgebra(F, dim, table, weights, name=name)
    except LieError as exc:
        raise ParseError(str(exc)) from None


def terms_text(terms) -> str:
    """``{k: c}`` as ``c*e.(k+1)`` terms joined with signs."""
    out = ""
    for k, c in sorted(terms.items()):
        neg = c < 0
        mag = -c if neg else c
        if not out:
            out = f"{'-' if neg else ''}{mag}*e.{k + 1}"
        else:
            out += f" {'-' if neg else '+'} {mag}*e.{k + 1}"
    return out


def format_lie_algebra(L: LieAlgebra) -> str:
    lines = []
    if L.name:
        lines.append(f"# {L.name}")
    lines.append(f"field {L.field}")
    lines.append(f"dim {L.dim}")
    if L.weights:
        lines.append("weights " + " ".join(map(str, L.weights)))
    for (i, j) in sorted(L.table):
        terms = L.table[(i, j)]
        lines.append(f"[{i + 1},{j + 1}] = {terms_text(terms)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def first(self) -> Optional[str]:
        return self.violations[0] if self.violations else None


def jacobi_residual(L: LieAlgebra, i: int, j: int, k: int) -> list:
    """``[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`` as a vector."""
    F = L.field
    e = L.basis_vector
    out = [F.zero] * L.dim
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        v = L.bracket(L.bracket(e(a), e(b)), e(c))
        out = [F.norm(x + y) for x, y in zip(out, v)]
    return out


def _vec_text(L: LieAlgebra, v: Sequence) -> str:
    terms = [f"{c}*{L.labels[k]}" for k, c in enumerate(v) if c != 0]
    return " + ".join(terms) if terms else "0"


def validate(L: LieAlgebra) -> ValidationReport:
    """Check Jacobi on all triples and, if weights are set, weight compatibility."""
    rep = ValidationReport()
    d = L.dim
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                r = jacobi_residual(L, i, j, k)
                if any(r):
                    rep.violations.append(
                        f"Jacobi fails at ({i + 1},{j + 1},{k + 1}): residual {_vec_text(L, r)}"
                    )
    if L.weights:
        w = L.weights
        for i in range(d - 1):
            if w[i] > w[i + 1]:
                rep.violations.append(f"weights decrease at position {i + 2}")
                break
        for (i, j), terms in sorted(L.table.items()):
            for k in sorted(terms):
                if w[k] < w[i] + w[j]:
                    rep.violations.append(
                        f"weight incompatibility: c[{i + 1}][{j + 1}][{k + 1}] != 0 "
                        f"but w{k + 1}={w[k]} < w{i + 1}+w{j + 1}={w[i] + w[j]}"
                    )
    return rep


# ---------------------------------------------------------------------------
# lower central series, weights, homogeneous bases


@dataclass
class LowerCentralSeries:
    terms: List[Subspace]

    @property
    def nilpotency_class(self) -> int:
        return len(self.terms)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(t.dim for t in self.terms)


def _bracket_span(L: LieAlgebra, U: Subspace) -> Subspace:
    vecs = []
    for u in U.basis:
        for j in range(L.dim):
            v = L.bracket(u, L.basis_vector(j))
            if any(v):
                vecs.append(v)
    return Subspace(L.dim, L.field, vecs)


def lower_central_series(L: LieAlgebra) -> LowerCentralSeries:
    """Nonzero terms ``L^1 ⊋ L^2 ⊋ ...``; raises NotNilpotent if it stalls."""
    if L._lcs is not None:
        return L._lcs
    terms = [Subspace.full(L.dim, L.field)]
    while True:
        nxt = _bracket_span(L, terms[-1])
        if nxt.dim == 0:
            break
        if nxt.dim == terms[-1].dim:
            raise NotNilpotent(f"lower central series stabilises at dimension {nxt.dim}")
        terms.append(nxt)
    L._lcs = LowerCentralSeries(terms)
    return L._lcs


def vector_weights(L: LieAlgebra) -> Tuple[int, ...]:
    """Weight of each basis vector: the largest i with e_k in L^i."""
    lcs = lower_central_series(L).terms
    out = []
    for k in range(L.dim):
        e = L.basis_vector(k)
        w = max(i + 1 for i, t in enumerate(lcs) if e in t)
        out.append(w)
    return tuple(out)


def is_homogeneous(L: LieAlgebra) -> bool:
    """True when basis vectors of weight >= i span L^i for every i."""
    lcs = lower_central_series(L).terms
    w = vector_weights(L)
    for i, term in enumerate(lcs, start=1):
        idx = [k for k in range(L.dim) if w[k] >= i]
        if len(idx) != term.dim:
            return False
    return list(w) == sorted(w)


def change_basis(L: LieAlgebra, rows: Sequence[Sequence], weights=None) -> LieAlgebra:
    """Rewrite ``L`` in the basis whose vectors (old coordinates) are ``rows``."""
    F = L.field
    d = L.dim
    rows = [list(r) for r in rows]
    if len(rows) != d or rref(rows, F)[0] != d:
        raise LieError("change of basis must be invertible")
    cols = transpose(rows)
    table: Dict[Tuple[int, int], Bracket] = {}
    for a in range(d):
        for b in range(a + 1, d):
            v = L.bracket(rows[a], rows[b])
            if not any(v):
                continue
            sol = solve_affine(cols, v, d, F)
            table[(a, b)] = {k: c for k, c in enumerate(sol.particular) if c != 0}
    return LieAlgebra(F, d, table, weights, name=L.name)


@dataclass
class Rebased:
    algebra: LieAlgebra
    change: List[list]  # new basis vectors in old coordinates

    @property
    def is_identity(self) -> bool:
        F = self.algebra.field
        d = self.algebra.dim
        return all(self.change[i][j] == (F.one if i == j else F.zero) for i in range(d) for j in range(d))


def homogeneous_basis(L: LieAlgebra) -> Rebased:
    """Re-base ``L`` on a homogeneous basis with non-decreasing weights.

    Works from the bottom of the lower central series up: each term's echelon
    rows are scanned in order and kept when they are new modulo what is
    already chosen.  Already-homogeneous bases come back unchanged.
    """
    F = L.field
    lcs = lower_central_series(L).terms
    chosen: List[Tuple[int, list]] = []
    span = Subspace.zero(L.dim, F)
    for i in range(len(lcs), 0, -1):
        layer = []
        for row in _layer_candidates(L, lcs[i - 1]):
            if row not in span:
                layer.append(row)
                span = Subspace(L.dim, F, span.basis + [row])
        chosen = [(i, r) for r in layer] + chosen
    weights = [w for w, _ in chosen]
    rows = [r for _, r in chosen]
    new = change_basis(L, rows, weights)
    return Rebased(new.renamed(L.name), rows)


def _layer_candidates(L: LieAlgebra, term: Subspace) -> List[list]:
    # standard basis vectors lying in the term come first, in index order,
    # so that homogeneous inputs map to themselves
    F = L.field
    out = []
    for k in range(L.dim):
        e = L.basis_vector(k)
        if e in term:
            out.append(e)
    out.extend(term.basis)
    return out



def with_computed_weights(L: LieAlgebra) -> LieAlgebra:
    """Attach weights, re-basing first if the basis is not homogeneous."""
    if is_homogeneous(L):
        return L.with_weights(vector_weights(L))
    return homogeneous_basis(L).algebra


def lie_center(L: LieAlgebra) -> Subspace:
    F = L.field
    d = L.dim
    T = L.structure_tensor()
    # row (j, k): sum_i z_i T[i][j][k] = 0
    rows = [[T[i][j][k] for i in range(d)] for j in range(d) for k in range(d)]
    rows = [r for r in rows if any(r)]
    return Subspace(d, F, nullspace(rows, d, F))


# ---------------------------------------------------------------------------
# associated graded algebra


@dataclass
class GradedLieAlgebra:
    algebra: LieAlgebra
    component_dims: Tuple[int, ...]

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @property
    def degree_one_dim(self) -> int:
        return self.component_dims[0]


def graded_algebra(L: LieAlgebra) -> GradedLieAlgebra:
    """gr L in a homogeneous basis: keep only the weight-(w_i+w_j) part of each bracket."""
    H = L if (L.weights and is_homogeneous(L) and L.weights == vector_weights(L)) else with_computed_weights(L)
    w = H.weights
    table = {}
    for (i, j), terms in H.table.items():
        kept = {k: c for k, c in terms.items() if w[k] == w[i] + w[j]}
        if kept:
            table[(i, j)] = kept
    G = LieAlgebra(H.field, H.dim, table, w, H.labels, name=f"gr {H.name}".strip())
    top = max(w)
    dims = tuple(sum(1 for x in w if x == i) for i in range(1, top + 1))
    return GradedLieAlgebra(G, dims)


def quotient_lie(L: LieAlgebra, ideal: Subspace) -> LieAlgebra:
    """L / I on the complement spanned by non-pivot coordinates of I."""
    F = L.field
    comp = ideal.complement_indices()
    pos = {k: n for n, k in enumerate(comp)}
    if not comp:
        raise LieError("quotient by the whole algebra")
    for u in ideal.basis:
        for j in range(L.dim):
            if L.bracket(u, L.basis_vector(j)) not in ideal:
                raise LieError("subspace is not an ideal")
    table = {}
    for a, i in enumerate(comp):
        for b in range(a + 1, len(comp)):
            j = comp[b]
            v = ideal.reduce(L.bracket(L.basis_vector(i), L.basis_vector(j)))
            terms = {pos[k]: c for k, c in enumerate(v) if c != 0}
            if terms:
                table[(a, b)] = terms
    weights = None
    if L.weights:
        weights = [L.weights[k] for k in comp]
    Q = LieAlgebra(F, len(comp), table, weights, name=f"{L.name}/I" if L.name else "")
    if weights and not validate(Q).ok:
        Q = Q.with_weights(None)
    return Q


def lcs_term(L: LieAlgebra, i: int) -> Subspace:
    terms = lower_central_series(L).terms
    if i <= len(terms):
        return terms[i - 1]
    return Subspace.zero(L.dim, L.field)


def abelian(F: FieldSpec, dim: int, name: str = "") -> LieAlgebra:
    return LieAlgebra(F, dim, {}, [1] * dim, name=name)
