"""Finite-dimensional nilpotent associative algebras and their invariants."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .field import FieldSpec, Subspace, nullspace, rref, solve_affine, transpose

log = logging.getLogger(__name__)

ASSOC_CHECK_LIMIT = 80

Sparse = Dict[int, object]


class AssocError(ValueError):
    pass


class NotAnIdeal(AssocError):
    pass


class AssocAlgebra:
    """Structure constants ``table[i][j] = {k: c}`` for ``e_i e_j``.

    ``levels`` (optional) gives a filtration level per basis vector such that
    the vectors of level >= s span ``A^s``; ``generators`` lists basis indices
    that generate the algebra (defaults to every basis vector).
    """

    def __init__(
        self,
        field: FieldSpec,
        dim: int,
        table: Sequence[Sequence[Sparse]],
        labels: Optional[Sequence[str]] = None,
        levels: Optional[Sequence[int]] = None,
        generators: Optional[Sequence[int]] = None,
        provenance: str = "",
        check: bool = True,
    ):
        self.field = field
        self.dim = dim
        self.table = [[{k: c for k, c in cell.items() if c != 0} for cell in row] for row in table]
        if len(self.table) != dim or any(len(r) != dim for r in self.table):
            raise AssocError("multiplication table has the wrong shape")
        self.labels = tuple(labels) if labels else tuple(f"e{i + 1}" for i in range(dim))
        self.levels = tuple(levels) if levels is not None else None
        self.generators = list(generators) if generators is not None else None
        self.provenance = provenance
        self._tensor = None
        self._rmul = None
        self._powers = None
        if check:
            if dim <= ASSOC_CHECK_LIMIT:
                bad = first_nonassociative_triple(self)
                if bad is not None:
                    raise AssocError(f"not associative on basis triple {tuple(i + 1 for i in bad)}")
            else:
                log.warning("skipping associativity check for dimension %d > %d", dim, ASSOC_CHECK_LIMIT)

    def __repr__(self) -> str:
        tag = f" {self.provenance}" if self.provenance else ""
        return f"<AssocAlgebra{tag} dim={self.dim} over {self.field}>"

    def zero(self) -> list:
        return [self.field.zero] * self.dim

    def basis_vector(self, i: int) -> list:
        v = self.zero()
        v[i] = self.field.one
        return v

    def mul(self, u: Sequence, v: Sequence) -> list:
        F = self.field
        out = [F.zero] * self.dim
        nu = [(i, a) for i, a in enumerate(u) if a != 0]
        nv = [(j, b) for j, b in enumerate(v) if b != 0]
        for i, a in nu:
            row = self.table[i]
            for j, b in nv:
                ab = a * b
                for k, c in row[j].items():
                    out[k] += ab * c
        return [F.norm(x) for x in out]

    def commutator(self, u: Sequence, v: Sequence) -> list:
        F = self.field
        return [F.norm(x - y) for x, y in zip(self.mul(u, v), self.mul(v, u))]

    def add(self, u, v) -> list:
        F = self.field
        return [F.norm(x + y) for x, y in zip(u, v)]

    def scale(self, c, u) -> list:
        F = self.field
        return [F.norm(c * x) for x in u]

    def generating_set(self) -> List[int]:
        return self.generators if self.generators is not None else list(range(self.dim))

    def right_mult_matrix(self, j: int) -> list:
        """Rows indexed by i: coordinates of e_i e_j."""
        F = self.field
        out = []
        for i in range(self.dim):
            row = [F.zero] * self.dim
            for k, c in self.table[i][j].items():
                row[k] = c
            out.append(row)
        return out

    def tensor(self) -> np.ndarray:
        """Dense int64 array ``M[i, j, k]`` (prime fields only)."""
        if not self.field.is_finite:
            raise AssocError("dense tensor only available over GF(p)")
        if self._tensor is None:
            M = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
            for i, row in enumerate(self.table):
                for j, cell in enumerate(row):
                    for k, c in cell.items():
                        M[i, j, k] = c
            self._tensor = M
        return self._tensor

    def vector_text(self, v: Sequence) -> str:
        terms = []
        for k, c in enumerate(v):
            if c == 0:
                continue
            terms.append(self.labels[k] if c == 1 else f"{c}*{self.labels[k]}")
        return " + ".join(terms) if terms else "0"


def first_nonassociative_triple(A: AssocAlgebra) -> Optional[Tuple[int, int, int]]:
    d = A.dim
    F = A.field
    for i in range(d):
        for j in range(d):
            ij = A.table[i][j]
            for k in range(d):
                left: Dict[int, object] = {}
                for m, c in ij.items():
                    for n, e in A.table[m][k].items():
                        left[n] = left.get(n, 0) + c * e
                right: Dict[int, object] = {}
                for m, c in A.table[j][k].items():
                    for n, e in A.table[i][m].items():
                        right[n] = right.get(n, 0) + c * e
                keys = set(left) | set(right)
                if any(F.norm(left.get(n, 0) - right.get(n, 0)) != 0 for n in keys):
                    return (i, j, k)
    return None


def is_associative(A: AssocAlgebra) -> bool:
    return first_nonassociative_triple(A) is None


# ---------------------------------------------------------------------------
# invariants


def center(A: AssocAlgebra) -> Subspace:
    """Elements commuting with a generating set (hence with all of A)."""
    F = A.field
    d = A.dim
    rows = []
    for g in A.generating_set():
        # (g e_k - e_k g)[r] as coefficient of z_k
        block = [[F.zero] * d for _ in range(d)]
        for k in range(d):
            for r, c in A.table[g][k].items():
                block[r][k] = F.norm(block[r][k] + c)
            for r, c in A.table[k][g].items():
                block[r][k] = F.norm(block[r][k] - c)
        rows.extend(r for r in block if any(r))
    return Subspace(d, F, nullspace(rows, d, F))


def center_bruteforce(A: AssocAlgebra) -> Subspace:
    """Same as :func:`center` but commuting with every basis vector."""
    saved = A.generators
    A.generators = None
    try:
        return center(A)
    finally:
        A.generators = saved


def _span_products(A: AssocAlgebra, U: Subspace) -> Subspace:
    F = A.field
    if not U.basis:
        return Subspace.zero(A.dim, F)
    if F.is_finite:
        p = F.modulus
        B = np.asarray(U.basis, dtype=np.int64)
        M = A.tensor()
        # rows: sum_i B[r, i] M[i, j, :] for each r, j
        prods = np.einsum("ri,ijk->rjk", B, M).reshape(-1, A.dim) % p
        prods = prods[np.any(prods, axis=1)]
        return Subspace(A.dim, F, prods.tolist())
    vecs = []
    for u in U.basis:
        for j in range(A.dim):
            v = A.mul(u, A.basis_vector(j))
            if any(v):
                vecs.append(v)
    return Subspace(A.dim, F, vecs)


def power_ideals(A: AssocAlgebra) -> List[Subspace]:
    """``[A^1, A^2, ...]`` up to the last nonzero power.

    Raises AssocError if the chain stalls (A not nilpotent).
    """
    if A._powers is not None:
        return A._powers
    F = A.field
    out = [Subspace.full(A.dim, F)]
    while True:
        nxt = _span_products(A, out[-1])
        if nxt.dim == 0:
            break
        if nxt.dim == out[-1].dim:
            raise AssocError("power ideals stabilise: algebra is not nilpotent")
        out.append(nxt)
    A._powers = out
    return out


def power_term(A: AssocAlgebra, j: int) -> Subspace:
    p = power_ideals(A)
    return p[j - 1] if j <= len(p) else Subspace.zero(A.dim, A.field)


def nilpotency_index(A: AssocAlgebra) -> int:
    """Least n with A^n = 0."""
    return len(power_ideals(A)) + 1


def ideal_closure(A: AssocAlgebra, vectors: Sequence[Sequence]) -> Subspace:
    """Two-sided ideal generated by ``vectors``."""
    F = A.field
    cur = Subspace(A.dim, F, vectors)
    while True:
        new = list(cur.basis)
        for u in cur.basis:
            for j in range(A.dim):
                e = A.basis_vector(j)
                new.append(A.mul(u, e))
                new.append(A.mul(e, u))
        nxt = Subspace(A.dim, F, [v for v in new if any(v)])
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def is_ideal(A: AssocAlgebra, I: Subspace) -> bool:
    for u in I.basis:
        for j in range(A.dim):
            e = A.basis_vector(j)
            if A.mul(u, e) not in I or A.mul(e, u) not in I:
                return False
    return True


def quotient_algebra(A: AssocAlgebra, ideal: Subspace) -> AssocAlgebra:
    """A / I on the basis of coordinates that are not pivots of I."""
    if not is_ideal(A, ideal):
        raise NotAnIdeal("subspace is not a two-sided ideal")
    comp = ideal.complement_indices()
    pos = {k: n for n, k in enumerate(comp)}
    table = []
    for i in comp:
        row = []
        for j in comp:
            v = [A.field.zero] * A.dim
            for k, c in A.table[i][j].items():
                v[k] = c
            v = ideal.reduce(v)
            row.append({pos[k]: c for k, c in enumerate(v) if c != 0})
        table.append(row)
    levels = None
    if A.levels is not None:
        levels = [A.levels[k] for k in comp]
    gens = None
    if A.generators is not None:
        gens = [pos[g] for g in A.generators if g in pos]
        # a generator may have been absorbed into I; fall back to all vectors
        if len(gens) != len(A.generators):
            gens = None
    prov = f"{A.provenance}/I" if A.provenance else ""
    Q = AssocAlgebra(A.field, len(comp), table, [A.labels[k] for k in comp], None, gens, prov)
    if levels is not None and _levels_adapted(Q, levels):
        Q.levels = tuple(levels)
    return Q


def _levels_adapted(A: AssocAlgebra, levels: Sequence[int]) -> bool:
    pw = power_ideals(A)
    for s, term in enumerate(pw, start=1):
        idx = [k for k in range(A.dim) if levels[k] >= s]
        if len(idx) != term.dim:
            return False
        for k in idx:
            if A.basis_vector(k) not in term:
                return False
    return all(levels[k] <= len(pw) for k in range(A.dim))


def filtration_levels(A: AssocAlgebra) -> Optional[Tuple[int, ...]]:
    """Levels of the basis vectors if the basis is adapted to A ⊇ A^2 ⊇ ..."""
    pw = power_ideals(A)
    levels = []
    for k in range(A.dim):
        e = A.basis_vector(k)
        levels.append(max(s for s, term in enumerate(pw, start=1) if e in term))
    return tuple(levels) if _levels_adapted(A, levels) else None


def change_basis(A: AssocAlgebra, rows: Sequence[Sequence]) -> AssocAlgebra:
    """Rewrite ``A`` in the basis whose vectors (old coordinates) are ``rows``."""
    F = A.field
    rows = [list(r) for r in rows]
    if len(rows) != A.dim or rref(rows, F)[0] != A.dim:
        raise AssocError("change of basis must be invertible")
    cols = transpose(rows)
    table = []
    for a in range(A.dim):
        trow = []
        for b in range(A.dim):
            v = A.mul(rows[a], rows[b])
            sol = solve_affine(cols, v, A.dim, F)
            trow.append({k: c for k, c in enumerate(sol.particular) if c != 0})
        table.append(trow)
    return AssocAlgebra(F, A.dim, table, check=False)


def adapted_basis(A: AssocAlgebra) -> Tuple[AssocAlgebra, List[list]]:
    """Re-base A so that basis vectors of level >= s span A^s."""
    F = A.field
    pw = power_ideals(A)
    chosen: List[Tuple[int, list]] = []
    span = Subspace.zero(A.dim, F)
    for s in range(len(pw), 0, -1):
        layer = []
        cands = [A.basis_vector(k) for k in range(A.dim) if A.basis_vector(k) in pw[s - 1]]
        for row in cands + pw[s - 1].basis:
            if row not in span:
                layer.append(row)
                span = Subspace(A.dim, F, span.basis + [row])
        chosen = [(s, r) for r in layer] + chosen
    rows = [r for _, r in chosen]
    B = change_basis(A, rows)
    B.levels = tuple(s for s, _ in chosen)
    B.provenance = A.provenance
    return B, rows


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class InvariantFingerprint:
    power_dims: Tuple[int, ...]
    center_dim: int
    center_mod_powers: Tuple[int, ...]
    center_meet_powers: Tuple[int, ...]

    COMPONENTS = ("power_dims", "center_dim", "center_mod_powers", "center_meet_powers")

    def differences(self, other: "InvariantFingerprint") -> List[Tuple[str, object, object]]:
        out = []
        for name in self.COMPONENTS:
            a, b = getattr(self, name), getattr(other, name)
            if a != b:
                out.append((name, a, b))
        return out

    def as_lines(self) -> List[str]:
        return [
            f"power_dims = {self.power_dims}",
            f"dim Z = {self.center_dim}",
            f"center_mod_powers = {self.center_mod_powers}",
            f"center_meet_powers = {self.center_meet_powers}",
        ]


def fingerprint(A: AssocAlgebra) -> InvariantFingerprint:
    """Power-ideal dimensions, center dimension, and the center's position
    relative to the powers ``A^j`` for ``j = 2 .. nilpotency index``."""
    pw = power_ideals(A)
    Z = center(A)
    n = len(pw) + 1
    mod, meet = [], []
    for j in range(2, n + 1):
        Aj = power_term(A, j)
        s = (Z + Aj).dim
        mod.append(s - Aj.dim)
        meet.append(Z.dim + Aj.dim - s)
    return InvariantFingerprint(tuple(t.dim for t in pw), Z.dim, tuple(mod), tuple(meet))


# ---------------------------------------------------------------------------
# text format


_PROD_RE = re.compile(r"^e\.(\d+)\s*\*\s*e\.(\d+)\s*=\s*(.*)$")
_TERM_RE = re.compile(r"^([+-]?(?:\d+(?:/\d+)?)?)\*?e\.(\d+)$")


def parse_assoc_algebra(text: str) -> AssocAlgebra:
    """Parse the ``assoc`` file format::

        assoc
        field GF(3)
        dim 2
        e.1 * e.1 = 1*e.2
    """
    from .lie import ParseError

    F = None
    dim = None
    seen_header = False
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "assoc":
            seen_header = True
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
                raise ParseError("bad dimension", lineno) from None
            if dim < 1:
                raise ParseError("dimension must be positive", lineno)
            continue
        m = _PROD_RE.match(line)
        if not m or F is None or dim is None:
            raise ParseError(f"cannot parse {raw.strip()!r}", lineno)
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise ParseError("basis index out of range", lineno)
        terms = {}
        rhs = m.group(3).replace(" ", "").replace("+-", "-")
        if rhs not in ("", "0"):
            for tok in re.split(r"(?<=[^*/])(?=[+-])", rhs):
                tm = _TERM_RE.match(tok)
                if not tm:
                    raise ParseError(f"bad term {tok!r}", lineno)
                k = int(tm.group(2))
                if not 1 <= k <= dim:
                    raise ParseError("basis index out of range", lineno)
                s = tm.group(1)
                c = Fraction(1) if s in ("", "+") else Fraction(-1) if s == "-" else Fraction(s)
                terms[k - 1] = F.norm(terms.get(k - 1, F.zero) + F(c))
        entries.append((i - 1, j - 1, terms, lineno))
    if not seen_header:
        raise ParseError("missing 'assoc' header")
    if F is None or dim is None:
        raise ParseError("missing field/dim")
    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for i, j, terms, lineno in entries:
        if table[i][j]:
            raise ParseError(f"product e.{i + 1}*e.{j + 1} given twice", lineno)
        table[i][j] = terms
    try:
        return AssocAlgebra(F, dim, table)
    except AssocError as exc:
        raise ParseError(str(exc)) from None


def format_assoc_algebra(A: AssocAlgebra) -> str:
    from .lie import terms_text

    lines = ["assoc", f"field {A.field}", f"dim {A.dim}"]
    for i in range(A.dim):
        for j in range(A.dim):
            cell = A.table[i][j]
            if cell:
                lines.append(f"e.{i + 1} * e.{j + 1} = {terms_text(cell)}")
    return "\n".join(lines) + "\n"
