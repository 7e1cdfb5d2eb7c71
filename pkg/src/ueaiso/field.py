"""Exact arithmetic over Q and GF(p), plus deterministic linear algebra.

Elements are plain Python values: ``fractions.Fraction`` for the rationals and
``int`` residues in ``[0, p)`` for prime fields.  Every routine takes the
:class:`FieldSpec` explicitly, so the same code path serves both kinds.

Matrices are lists of rows.  Pivoting is positional (first nonzero entry in
the leftmost unfinished column), never magnitude based, so results are
reproducible bit for bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

MAX_MODULUS = 2**31

Vector = List
Matrix = List[List]


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """``modulus == 0`` means Q; otherwise GF(modulus)."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus:
            if self.modulus >= MAX_MODULUS:
                raise FieldError(f"modulus {self.modulus} exceeds 2^31")
            if not _is_prime(self.modulus):
                raise FieldError(f"modulus {self.modulus} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``Q`` or ``GF(p)``."""
        s = text.strip().replace(" ", "")
        if s in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"GF\((\d+)\)", s)
        if not m:
            raise FieldError(f"bad field literal {text!r}; expected Q or GF(p)")
        return cls(int(m.group(1)))

    def __str__(self) -> str:
        return f"GF({self.modulus})" if self.modulus else "Q"

    @property
    def is_finite(self) -> bool:
        return self.modulus != 0

    @property
    def characteristic(self) -> int:
        return self.modulus

    @property
    def zero(self):
        return 0 if self.modulus else Fraction(0)

    @property
    def one(self):
        return 1 if self.modulus else Fraction(1)

    def elements(self) -> range:
        if not self.modulus:
            raise FieldError("Q is infinite")
        return range(self.modulus)

    def __call__(self, x):
        """Coerce an int, Fraction or ``a/b`` string into canonical form."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.modulus:
            if isinstance(x, Fraction):
                if x.denominator % self.modulus == 0:
                    raise ZeroDivisionError(f"{x} has no image in {self}")
                return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
            return int(x) % self.modulus
        return Fraction(x)

    def norm(self, x):
        """Reduce the result of raw ``+ - *`` arithmetic to canonical form."""
        return x % self.modulus if self.modulus else x

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.modulus:
            return pow(a, -1, self.modulus)
        return 1 / a

    def div(self, a, b):
        return self.norm(a * self.inv(b))

    def check(self, a) -> None:
        """Raise FieldError unless ``a`` is a canonical element of this field."""
        if self.modulus:
            if isinstance(a, bool) or not isinstance(a, (int, np.integer)) or not 0 <= a < self.modulus:
                raise FieldError(f"{a!r} is not an element of {self}")
        elif not isinstance(a, (Fraction, int)) or isinstance(a, bool):
            raise FieldError(f"{a!r} is not an element of {self}")

    def arith(self, a, b, op: str):
        """Checked binary arithmetic; ``op`` is one of add, sub, mul, div."""
        self.check(a)
        self.check(b)
        if not self.modulus:
            a, b = Fraction(a), Fraction(b)
        if op == "add":
            return self.norm(a + b)
        if op == "sub":
            return self.norm(a - b)
        if op == "mul":
            return self.norm(a * b)
        if op == "div":
            return self.div(a, b)
        raise ValueError(f"unknown operation {op!r}")

    def fmt(self, a) -> str:
        return str(a)

    def is_square(self, a) -> bool:
        if not self.modulus:
            raise FieldError("square test only implemented for prime fields")
        if a == 0 or self.modulus == 2:
            return True
        return pow(a, (self.modulus - 1) // 2, self.modulus) == 1


QQ = FieldSpec(0)


# ---------------------------------------------------------------------------
# row reduction


def _rref_generic(rows: Matrix, F: FieldSpec) -> Tuple[int, Matrix, List[int]]:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        if inv != 1:
            m[r] = [F.norm(x * inv) for x in m[r]]
        prow = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f != 0:
                    row = m[i]
                    m[i] = [F.norm(x - f * y) for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return r, m[:r], pivots


def rref_mod_p(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form of an int64 array over GF(p).

    Returns ``(reduced, pivots)`` where ``reduced`` has exactly ``len(pivots)``
    rows.  Entries must already lie in ``[0, p)``.
    """
    m = np.array(a, dtype=np.int64, copy=True) % p
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    nrows, ncols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        if inv != 1:
            m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(rows: Matrix, F: FieldSpec) -> Tuple[int, Matrix, List[int]]:
    """Return ``(rank, reduced_rows, pivot_columns)``; zero rows are dropped."""
    if not rows or not len(rows[0]):
        return 0, [], []
    if F.is_finite:
        red, piv = rref_mod_p(np.asarray(rows, dtype=np.int64), F.modulus)
        return len(piv), red.tolist(), piv
    return _rref_generic(rows, F)


def rank(rows: Matrix, F: FieldSpec) -> int:
    return rref(rows, F)[0]


def transpose(rows: Matrix) -> Matrix:
    return [list(c) for c in zip(*rows)]


def nullspace(a: Matrix, ncols: int, F: FieldSpec) -> Matrix:
    """Basis of ``{x : a x = 0}`` (``a`` has ``ncols`` columns), in echelon order."""
    if not a:
        return [[F.one if i == j else F.zero for j in range(ncols)] for i in range(ncols)]
    _, red, piv = rref(a, F)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [F.zero] * ncols
        v[free] = F.one
        for row, pc in zip(red, piv):
            if row[free] != 0:
                v[pc] = F.norm(-row[free])
        basis.append(v)
    return basis


@dataclass(frozen=True)
class AffineSolution:
    particular: tuple
    kernel: "Subspace"

    def __iter__(self) -> Iterator[tuple]:
        """Enumerate the whole solution set (finite fields only)."""
        F = self.kernel.field
        basis = self.kernel.basis
        for coeffs in _all_tuples(F, len(basis)):
            v = list(self.particular)
            for c, b in zip(coeffs, basis):
                if c:
                    v = [F.norm(x + c * y) for x, y in zip(v, b)]
            yield tuple(v)


def _all_tuples(F: FieldSpec, n: int) -> Iterator[tuple]:
    import itertools

    return itertools.product(F.elements(), repeat=n)


def solve_affine(a: Matrix, b: Sequence, ncols: int, F: FieldSpec) -> Optional[AffineSolution]:
    """Solve ``a x = b``.  Returns None when the system is infeasible."""
    if len(b) != len(a):
        raise ValueError("right-hand side length does not match row count")
    if not a:
        return AffineSolution(tuple([F.zero] * ncols), Subspace.full(ncols, F))
    aug = [list(row) + [F(bi) if not F.is_finite else bi % F.modulus] for row, bi in zip(a, b)]
    _, red, piv = rref(aug, F)
    if piv and piv[-1] == ncols:
        return None
    x = [F.zero] * ncols
    for row, pc in zip(red, piv):
        x[pc] = row[ncols]
    kern = nullspace([row[:ncols] for row in red], ncols, F)
    return AffineSolution(tuple(x), Subspace(ncols, F, kern))


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of F^n stored as a reduced row echelon basis."""

    __slots__ = ("ambient_dim", "field", "basis", "pivots")

    def __init__(self, ambient_dim: int, field: FieldSpec, vectors: Iterable[Sequence] = ()):
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        self.ambient_dim = ambient_dim
        self.field = field
        if vecs:
            _, red, piv = rref(vecs, field)
        else:
            red, piv = [], []
        self.basis: Matrix = red
        self.pivots: List[int] = piv

    @classmethod
    def full(cls, n: int, F: FieldSpec) -> "Subspace":
        return cls(n, F, [[F.one if i == j else F.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int, F: FieldSpec) -> "Subspace":
        return cls(n, F)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def reduce(self, v: Sequence) -> list:
        """Remainder of ``v`` after elimination against the basis."""
        F = self.field
        w = list(v)
        for row, pc in zip(self.basis, self.pivots):
            c = w[pc]
            if c != 0:
                w = [F.norm(x - c * y) for x, y in zip(w, row)]
        return w

    def __contains__(self, v) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(v in self for v in other.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.field == other.field
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.field, tuple(map(tuple, self.basis))))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self.field, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        # dim(U ∩ W) via kernel of [U; -W]
        F = self.field
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim, F)
        cols = transpose(self.basis + [[F.norm(-x) for x in w] for w in other.basis])
        kern = nullspace(cols, self.dim + other.dim, F)
        vecs = []
        for k in kern:
            v = [F.zero] * self.ambient_dim
            for c, u in zip(k[: self.dim], self.basis):
                if c:
                    v = [F.norm(x + c * y) for x, y in zip(v, u)]
            vecs.append(v)
        return Subspace(self.ambient_dim, F, vecs)

    def complement_indices(self) -> List[int]:
        """Coordinates not used as pivots: a deterministic complement basis."""
        piv = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in piv]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"


def field_arith(a, b, op: str, F: FieldSpec):
    return F.arith(a, b, op)
