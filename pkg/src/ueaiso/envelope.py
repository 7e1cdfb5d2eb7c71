"""Truncated augmentation ideals Ω(L)/Ω^t(L) on weighted PBW monomials.

A monomial is a non-decreasing tuple of 0-based Lie basis indices.  Its
weight is the sum of the factors' weights; monomials of weight >= t vanish.
Straightening relies on a homogeneous basis ordered by non-decreasing
weight, so that every bracket ``[x_a, x_b]`` is a combination of basis
vectors of weight at least ``w_a + w_b`` and larger index than both.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .assoc import AssocAlgebra
from .field import FieldSpec
from .lie import LieAlgebra, LieError, validate

Monomial = Tuple[int, ...]
Poly = Dict[Monomial, object]


class EnvelopeError(LieError):
    pass


def monomial_weight(m: Monomial, weights: Sequence[int]) -> int:
    return sum(weights[i] for i in m)


def monomial_text(m: Monomial, labels: Optional[Sequence[str]] = None) -> str:
    """``(0, 0, 3)`` -> ``x1^2*x4``."""
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        name = labels[m[i]] if labels else f"x{m[i] + 1}"
        parts.append(name if j - i == 1 else f"{name}^{j - i}")
        i = j
    return "*".join(parts)


def _check_weights(L: LieAlgebra) -> Tuple[int, ...]:
    if L.weights is None:
        raise EnvelopeError("Lie algebra has no weights; use a homogeneous basis first")
    rep = validate(L)
    if not rep.ok:
        raise EnvelopeError(f"weights unusable for straightening: {rep.first()}")
    return L.weights


def pbw_basis(L: LieAlgebra, t: int) -> List[Monomial]:
    """All PBW monomials of weight 1..t-1, sorted by (weight, degree, indices)."""
    if t < 2:
        raise EnvelopeError("truncation level must be at least 2")
    w = _check_weights(L)
    out: List[Monomial] = []

    def extend(m: Monomial, start: int, wt: int):
        for i in range(start, L.dim):
            nw = wt + w[i]
            if nw >= t:
                break
            n = m + (i,)
            out.append(n)
            extend(n, i, nw)

    extend((), 0, 0)
    out.sort(key=lambda m: (monomial_weight(m, w), len(m), m))
    return out


class Straightener:
    """Memoised rewriting of words into PBW normal form modulo weight >= t."""

    def __init__(self, L: LieAlgebra, t: int):
        self.L = L
        self.t = t
        self.w = _check_weights(L)
        self.F = L.field
        self._insert: Dict[Tuple[int, Monomial], Poly] = {}
        self._brackets = {
            (a, b): L.bracket_basis(a, b) for a in range(L.dim) for b in range(L.dim) if a > b
        }

    def weight(self, m: Monomial) -> int:
        return monomial_weight(m, self.w)

    def insert(self, a: int, m: Monomial) -> Poly:
        """Normal form of ``x_a * m`` for a sorted monomial ``m``."""
        key = (a, m)
        hit = self._insert.get(key)
        if hit is not None:
            return hit
        F = self.F
        if self.w[a] + self.weight(m) >= self.t:
            res: Poly = {}
        elif not m or a <= m[0]:
            res = {(a,) + m: F.one}
        else:
            # x_a x_b r = x_b (x_a r) + [x_a, x_b] r
            b, rest = m[0], m[1:]
            res = {}
            for n, c in self.insert(a, rest).items():
                for n2, c2 in self.insert(b, n).items():
                    res[n2] = res.get(n2, 0) + c * c2
            for k, c in self._brackets[(a, b)].items():
                for n, c2 in self.insert(k, rest).items():
                    res[n] = res.get(n, 0) + c * c2
            res = {n: F.norm(c) for n, c in res.items() if F.norm(c) != 0}
        self._insert[key] = res
        return res

    def mul_monomials(self, m1: Monomial, m2: Monomial) -> Poly:
        if self.weight(m1) + self.weight(m2) >= self.t:
            return {}
        cur: Poly = {m2: self.F.one}
        for a in reversed(m1):
            nxt: Poly = {}
            for n, c in cur.items():
                for n2, c2 in self.insert(a, n).items():
                    nxt[n2] = nxt.get(n2, 0) + c * c2
            cur = {n: self.F.norm(c) for n, c in nxt.items() if self.F.norm(c) != 0}
        return cur

    def word(self, indices: Iterable[int]) -> Poly:
        """Normal form of an arbitrary product ``x_{i1} x_{i2} ...``."""
        cur: Poly = {(): self.F.one}
        for a in reversed(list(indices)):
            nxt: Poly = {}
            for n, c in cur.items():
                for n2, c2 in self.insert(a, n).items():
                    nxt[n2] = nxt.get(n2, 0) + c * c2
            cur = {n: self.F.norm(c) for n, c in nxt.items() if self.F.norm(c) != 0}
        return cur


class TruncatedEnvelope(AssocAlgebra):
    """Ω(L)/Ω^t(L) as a non-unital nilpotent associative algebra."""

    def __init__(self, L: LieAlgebra, t: int):
        self.source = L
        self.t = t
        self.straightener = Straightener(L, t)
        self.monomials = pbw_basis(L, t)
        self.index = {m: n for n, m in enumerate(self.monomials)}
        w = self.straightener.w
        table = []
        for m1 in self.monomials:
            row = []
            for m2 in self.monomials:
                prod = self.straightener.mul_monomials(m1, m2)
                row.append({self.index[n]: c for n, c in prod.items()})
            table.append(row)
        levels = [monomial_weight(m, w) for m in self.monomials]
        gens = [n for n, m in enumerate(self.monomials) if len(m) == 1 and w[m[0]] == 1]
        labels = [monomial_text(m, L.labels) for m in self.monomials]
        name = L.name or "L"
        super().__init__(
            L.field,
            len(self.monomials),
            table,
            labels=labels,
            levels=levels,
            generators=gens,
            provenance=f"Omega({name})/Omega^{t}",
            check=False,
        )

    def __repr__(self) -> str:
        return f"<TruncatedEnvelope {self.provenance} dim={self.dim} over {self.field}>"

    def weight_of(self, n: int) -> int:
        return self.levels[n]

    def element(self, poly: Poly) -> "EnvelopeElement":
        return EnvelopeElement(self, poly)

    def gen(self, k: int) -> "EnvelopeElement":
        """The degree-1 element x_k (0-based)."""
        return EnvelopeElement(self, {(k,): self.field.one})

    def word(self, indices: Iterable[int]) -> "EnvelopeElement":
        return EnvelopeElement(self, self.straightener.word(indices))

    def from_vector(self, v: Sequence) -> "EnvelopeElement":
        return EnvelopeElement(self, {self.monomials[n]: c for n, c in enumerate(v) if c != 0})

    def table_lines(self) -> List[str]:
        out = []
        for i in range(self.dim):
            for j in range(self.dim):
                cell = self.table[i][j]
                if cell:
                    rhs = self.from_vector([cell.get(k, 0) for k in range(self.dim)])
                    out.append(f"{self.labels[i]} . {self.labels[j]} = {rhs}")
        return out


def truncated_envelope(L: LieAlgebra, t: Optional[int] = None) -> TruncatedEnvelope:
    if t is None:
        t = L.nilpotency_class + 1
    return TruncatedEnvelope(L, t)


class StraighteningContext:
    """Table-free parent for elements produced by :func:`straighten`."""

    def __init__(self, L: LieAlgebra, t: int):
        self.source = L
        self.t = t
        self.field = L.field
        self.straightener = Straightener(L, t)
        self.monomials = None

    def word(self, indices: Iterable[int]) -> "EnvelopeElement":
        return EnvelopeElement(self, self.straightener.word(indices))


def straighten(word: Sequence[int], L: LieAlgebra, t: int) -> "EnvelopeElement":
    """PBW normal form of the word ``x_{i1} ... x_{ik}`` (0-based indices)."""
    return StraighteningContext(L, t).word(word)


class EnvelopeElement:
    """Finite combination of PBW monomials in a fixed truncated envelope."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: TruncatedEnvelope, terms: Poly):
        F = parent.field
        t = parent.t
        w = parent.straightener.w
        clean = {}
        for m, c in terms.items():
            c = F.norm(c)
            if c != 0 and monomial_weight(m, w) < t:
                clean[tuple(m)] = c
        self.parent = parent
        self.terms = clean

    def _same(self, other: "EnvelopeElement"):
        if not isinstance(other, EnvelopeElement):
            return NotImplemented
        p, q = self.parent, other.parent
        if p is not q and (p.source != q.source or p.t != q.t):
            raise EnvelopeError("elements belong to different envelopes")
        return None

    def __add__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return EnvelopeElement(self.parent, out)

    def __neg__(self):
        return EnvelopeElement(self.parent, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "EnvelopeElement":
        c = self.parent.field(c)
        return EnvelopeElement(self.parent, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self._same(other) is NotImplemented:
            return NotImplemented
        S = self.parent.straightener
        out: Poly = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                for n, c in S.mul_monomials(m1, m2).items():
                    out[n] = out.get(n, 0) + a * b * c
        return EnvelopeElement(self.parent, out)

    def bracket(self, other: "EnvelopeElement") -> "EnvelopeElement":
        return self * other - other * self

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, EnvelopeElement) and self.terms == other.terms and self.parent.t == other.parent.t

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def weight(self) -> Optional[int]:
        """Least weight of a monomial present (None for zero)."""
        w = self.parent.straightener.w
        return min((monomial_weight(m, w) for m in self.terms), default=None)

    def vector(self) -> list:
        P = self.parent
        if P.monomials is None:
            raise EnvelopeError("vector coordinates need a full envelope")
        v = [P.field.zero] * P.dim
        for m, c in self.terms.items():
            v[P.index[m]] = c
        return v

    def sorted_terms(self) -> List[Tuple[Monomial, object]]:
        w = self.parent.straightener.w
        return sorted(self.terms.items(), key=lambda mc: (monomial_weight(mc[0], w), len(mc[0]), mc[0]))

    def __str__(self) -> str:
        labels = self.parent.source.labels
        out = ""
        for m, c in self.sorted_terms():
            text = monomial_text(m, labels)
            if c == 1:
                term, neg = text, False
            elif not self.parent.field.is_finite and c < 0:
                term, neg = (text if c == -1 else f"{-c}*{text}"), True
            else:
                term, neg = f"{c}*{text}", False
            if not out:
                out = f"-{term}" if neg else term
            else:
                out += f" - {term}" if neg else f" + {term}"
        return out or "0"

    def __repr__(self) -> str:
        return f"EnvelopeElement({self})"


def envelope_bracket(a: EnvelopeElement, b: EnvelopeElement) -> EnvelopeElement:
    return a.bracket(b)


# ---------------------------------------------------------------------------
# polynomial text, as used by map files: ``2*e.1^2*e.4 + e.3``

_FACTOR_RE = re.compile(r"^(?:e\.|x)(\d+)(?:\^(\d+))?$")


def parse_element(text: str, env: TruncatedEnvelope) -> EnvelopeElement:
    """Parse a polynomial in ``e.i`` (or ``xi``) generators; words are straightened."""
    F = env.field
    s = text.replace(" ", "")
    if not s:
        raise EnvelopeError("empty polynomial")
    terms = re.split(r"(?<=.)(?=[+-])", s)
    total = EnvelopeElement(env, {})
    for term in terms:
        sign = 1
        if term[0] in "+-":
            sign = -1 if term[0] == "-" else 1
            term = term[1:]
        if not term:
            raise EnvelopeError(f"dangling sign in {text!r}")
        factors = term.split("*")
        coeff = Fraction(sign)
        word: List[int] = []
        for f in factors:
            m = _FACTOR_RE.match(f)
            if m:
                k = int(m.group(1)) - 1
                if not 0 <= k < env.source.dim:
                    raise EnvelopeError(f"generator index {k + 1} out of range")
                word.extend([k] * int(m.group(2) or 1))
            else:
                try:
                    coeff *= Fraction(f)
                except (ValueError, ZeroDivisionError):
                    raise EnvelopeError(f"bad factor {f!r} in {text!r}") from None
        if not word:
            raise EnvelopeError("constant terms are not allowed (the algebra is non-unital)")
        total = total + env.word(word).scale(F(coeff))
    return total


def element_text_e(x: EnvelopeElement) -> str:
    """Render in the ``e.i`` notation of map files."""
    out = []
    for m, c in x.sorted_terms():
        mono = monomial_text(m, [f"e.{i + 1}" for i in range(x.parent.source.dim)])
        out.append(f"{c}*{mono}")
    return " + ".join(out) if out else "0"
