"""Generator maps, homomorphism checks, certificates and verdicts."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..assoc import AssocAlgebra
from ..envelope import (
    EnvelopeElement,
    EnvelopeError,
    TruncatedEnvelope,
    element_text_e,
    parse_element,
    truncated_envelope,
)
from ..field import FieldSpec, rref
from ..lie import LieAlgebra, ParseError


class Status(enum.Enum):
    ISOMORPHIC = "Isomorphic"
    NOT_ISOMORPHIC = "NotIsomorphic"
    INCONCLUSIVE = "Inconclusive"
    CERTIFICATE_INVALID = "CertificateInvalid"


class GeneratorMap:
    """Images of every source basis vector in a target algebra.

    The target is a truncated envelope, another associative algebra (both
    with the commutator as bracket) or a Lie algebra.  Images are stored as
    coordinate vectors of the target basis.
    """

    def __init__(self, source: LieAlgebra, target, images: Sequence[Sequence]):
        if len(images) != source.dim:
            raise ValueError("one image per source basis vector is required")
        F = target.field
        self.source = source
        self.target = target
        self.images = [[F(x) if not F.is_finite else int(x) % F.modulus for x in v] for v in images]
        for v in self.images:
            if len(v) != target.dim:
                raise ValueError("image has the wrong length for the target")

    @classmethod
    def identity(cls, source: LieAlgebra, target: TruncatedEnvelope) -> "GeneratorMap":
        return cls(source, target, [target.gen(k).vector() for k in range(source.dim)])

    @classmethod
    def from_elements(cls, source: LieAlgebra, target: TruncatedEnvelope, elems: Sequence[EnvelopeElement]):
        return cls(source, target, [e.vector() for e in elems])

    @property
    def field(self) -> FieldSpec:
        return self.target.field

    def element(self, k: int):
        if isinstance(self.target, TruncatedEnvelope):
            return self.target.from_vector(self.images[k])
        return self.images[k]

    def image_text(self, k: int) -> str:
        T = self.target
        if isinstance(T, TruncatedEnvelope):
            return str(T.from_vector(self.images[k]))
        if isinstance(T, AssocAlgebra):
            return T.vector_text(self.images[k])
        terms = [T.labels[n] if c == 1 else f"{c}*{T.labels[n]}" for n, c in enumerate(self.images[k]) if c != 0]
        return " + ".join(terms) if terms else "0"

    def lines(self) -> List[str]:
        src = self.source.labels
        return [f"{src[k]} -> {self.image_text(k)}" for k in range(self.source.dim)]

    def map_file_text(self) -> str:
        """Serialise in the map-file format (envelope targets only)."""
        if not isinstance(self.target, TruncatedEnvelope):
            raise ValueError("map files describe maps into enveloping algebras")
        out = []
        for k in range(self.source.dim):
            out.append(f"e.{k + 1} -> {element_text_e(self.target.from_vector(self.images[k]))}")
        return "\n".join(out) + "\n"

    def transported(self, target: TruncatedEnvelope) -> "GeneratorMap":
        """Same PBW polynomials read in another truncation of the same envelope."""
        if not isinstance(self.target, TruncatedEnvelope):
            raise ValueError("only envelope maps can be transported")
        elems = []
        for v in self.images:
            terms = {self.target.monomials[n]: c for n, c in enumerate(v) if c != 0}
            elems.append(EnvelopeElement(target, terms))
        return GeneratorMap.from_elements(self.source, target, elems)


def _target_bracket(T, u, v):
    if isinstance(T, LieAlgebra):
        return T.bracket(u, v)
    return T.commutator(u, v)


@dataclass
class HomCheck:
    ok: bool
    pair: Optional[Tuple[int, int]] = None  # 1-based
    residual: Optional[list] = None
    residual_text: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_lie_hom(m: GeneratorMap) -> HomCheck:
    """Verify ``[f(x_i), f(x_j)] = sum_k c_ij^k f(x_k)`` for all i < j."""
    L, T = m.source, m.target
    F = T.field
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = _target_bracket(T, m.images[i], m.images[j])
            rhs = [F.zero] * T.dim
            for k, c in L.bracket_basis(i, j).items():
                rhs = [F.norm(a + c * b) for a, b in zip(rhs, m.images[k])]
            res = [F.norm(a - b) for a, b in zip(lhs, rhs)]
            if any(res):
                if isinstance(T, TruncatedEnvelope):
                    text = str(T.from_vector(res))
                elif isinstance(T, AssocAlgebra):
                    text = T.vector_text(res)
                else:
                    text = " + ".join(f"{c}*{T.labels[n]}" for n, c in enumerate(res) if c)
                return HomCheck(False, (i + 1, j + 1), res, text)
    return HomCheck(True)


@dataclass
class InducedMap:
    matrix: List[list]  # row n = image of source basis vector n
    rank: int
    source_dim: int
    target_dim: int

    @property
    def bijective(self) -> bool:
        return self.rank == self.source_dim == self.target_dim


def induced_matrix(m: GeneratorMap, t: Optional[int] = None, source_env: Optional[TruncatedEnvelope] = None) -> InducedMap:
    """Matrix of the induced map Ω(L)/Ω^t -> target on PBW bases.

    Each monomial ``x_{i1}...x_{ik}`` goes to ``f(x_{i1})...f(x_{ik})``.
    """
    T = m.target
    if isinstance(T, LieAlgebra):
        raise ValueError("induced maps need an associative target")
    if source_env is None:
        if t is None:
            t = getattr(T, "t", None)
        if t is None:
            raise ValueError("truncation level required")
        source_env = truncated_envelope(m.source.over(T.field), t)
    F = T.field
    memo: Dict[tuple, list] = {}

    def image(mono: tuple) -> list:
        hit = memo.get(mono)
        if hit is None:
            if len(mono) == 1:
                hit = list(m.images[mono[0]])
            else:
                hit = T.mul(m.images[mono[0]], image(mono[1:]))
            memo[mono] = hit
        return hit

    rows = [image(mono) for mono in source_env.monomials]
    rk = rref(rows, F)[0] if rows else 0
    return InducedMap(rows, rk, source_env.dim, T.dim)


@dataclass
class IsoVerdict:
    status: Status
    evidence: str
    truncation: Optional[int]
    field: FieldSpec
    certificate: Optional[GeneratorMap] = None
    witness: Optional[dict] = None
    nodes: int = 0
    promoted: Optional[bool] = None
    detail: str = ""

    @property
    def exit_code(self) -> int:
        return 2 if self.status is Status.INCONCLUSIVE else 0

    def summary(self) -> str:
        t = f" at t={self.truncation}" if self.truncation is not None else ""
        return f"{self.status.value} ({self.evidence}){t} over {self.field}"

    def lines(self) -> List[str]:
        out = [f"verdict: {self.summary()}"]
        if self.detail:
            out.append(f"detail: {self.detail}")
        if self.witness:
            for k in sorted(self.witness):
                out.append(f"witness.{k}: {self.witness[k]}")
        if self.nodes:
            out.append(f"nodes: {self.nodes}")
        if self.certificate is not None:
            out.append("certificate:")
            out.extend("  " + ln for ln in self.certificate.lines())
        if self.promoted is not None:
            out.append(f"promoted: {'yes' if self.promoted else 'no'}")
        return out


def _bijective_hom(m: GeneratorMap) -> Tuple[HomCheck, Optional[InducedMap]]:
    hom = check_lie_hom(m)
    if not hom:
        return hom, None
    return hom, induced_matrix(m)


def verify_certificate(L: LieAlgebra, K: LieAlgebra, t: int, m: GeneratorMap) -> IsoVerdict:
    """Replay a certificate: a Lie homomorphism whose induced map is bijective.

    A failed certificate never proves non-isomorphism.  Promotion re-checks
    the same PBW polynomials at t+1 and t+2.
    """
    F = m.field
    hom, ind = _bijective_hom(m)
    if not hom:
        return IsoVerdict(
            Status.CERTIFICATE_INVALID,
            "certificate",
            t,
            F,
            m,
            detail=f"relation ({hom.pair[0]},{hom.pair[1]}) violated, residual {hom.residual_text}",
        )
    if not ind.bijective:
        return IsoVerdict(
            Status.CERTIFICATE_INVALID,
            "certificate",
            t,
            F,
            m,
            detail=f"induced map has rank {ind.rank}, dimensions {ind.source_dim} -> {ind.target_dim}",
        )
    promoted = None
    if isinstance(m.target, TruncatedEnvelope):
        promoted = True
        for t2 in (t + 1, t + 2):
            E2 = truncated_envelope(K.over(F), t2)
            m2 = m.transported(E2)
            h2, i2 = _bijective_hom(m2)
            if not h2 or not i2.bijective:
                promoted = False
                break
    return IsoVerdict(Status.ISOMORPHIC, "certificate", t, F, m, promoted=promoted,
                      detail=f"induced map bijective, rank {ind.rank}")


# ---------------------------------------------------------------------------
# map files

_MAP_RE = re.compile(r"^e\.(\d+)\s*->\s*(.+)$")


def parse_map_file(text: str, source: LieAlgebra, target: TruncatedEnvelope) -> GeneratorMap:
    """Parse ``e.i -> <polynomial>`` lines; unlisted basis vectors map to ``e.i``."""
    images: Dict[int, EnvelopeElement] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        mm = _MAP_RE.match(line)
        if not mm:
            raise ParseError(f"cannot parse map line {raw.strip()!r}", lineno)
        k = int(mm.group(1)) - 1
        if not 0 <= k < source.dim:
            raise ParseError(f"basis index {k + 1} out of range", lineno)
        if k in images:
            raise ParseError(f"image of e.{k + 1} given twice", lineno)
        try:
            images[k] = parse_element(mm.group(2), target)
        except (EnvelopeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), lineno) from None
    elems = [images.get(k, target.gen(k)) for k in range(source.dim)]
    return GeneratorMap.from_elements(source, target, elems)
