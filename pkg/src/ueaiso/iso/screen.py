"""Screening catalogs for isomorphic enveloping algebras.

Entries are first bucketed by invariants of gr L (Ω(L) determines gr L),
then pairs sharing a bucket are compared by fingerprints of Ω/Ω^t and,
over finite fields and on request, decided by filtered search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..assoc import InvariantFingerprint, fingerprint
from ..catalog import CatalogError, catalog_entry, catalog_get, catalog_names
from ..envelope import truncated_envelope
from ..field import FieldSpec, Subspace, nullspace
from ..lie import LieAlgebra, graded_algebra, lie_center, lower_central_series
from .graded import graded_iso_search
from .lifting import filtered_iso_search
from .maps import IsoVerdict, Status


class ScreenError(ValueError):
    pass


# ---------------------------------------------------------------------------
# invariants of gr L


def _solve_bracket_condition(L: LieAlgebra, U: Sequence[Sequence], W: Subspace) -> Subspace:
    """``{x : [x, u] in W for all u in U}``."""
    F = L.field
    d = L.dim
    rows = []
    for u in U:
        img = [L.bracket(L.basis_vector(i), u) for i in range(d)]
        # [x, u] = sum_i x_i img[i]; require its coordinates outside W to vanish
        for k in range(d):
            col = [W.reduce(img[i])[k] if W.dim else img[i][k] for i in range(d)]
            if any(col):
                rows.append(col)
    return Subspace(d, F, nullspace(rows, d, F))


def centralizer(L: LieAlgebra, U: Subspace) -> Subspace:
    return _solve_bracket_condition(L, U.basis, Subspace.zero(L.dim, L.field))


def upper_central_dims(L: LieAlgebra) -> Tuple[int, ...]:
    F = L.field
    basis = [L.basis_vector(i) for i in range(L.dim)]
    Z = Subspace.zero(L.dim, F)
    dims = []
    while True:
        nxt = _solve_bracket_condition(L, basis, Z)
        if nxt.dim == Z.dim:
            break
        Z = nxt
        dims.append(Z.dim)
        if Z.dim == L.dim:
            break
    return tuple(dims)


@dataclass(frozen=True)
class GrInvariants:
    component_dims: Tuple[int, ...]
    center_dim: int
    upper_central_dims: Tuple[int, ...]
    lcs_centralizer_dims: Tuple[int, ...]

    def text(self) -> str:
        return (
            f"dims={self.component_dims} center={self.center_dim} "
            f"upper={self.upper_central_dims} centralizers={self.lcs_centralizer_dims}"
        )


def gr_invariants(L: LieAlgebra) -> GrInvariants:
    """Isomorphism invariants of gr L, computable over any field."""
    G = graded_algebra(L)
    A = G.algebra
    lcs = lower_central_series(A)
    return GrInvariants(
        G.component_dims,
        lie_center(A).dim,
        upper_central_dims(A),
        tuple(centralizer(A, term).dim for term in lcs.terms[1:] if term.dim),
    )


# ---------------------------------------------------------------------------
# reports


@dataclass
class PairRow:
    a: str
    b: str
    verdict: IsoVerdict

    def line(self) -> str:
        return f"{self.a:<8} {self.b:<8} {self.verdict.summary()}"


@dataclass
class ScreenReport:
    field: FieldSpec
    truncation: Optional[int]
    buckets: List[List[str]]
    bucket_evidence: List[str]
    rows: List[PairRow] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)

    def surviving_pairs(self) -> List[Tuple[str, str]]:
        """Off-diagonal pairs sharing a gr bucket."""
        out = []
        for b in self.buckets:
            out.extend((b[i], b[j]) for i in range(len(b)) for j in range(i + 1, len(b)))
        return out

    def isomorphic_pairs(self) -> List[Tuple[str, str]]:
        return [(r.a, r.b) for r in self.rows if r.verdict.status is Status.ISOMORPHIC]

    def lines(self) -> List[str]:
        t = "class+1" if self.truncation is None else str(self.truncation)
        out = [f"field: {self.field}", f"truncation: {t}", "gr buckets:"]
        for b, ev in zip(self.buckets, self.bucket_evidence):
            out.append(f"  {{{', '.join(b)}}}  [{ev}]")
        pairs = self.surviving_pairs()
        out.append("surviving pairs: " + (", ".join(f"{{{a},{b}}}" for a, b in pairs) if pairs else "none"))
        if self.rows:
            out.append("pair verdicts:")
            out.extend("  " + r.line() for r in self.rows)
        for f in self.flags:
            out.append(f"FLAG: {f}")
        return out


def _entry_label(name: str, param) -> str:
    return name if param is None else f"{name}({param})"


def load_entries(dim: int, F: FieldSpec, params: Optional[Dict[str, Sequence]] = None) -> List[Tuple[str, LieAlgebra]]:
    """Catalog entries of a dimension over F; parametric ones at the given values."""
    params = params or {}
    out = []
    for name in catalog_names(dim):
        try:
            values = params.get(name)
            if values is None:
                values = [1] if catalog_entry(name).parametric else [None]
            for v in values:
                out.append((_entry_label(name, v), catalog_get(name, F, v)))
        except CatalogError as exc:
            if "characteristic" in str(exc) or "no bundled" in str(exc):
                continue
            raise
    return out


def gr_buckets(entries: Sequence[Tuple[str, LieAlgebra]], F: FieldSpec) -> Tuple[List[List[str]], List[str]]:
    """Partition entries by gr invariants; over finite fields confirm by graded search."""
    groups: Dict[GrInvariants, List[int]] = {}
    for n, (_, L) in enumerate(entries):
        groups.setdefault(gr_invariants(L), []).append(n)
    buckets, evidence = [], []
    for inv, members in groups.items():
        if not F.is_finite:
            buckets.append([entries[n][0] for n in members])
            evidence.append("gr invariants")
            continue
        parts: List[List[int]] = []
        for n in members:
            G = graded_algebra(entries[n][1])
            for part in parts:
                H = graded_algebra(entries[part[0]][1])
                if graded_iso_search(G, H) is not None:
                    part.append(n)
                    break
            else:
                parts.append([n])
        for part in parts:
            buckets.append([entries[n][0] for n in part])
            evidence.append("graded isomorphism" if len(part) > 1 else "gr invariants")
    order = sorted(range(len(buckets)), key=lambda k: [e[0] for e in entries].index(buckets[k][0]))
    return [buckets[k] for k in order], [evidence[k] for k in order]


def _fingerprint_verdict(fa: InvariantFingerprint, fb: InvariantFingerprint, t: int, F: FieldSpec) -> Optional[IsoVerdict]:
    diff = fa.differences(fb)
    if not diff:
        return None
    name, a, b = diff[0]
    return IsoVerdict(
        Status.NOT_ISOMORPHIC,
        f"invariant:{name}",
        t,
        F,
        witness={name: f"{a} vs {b}"},
    )


def _truncation(L: LieAlgebra, K: LieAlgebra, t: Optional[int]) -> int:
    if t is not None:
        return t
    return max(lower_central_series(L).nilpotency_class, lower_central_series(K).nilpotency_class) + 1


def screen_pairs(
    entries: Sequence[Tuple[str, LieAlgebra]],
    F: FieldSpec,
    t: Optional[int] = None,
    search: bool = False,
    budget: Optional[int] = 10**8,
) -> ScreenReport:
    """Bucket by gr, compare fingerprints inside buckets, optionally search.

    ``t=None`` uses class+1 of the pair.  Pairs in different buckets are not
    listed: their enveloping algebras differ because their gr algebras do.
    """
    for _, L in entries:
        if L.field != F:
            raise ScreenError("all entries must share the field")
    buckets, ev = gr_buckets(entries, F)
    report = ScreenReport(F, t, buckets, ev)
    by_label = dict(entries)
    fps: Dict[Tuple[str, int], InvariantFingerprint] = {}

    def fp(label: str, tt: int) -> InvariantFingerprint:
        key = (label, tt)
        if key not in fps:
            fps[key] = fingerprint(truncated_envelope(by_label[label], tt))
        return fps[key]

    for a, b in report.surviving_pairs():
        L, K = by_label[a], by_label[b]
        tt = _truncation(L, K, t)
        verdict = _fingerprint_verdict(fp(a, tt), fp(b, tt), tt, F)
        if verdict is None:
            if search and F.is_finite:
                verdict = filtered_iso_search(L, K, tt, budget=budget)
            else:
                why = "search not requested" if F.is_finite else "no search over infinite fields"
                verdict = IsoVerdict(Status.INCONCLUSIVE, "fingerprints agree", tt, F, detail=why)
        report.rows.append(PairRow(a, b, verdict))
    return report


# ---------------------------------------------------------------------------
# the verdict table


# Pairs that the classification lists as possibly isomorphic in characteristic 3.
CHAR3_LISTED = (("K6.6", "K6.11"), ("K6.7", "K6.12"), ("K6.17", "K6.18"), ("K6.23", "K6.25"))
CHAR2_LISTED = (("L5.3", "L5.5"), ("L5.6", "L5.7"))


def _nonsquare(F: FieldSpec):
    for x in F.elements():
        if x != 0 and not F.is_square(x):
            return x
    return None


def table_entries(dim: int, F: FieldSpec) -> List[Tuple[str, LieAlgebra]]:
    if dim not in (5, 6):
        raise ScreenError("tables exist for dimensions 5 and 6")
    if dim == 6 and F.is_finite and F.modulus == 2:
        raise ScreenError("dimension 6 needs characteristic other than 2")
    params = None
    if dim == 6:
        values = [0, 1]
        if F.is_finite:
            ns = _nonsquare(F)
            if ns is not None:
                values.append(ns)
        else:
            values.append(-1)
        params = {"K6.24": values}
    return load_entries(dim, F, params)


@dataclass
class IsoTable:
    report: ScreenReport
    listed: Tuple[Tuple[str, str], ...]

    def lines(self) -> List[str]:
        rep = self.report
        out = list(rep.lines())
        iso = rep.isomorphic_pairs()
        out.append("isomorphic off-diagonal pairs: " + (", ".join(f"{{{a},{b}}}" for a, b in iso) if iso else "none"))
        open_rows = [r for r in rep.rows if r.verdict.status is Status.INCONCLUSIVE]
        out.append(f"undecided pairs: {len(open_rows)}")
        return out


def enveloping_iso_table(F: FieldSpec, dim: int, budget: Optional[int] = 10**8) -> IsoTable:
    """Decide every catalog pair of a dimension over F (search over finite fields)."""
    entries = table_entries(dim, F)
    rep = screen_pairs(entries, F, None, search=F.is_finite, budget=budget)
    listed: Tuple[Tuple[str, str], ...] = ()
    if F.is_finite and F.modulus == 3 and dim == 6:
        listed = CHAR3_LISTED
    elif F.is_finite and F.modulus == 2 and dim == 5:
        listed = CHAR2_LISTED
    found = {frozenset(p) for p in rep.isomorphic_pairs()}
    for a, b in listed:
        st = next((r.verdict for r in rep.rows if {r.a, r.b} == {a, b}), None)
        if st is None:
            continue
        if frozenset((a, b)) in found:
            rep.flags.append(f"{{{a},{b}}}: isomorphic, agrees with the listed exceptional pair")
        elif st.status is Status.NOT_ISOMORPHIC:
            rep.flags.append(
                f"{{{a},{b}}}: DISAGREES with the listed exceptional pair ({st.summary()})"
            )
        else:
            rep.flags.append(f"{{{a},{b}}}: undecided ({st.summary()})")
    return IsoTable(rep, listed)


def exceptional_pair_report(F: FieldSpec, a: str, b: str, truncations: Sequence[int], budget=10**8) -> List[str]:
    """Run the search on a listed exceptional pair and flag (dis)agreement."""
    L, K = catalog_get(a, F), catalog_get(b, F)
    out = []
    for t in truncations:
        v = filtered_iso_search(L, K, t, budget=budget)
        if v.status is Status.ISOMORPHIC:
            flag = "agrees with the listed exceptional pair"
        elif v.status is Status.NOT_ISOMORPHIC:
            flag = "DISAGREES with the listed exceptional pair"
        else:
            flag = "undecided"
        out.append(f"{a} {b} t={t}: {v.summary()}; {flag}")
    return out
