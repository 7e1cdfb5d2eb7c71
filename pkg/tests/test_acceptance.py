"""Acceptance criteria, one PASS/FAIL line each.

Every comparison is exact (tolerance 0): the quantities are dimensions,
verdicts and flags.  Run with ``pytest tests/test_acceptance.py`` (lines appear
in the terminal summary) or ``python tests/test_acceptance.py``.
"""

import sys

from ueaiso.assoc import center, fingerprint, ideal_closure, quotient_algebra
from ueaiso.catalog import DIM6_FAMILIES, catalog_get
from ueaiso.envelope import truncated_envelope
from ueaiso.field import FieldSpec
from ueaiso.iso.lifting import filtered_iso_search
from ueaiso.iso.maps import Status, check_lie_hom, parse_map_file, verify_certificate
from ueaiso.iso.screen import exceptional_pair_report, gr_buckets, load_entries
from ueaiso.lie import lcs_term

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover
    ACCEPTANCE_LINES = []

TOLERANCE = 0  # all checks are exact integer or verdict comparisons

Q = FieldSpec.parse("Q")
GF2, GF3, GF5 = FieldSpec.gf(2), FieldSpec.gf(3), FieldSpec.gf(5)


def _record(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _center_dims(names, t, F):
    return tuple(center(truncated_envelope(catalog_get(n, F), t)).dim for n in names)


def _map(src, tgt, F, t, text):
    L, K = catalog_get(src, F), catalog_get(tgt, F)
    return L, K, parse_map_file(text, L, truncated_envelope(K, t))


def test_criterion_1_family1_centers():
    names = ("K6.3", "K6.5", "K6.10")
    got = {str(F): _center_dims(names, 4, F) for F in (Q, GF5)}
    ok = all(v == (30, 29, 28) for v in got.values())
    _record(1, ok, f"dim Z(Ω/Ω^4) for K3,K5,K10: {got} (expected (30, 29, 28))")


def test_criterion_2_family2_centers():
    names = ("K6.6", "K6.7", "K6.11", "K6.12")
    got = {str(F): _center_dims(names, 5, F) for F in (Q, GF5)}
    ok = all(v == (29, 29, 28, 28) for v in got.values())
    _record(2, ok, f"dim Z(Ω/Ω^5) for K6,K7,K11,K12: {got} (expected (29, 29, 28, 28))")


def _pairs(buckets):
    return sorted(tuple(sorted((b[i], b[j]))) for b in buckets for i in range(len(b)) for j in range(i + 1, len(b)))


def test_criterion_3_dim5_screening():
    want = [("L5.3", "L5.5"), ("L5.6", "L5.7")]
    got = {str(F): _pairs(gr_buckets(load_entries(5, F), F)[0]) for F in (Q, GF2, GF3, GF5)}
    ok = all(v == want for v in got.values())
    _record(3, ok, f"surviving pairs over Q, GF(2), GF(3), GF(5): {got[str(Q)]} everywhere={ok}")


def test_criterion_4_dim6_families():
    want = sorted(sorted(f) for f in DIM6_FAMILIES)
    got = {}
    for F in (Q, GF3, GF5):
        buckets, _ = gr_buckets(load_entries(6, F, {"K6.24": [1]}), F)
        got[str(F)] = sorted(sorted(n.split("(")[0] for n in b) for b in buckets)
    ok = all(v == want for v in got.values())
    _record(4, ok, f"gr buckets over Q, GF(3), GF(5) equal the six families: {ok}")


def test_criterion_5_char2_certificates():
    maps = (("L5.3", "L5.5", "e.3 -> e.3 + e.1^2\n"), ("L5.7", "L5.6", "e.2 -> e.2 + e.1^2\n"))
    accepted = []
    for a, b, text in maps:
        for t in (4, 5, 6):
            L, K, m = _map(a, b, GF2, t, text)
            accepted.append(verify_certificate(L, K, t, m).status is Status.ISOMORPHIC)
    failing = []
    notes = []
    for a, b, text in maps:
        for F in (GF3, GF5):
            for t in (4, 5, 6):
                L, K, m = _map(a, b, F, t, text)
                bad = not check_lie_hom(m).ok
                if t == 4 and a == "L5.7":
                    # the residual 2*x1*x4 has weight 4 and vanishes in Ω/Ω^4
                    notes.append(bad)
                    continue
                failing.append(bad)
    ok = all(accepted) and all(failing)
    _record(5, ok, f"GF(2) accepts {sum(accepted)}/6; GF(3), GF(5) reject {sum(failing)}/{len(failing)} "
                   f"(L7->L6 at t=4 lies below the residual's weight)")


def test_criterion_6_char3_certificates():
    cases = [("K6.6", "K6.11", "e.3 -> e.3 + e.1^3\n", t) for t in (5, 6)]
    cases += [("K6.7", "K6.12", "e.3 -> e.3 + e.1^3\n", t) for t in (5, 6)]
    cases += [("K6.17", "K6.18", "e.2 -> e.2 + e.1^3\n", 6)]
    accepted = []
    rejected = []
    for a, b, text, t in cases:
        L, K, m = _map(a, b, GF3, t, text)
        accepted.append(verify_certificate(L, K, t, m).status is Status.ISOMORPHIC)
        L, K, m = _map(a, b, GF5, t, text)
        rejected.append(not check_lie_hom(m).ok)
    ok = all(accepted) and all(rejected)
    _record(6, ok, f"GF(3) accepts {sum(accepted)}/{len(cases)}; GF(5) rejects {sum(rejected)}/{len(cases)}")


def test_criterion_7_nonisomorphism_by_search():
    cases = [("K6.6", None, "K6.7", None, 5), ("K6.11", None, "K6.12", None, 5),
             ("K6.17", None, "K6.18", None, 6), ("K6.9", None, "K6.24", 1, 4)]
    got = []
    for a, pa, b, pb, t in cases:
        v = filtered_iso_search(catalog_get(a, GF5, pa), catalog_get(b, GF5, pb), t)
        got.append((a, b, t, v.status.value, v.evidence, v.nodes))
    ok = all(g[3] == "NotIsomorphic" and g[4] == "exhausted-search" for g in got)
    _record(7, ok, "; ".join(f"{a}/{b} t={t}: {s} ({e}, {n} nodes)" for a, b, t, s, e, n in got))


def test_criterion_8_k24_parameter_law():
    base = catalog_get("K6.24", GF5, 1)
    iso = filtered_iso_search(base, catalog_get("K6.24", GF5, 4), 4)
    non = filtered_iso_search(base, catalog_get("K6.24", GF5, 2), 4)
    ok = iso.status is Status.ISOMORPHIC and non.status is Status.NOT_ISOMORPHIC
    _record(8, ok, f"K24(1)~K24(4): {iso.summary()}; K24(1)~K24(2): {non.summary()}")


def _k13_quotient(F):
    L = catalog_get("K6.13", F)
    E = truncated_envelope(L, 5)
    gens = [E.element({(k,): c for k, c in enumerate(v) if c}).vector() for v in lcs_term(L, 4).basis]
    return quotient_algebra(E, ideal_closure(E, gens))


def test_criterion_9_quotient_reduction():
    fq = fingerprint(_k13_quotient(Q))
    fl = fingerprint(truncated_envelope(catalog_get("L5.5", Q), 5))
    v = filtered_iso_search(catalog_get("L5.5", GF3), _k13_quotient(GF3), 5)
    ok = fq == fl and v.status is Status.ISOMORPHIC
    _record(9, ok, f"fingerprints equal over Q: {fq == fl}; GF(3) search: {v.summary()}")


def test_criterion_10_property_suites():
    import pathlib

    import pytest

    here = pathlib.Path(__file__).with_name("test_properties.py")
    code = pytest.main(["-q", "-p", "no:cacheprovider", str(here)])
    _record(10, code == 0, f"property suite exit status {int(code)}")


def test_criterion_11_open_question_guardrail():
    lines = exceptional_pair_report(GF3, "K6.23", "K6.25", (4, 5))
    definite = all(("Isomorphic" in ln and "Inconclusive" not in ln) for ln in lines)
    flagged = all(("agrees" in ln or "DISAGREES" in ln) for ln in lines)
    _record(11, definite and flagged, " | ".join(lines))


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main(["-q", "-s", __file__]))
