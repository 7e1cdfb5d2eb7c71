import pytest

from ueaiso.catalog import DIM6_FAMILIES, catalog_get
from ueaiso.field import FieldSpec
from ueaiso.iso.maps import Status
from ueaiso.iso.screen import (
    ScreenError,
    centralizer,
    enveloping_iso_table,
    gr_buckets,
    gr_invariants,
    load_entries,
    screen_pairs,
    table_entries,
    upper_central_dims,
)
from ueaiso.field import Subspace
from ueaiso.lie import lie_center

Q = FieldSpec.parse("Q")
GF2, GF3, GF5 = FieldSpec.gf(2), FieldSpec.gf(3), FieldSpec.gf(5)


def _nontrivial(buckets):
    return sorted(sorted(b) for b in buckets if len(b) > 1)


def test_upper_central_series_heisenberg_chain():
    L = catalog_get("L5.7", Q)
    assert upper_central_dims(L) == (1, 2, 3, 5)


def test_centralizer_of_whole_algebra_is_center():
    L = catalog_get("K6.9", Q)
    full = Subspace(L.dim, Q, [L.basis_vector(i) for i in range(L.dim)])
    assert centralizer(L, full) == Subspace(L.dim, Q, lie_center(L).basis)
    assert centralizer(L, full).dim == 3


def test_gr_invariants_separate_dim5_class3():
    a = gr_invariants(catalog_get("L5.3", Q))
    b = gr_invariants(catalog_get("L5.5", Q))
    c = gr_invariants(catalog_get("L5.9", Q))
    assert a == b
    assert a != c


@pytest.mark.parametrize("F", [Q, GF2, GF5])
def test_dim5_buckets(F):
    buckets, _ = gr_buckets(load_entries(5, F), F)
    assert _nontrivial(buckets) == [["L5.3", "L5.5"], ["L5.6", "L5.7"]]


@pytest.mark.parametrize("F", [Q, GF5])
def test_dim6_buckets_are_the_families(F):
    entries = load_entries(6, F, {"K6.24": [1]})
    buckets, _ = gr_buckets(entries, F)
    got = _nontrivial([[n.split("(")[0] for n in b] for b in buckets])
    assert got == sorted(sorted(f) for f in DIM6_FAMILIES)


def test_dim6_skipped_in_char2():
    assert load_entries(6, GF2) == []


def test_screen_without_search_leaves_pairs_open():
    rep = screen_pairs(load_entries(5, GF5), GF5)
    assert rep.surviving_pairs() == [("L5.3", "L5.5"), ("L5.6", "L5.7")]
    assert "surviving pairs: {L5.3,L5.5}, {L5.6,L5.7}" in rep.lines()


@pytest.mark.parametrize("F,expected", [(GF2, [("L5.3", "L5.5"), ("L5.6", "L5.7")]), (GF5, [])])
def test_dim5_tables(F, expected):
    table = enveloping_iso_table(F, 5)
    assert table.report.isomorphic_pairs() == expected
    assert "undecided pairs: 0" in table.lines()


def test_dim5_char2_flags_agree():
    flags = enveloping_iso_table(GF2, 5).report.flags
    assert len(flags) == 2 and all("agrees" in f for f in flags)


def test_k24_parameters_use_nonsquare():
    names = [n for n, _ in table_entries(6, GF5)]
    assert [n for n in names if n.startswith("K6.24")] == ["K6.24(0)", "K6.24(1)", "K6.24(2)"]


def test_table_errors():
    with pytest.raises(ScreenError):
        table_entries(4, GF3)
    with pytest.raises(ScreenError):
        table_entries(6, GF2)


def test_fingerprint_screen_over_rationals():
    rep = screen_pairs(load_entries(5, Q), Q, 4)
    assert {r.verdict.status for r in rep.rows} <= {Status.NOT_ISOMORPHIC, Status.INCONCLUSIVE}
