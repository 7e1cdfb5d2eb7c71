import pytest

from ueaiso.assoc import (
    AssocAlgebra,
    NotAnIdeal,
    center,
    center_bruteforce,
    fingerprint,
    format_assoc_algebra,
    ideal_closure,
    is_associative,
    parse_assoc_algebra,
    power_ideals,
    quotient_algebra,
)
from ueaiso.catalog import catalog_get
from ueaiso.envelope import truncated_envelope
from ueaiso.field import FieldSpec, Subspace
from ueaiso.lie import ParseError, abelian

Q = FieldSpec.parse("Q")
GF5 = FieldSpec.gf(5)


@pytest.mark.parametrize("F", [Q, GF5])
@pytest.mark.parametrize("name,dim_z", [("K6.3", 30), ("K6.5", 29), ("K6.10", 28)])
def test_family_one_centers(F, name, dim_z):
    assert center(truncated_envelope(catalog_get(name, F), 4)).dim == dim_z


def test_commutative_center_is_everything():
    E = truncated_envelope(abelian(Q, 2), 3)
    assert center(E).dim == E.dim


def test_center_matches_bruteforce():
    for name, t in (("L5.5", 4), ("K6.9", 4), ("L5.9", 4)):
        E = truncated_envelope(catalog_get(name, GF5), t)
        assert center(E) == center_bruteforce(E)


def test_power_ideals():
    assert [P.dim for P in power_ideals(truncated_envelope(catalog_get("K6.3", Q), 4))] == [40, 36, 25]
    assert [P.dim for P in power_ideals(truncated_envelope(abelian(Q, 1), 3))] == [2, 1]
    assert [P.dim for P in power_ideals(truncated_envelope(catalog_get("K6.6", GF5), 5))] == [50, 47, 40, 26]


def test_quotients():
    E = truncated_envelope(catalog_get("L5.3", Q), 4)
    same = quotient_algebra(E, Subspace.zero(E.dim, Q))
    assert same.dim == E.dim
    sq = power_ideals(E)[1]
    Q3 = quotient_algebra(E, sq)
    assert Q3.dim == 3
    assert all(not Q3.table[i][j] for i in range(3) for j in range(3))
    with pytest.raises(NotAnIdeal):
        quotient_algebra(E, Subspace(E.dim, Q, [E.gen(0).vector()]))


def test_k13_quotient_matches_l5():
    K = catalog_get("K6.13", Q)
    E = truncated_envelope(K, 5)
    I = ideal_closure(E, [E.gen(5).vector()])
    Qt = quotient_algebra(E, I)
    assert fingerprint(Qt) == fingerprint(truncated_envelope(catalog_get("L5.5", Q), 5))


def test_fingerprint_separations():
    f3 = fingerprint(truncated_envelope(catalog_get("L5.3", GF5), 4))
    f5 = fingerprint(truncated_envelope(catalog_get("L5.5", GF5), 4))
    assert f3.center_mod_powers[0] >= 1 and f5.center_mod_powers[0] == 0
    f9 = fingerprint(truncated_envelope(catalog_get("K6.9", GF5), 4))
    f24 = fingerprint(truncated_envelope(catalog_get("K6.24", GF5, 1), 4))
    assert f9.center_mod_powers[0] > 0 and f24.center_mod_powers[0] == 0
    f6 = fingerprint(truncated_envelope(catalog_get("K6.6", Q), 5))
    f7 = fingerprint(truncated_envelope(catalog_get("K6.7", Q), 5))
    assert f6.center_dim == f7.center_dim == 29


def test_file_roundtrip():
    E = truncated_envelope(catalog_get("L5.7", GF5), 4)
    A = parse_assoc_algebra(format_assoc_algebra(E))
    assert A.dim == E.dim and A.table == E.table and is_associative(A)


def test_parse_rejects_nonassociative():
    text = "assoc\nfield Q\ndim 2\ne.1 * e.1 = 1*e.2\ne.2 * e.1 = 1*e.1\n"
    with pytest.raises((ParseError, ValueError)):
        parse_assoc_algebra(text)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_assoc_algebra("field Q\ndim 2\n")
    with pytest.raises(ParseError):
        parse_assoc_algebra("assoc\nfield Q\ndim 2\ne.1 * e.3 = 1*e.2\n")


def test_direct_construction_checks_associativity():
    with pytest.raises(ValueError):
        AssocAlgebra(Q, 2, [[{1: 1}, {}], [{0: 1}, {}]])
