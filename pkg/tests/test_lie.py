import pytest

from ueaiso.catalog import catalog_get
from ueaiso.field import FieldSpec
from ueaiso.lie import (
    LieAlgebra,
    NotNilpotent,
    ParseError,
    abelian,
    change_basis,
    format_lie_algebra,
    graded_algebra,
    homogeneous_basis,
    lie_center,
    lower_central_series,
    parse_lie_algebra,
    validate,
)

Q = FieldSpec.parse("Q")

L3_TEXT = """\
field Q
dim 5
[1,2] = 1*e.4
[1,4] = 1*e.5
"""


def test_parse_l3_text():
    L = parse_lie_algebra(L3_TEXT)
    assert L.dim == 5
    assert L.bracket_basis(0, 1) == {3: 1}
    assert L.bracket_basis(0, 3) == {4: 1}
    assert lower_central_series(L).dims == (5, 2, 1)


def test_parse_dim_only_is_abelian():
    L = parse_lie_algebra("dim 3\n")
    assert L.table == {} and validate(L).ok


@pytest.mark.parametrize(
    "text",
    [
        "field Q\ndim 3\n[2,1] = e.3\n",
        "field Q\ndim 3\n[1,2] = e.4\n",
        "field GF(4)\ndim 2\n",
        "field Q\ndim 0\n",
        "field Q\ndim 3\n[1,2] = e.3\n[1,2] = e.3\n",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_lie_algebra(text)


def test_parse_error_has_line():
    with pytest.raises(ParseError) as info:
        parse_lie_algebra("field Q\ndim 3\n[1,2] = e.9\n")
    assert info.value.line == 3


def test_roundtrip_format():
    L = catalog_get("K6.13", Q)
    M = parse_lie_algebra(format_lie_algebra(L))
    assert M.table == L.table and M.weights == L.weights


def test_jacobi_violation():
    B = LieAlgebra(Q, 3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    rep = validate(B)
    assert not rep.ok
    assert "(1,2,3)" in rep.first() and "x3" in rep.first()


def test_weight_violation():
    K = catalog_get("K6.3", Q)
    bad = K.with_weights((1, 1, 1, 1, 1, 1))
    assert not validate(bad).ok


def test_lcs_examples():
    assert lower_central_series(catalog_get("L5.7", Q)).dims == (5, 3, 2, 1)
    assert lower_central_series(abelian(Q, 4)).dims == (4,)


def test_not_nilpotent():
    sl = LieAlgebra(Q, 3, {(0, 1): {2: 1}, (0, 2): {0: -2}, (1, 2): {1: 2}})
    with pytest.raises(NotNilpotent):
        lower_central_series(sl)


def test_homogeneous_basis_identity_on_catalog():
    R = homogeneous_basis(catalog_get("L5.3", Q))
    assert R.is_identity


def test_homogeneous_basis_permuted():
    L = catalog_get("L5.3", Q)
    perm = [3, 0, 1, 2, 4]  # x4, x1, x2, x3, x5
    rows = [[1 if j == perm[i] else 0 for j in range(5)] for i in range(5)]
    P = change_basis(L, rows)
    R = homogeneous_basis(P.with_weights(None))
    assert R.algebra.weights == (1, 1, 1, 2, 3)
    assert validate(R.algebra).ok


def test_centers():
    Z = lie_center(catalog_get("L5.3", Q))
    assert Z.dim == 2 and [0, 0, 1, 0, 0] in Z and [0, 0, 0, 0, 1] in Z
    assert lie_center(abelian(Q, 3)).dim == 3
    Z = lie_center(catalog_get("K6.24", FieldSpec.gf(5), 3))
    assert Z.dim == 2 and [0, 0, 0, 0, 1, 0] in Z and [0, 0, 0, 0, 0, 1] in Z


def test_graded_examples():
    H = LieAlgebra(Q, 3, {(0, 1): {2: 1}}, (1, 1, 2))
    assert graded_algebra(H).algebra.table == H.table
    G = graded_algebra(catalog_get("K6.24", Q, 2)).algebra
    assert G.table == catalog_get("K6.9", Q).table
    for n in ("K6.6", "K6.7", "K6.11", "K6.12", "K6.13"):
        assert graded_algebra(catalog_get(n, Q)).component_dims == (3, 1, 1, 1)
