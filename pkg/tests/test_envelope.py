import pytest

from ueaiso.catalog import catalog_get
from ueaiso.envelope import (
    EnvelopeError,
    envelope_bracket,
    parse_element,
    pbw_basis,
    straighten,
    truncated_envelope,
)
from ueaiso.field import FieldSpec
from ueaiso.lie import abelian

Q = FieldSpec.parse("Q")
GF3 = FieldSpec.gf(3)


def test_pbw_basis_l7():
    L = catalog_get("L5.7", Q)
    assert pbw_basis(L, 3) == [(0,), (1,), (2,), (0, 0), (0, 1), (1, 1)]


def test_pbw_basis_sizes():
    assert len(pbw_basis(catalog_get("K6.3", Q), 4)) == 40
    assert len(pbw_basis(catalog_get("K6.6", Q), 5)) == 50
    L = catalog_get("K6.17", Q)
    assert pbw_basis(L, 2) == [(k,) for k in range(L.dim) if L.weights[k] == 1]


def test_missing_weights():
    L = catalog_get("L5.3", Q).with_weights(None)
    with pytest.raises(EnvelopeError):
        pbw_basis(L, 3)


def test_straighten_examples():
    L7 = catalog_get("L5.7", Q)
    assert str(straighten((1, 0), L7, 5)) == "-x3 + x1*x2"
    L5 = catalog_get("L5.5", Q)
    c = straighten((1, 0, 0), L5, 4) - straighten((0, 0, 1), L5, 4)
    assert str(c) == "x5 - 2*x1*x4"
    K18 = catalog_get("K6.18", Q)
    c = straighten((0, 0, 0, 2), K18, 7) - straighten((2, 0, 0, 0), K18, 7)
    assert str(c) == "x6 - 3*x1*x5 + 3*x1^2*x4"
    c3 = straighten((0, 0, 0, 2), K18.over(GF3), 7) - straighten((2, 0, 0, 0), K18.over(GF3), 7)
    assert str(c3) == "x6"


def test_abelian_line():
    E = truncated_envelope(abelian(Q, 1), 3)
    assert E.dim == 2 and list(E.labels) == ["x1", "x1^2"]
    x = E.gen(0)
    assert str(x * x) == "x1^2"
    assert (x * (x * x)).is_zero()


def test_brackets():
    E = truncated_envelope(catalog_get("L5.3", Q), 4)
    assert str(envelope_bracket(E.gen(0), E.gen(1))) == "x4"
    a = E.gen(0) + E.gen(2) * E.gen(1)
    assert envelope_bracket(a, a).is_zero()
    E5 = truncated_envelope(catalog_get("L5.5", Q), 4)
    x1, x2 = E5.gen(0), E5.gen(1)
    assert str(envelope_bracket(x2, x1 * x2)) == "-x2*x4"


def test_default_truncation_is_class_plus_one():
    assert truncated_envelope(catalog_get("L5.7", Q)).t == 5


def test_parse_element():
    E = truncated_envelope(catalog_get("L5.5", GF3), 4)
    e = parse_element("e.3 + 1*e.1^2", E)
    assert str(e) == "x3 + x1^2"
    assert parse_element("x2*x1", E) == straighten((1, 0), E.source, 4)
    with pytest.raises((EnvelopeError, ValueError)):
        parse_element("1", E)
    with pytest.raises((EnvelopeError, ValueError)):
        parse_element("e.9", E)


def test_mismatched_parents():
    A = truncated_envelope(catalog_get("L5.5", Q), 4)
    B = truncated_envelope(catalog_get("L5.3", Q), 4)
    with pytest.raises(EnvelopeError):
        envelope_bracket(A.gen(0), B.gen(0))


def test_lie_center_image_is_central():
    L = catalog_get("K6.9", Q)
    E = truncated_envelope(L, 4)
    z = E.gen(2)  # x3 is central in L
    for n in range(E.dim):
        b = E.from_vector([1 if k == n else 0 for k in range(E.dim)])
        assert (z * b - b * z).is_zero()
