import itertools
from fractions import Fraction

import numpy as np
import pytest

from ueaiso.field import (
    FieldError,
    FieldSpec,
    Subspace,
    field_arith,
    nullspace,
    rref,
    rref_mod_p,
    solve_affine,
)

Q = FieldSpec.parse("Q")
GF2, GF3, GF5, GF7 = (FieldSpec.gf(p) for p in (2, 3, 5, 7))


def test_parse_and_str():
    assert str(FieldSpec.parse("GF(5)")) == "GF(5)"
    assert str(FieldSpec.parse(" Q ")) == "Q"
    with pytest.raises(FieldError):
        FieldSpec.parse("GF(6)")
    with pytest.raises(FieldError):
        FieldSpec.parse("R")


def test_arith():
    assert field_arith(3, 4, "mul", GF5) == 2
    assert field_arith(Fraction(1, 2), Fraction(1, 3), "add", Q) == Fraction(5, 6)
    assert GF7.inv(3) == 5
    with pytest.raises(ZeroDivisionError):
        field_arith(1, 0, "div", GF5)


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        field_arith(Fraction(1, 2), 3, "add", GF5)


def test_coercion():
    assert GF5("1/2") == 3
    assert Q("-3/6") == Fraction(-1, 2)
    with pytest.raises(ZeroDivisionError):
        GF5("1/5")


def test_rref_examples():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rk, red, piv = rref(eye, Q)
    assert rk == 3 and red == eye and piv == [0, 1, 2]
    assert rref([[0] * 4, [0] * 4], Q)[0] == 0
    rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    rk = rref(rows, GF2)[0]
    span = {tuple(sum(c * r[k] for c, r in zip(cs, rows)) % 2 for k in range(3))
            for cs in itertools.product(range(2), repeat=3)}
    assert rk == 2 and len(span) == 2**rk


def test_rref_numpy_matches_generic():
    rng = np.random.default_rng(3)
    for _ in range(30):
        a = rng.integers(0, 5, size=(4, 6))
        red, piv = rref_mod_p(a, 5)
        rk, red2, piv2 = rref(a.tolist(), GF5)
        assert piv == piv2
        assert red[: len(piv)].tolist() == red2


def test_solve_affine():
    sol = solve_affine([[1, 0], [0, 1]], [3, 4], 2, GF5)
    assert sol.particular == (3, 4) and sol.kernel.dim == 0
    sol = solve_affine([[0, 0, 0], [0, 0, 0]], [0, 0], 3, Q)
    assert sol.kernel.dim == 3
    sol = solve_affine([[1, 1], [1, 2]], [1, 0], 2, GF3)
    brute = [(x, y) for x in range(3) for y in range(3) if (x + y) % 3 == 1 and (x + 2 * y) % 3 == 0]
    assert [sol.particular] == brute == [(2, 2)]
    assert solve_affine([[1, 1], [1, 1]], [0, 1], 2, GF3) is None


def test_affine_enumeration():
    sol = solve_affine([[1, 1, 0]], [1], 3, GF3)
    pts = set(sol)
    assert len(pts) == 9
    assert all((x + y) % 3 == 1 for x, y, _ in pts)


def test_subspace_ops():
    U = Subspace(3, Q, [[1, 0, 0], [0, 1, 0]])
    W = Subspace(3, Q, [[0, 1, 0], [0, 0, 1]])
    assert (U + W).dim == 3
    assert U.intersection(W).dim == 1
    assert [0, 5, 0] in U.intersection(W)
    assert U.complement_indices() == [2]
    assert nullspace([[1, 1, 1]], 3, Q) and len(nullspace([[1, 1, 1]], 3, Q)) == 2
