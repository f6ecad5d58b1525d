from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddhodge.exterior import AlgForm
from oddhodge.poly import (
    AffineMap,
    codifferential_star_sign,
    d_poly,
    dstar_poly,
    poly,
    poly_form,
    poly_ring,
    pullback_affine,
    pythagorean_rotation,
    random_poly_form,
    s_odd_poly,
    s_odd_star_poly,
    signed_permutation,
)
from oddhodge.verify import non_isometry_witness, random_affine, random_rational_isometry


def xs(n):
    return poly_ring(n).gens


def test_d_poly_examples():
    x1, x2 = xs(2)
    assert d_poly(poly_form(2, 0, {(): x1})) == poly_form(2, 1, {(1,): 1})
    assert d_poly(poly_form(2, 1, {(1,): x1 * x2})) == poly_form(2, 2, {(1, 2): -x1})
    assert d_poly(poly_form(2, 1, {(1,): x1})).is_zero()


def test_d_poly_top_degree_vanishes():
    x1, x2 = xs(2)
    out = d_poly(poly_form(2, 2, {(1, 2): x1 * x2}))
    assert out.is_zero() and out.q == 3


def test_dstar_poly_examples():
    x1, x2 = xs(2)
    assert dstar_poly(poly_form(2, 1, {(1,): x1})) == poly_form(2, 0, {(): -1})
    assert dstar_poly(poly_form(2, 1, {(1,): x2})).is_zero()
    assert dstar_poly(poly_form(2, 1, {(1,): 7, (2,): F(1, 3)})).is_zero()
    assert dstar_poly(poly_form(2, 0, {(): x1})).is_zero()


def test_s_odd_examples():
    x1, x2 = xs(2)
    a = poly_form(2, 0, {(): x1**2 * x2})
    assert s_odd_poly(0, a) == d_poly(a)
    assert s_odd_poly(1, a) == poly_form(2, 1, {(2,): -2})
    b = poly_form(2, 1, {(1,): x1**3})
    assert s_odd_star_poly(0, b) == dstar_poly(b)
    assert s_odd_star_poly(1, b) == poly_form(2, 0, {(): 6})


def test_poly_constructor_from_exponents():
    x1, x2 = xs(2)
    assert poly(2, {(2, 1): 3, (0, 0): F(1, 2)}) == 3 * x1**2 * x2 + F(1, 2)


def test_pullback_examples():
    x1, x2 = xs(2)
    rot = AffineMap(((F(3, 5), F(-4, 5)), (F(4, 5), F(3, 5))), (0, 0))
    assert rot.is_isometry
    dx1 = poly_form(2, 1, {(1,): 1})
    assert pullback_affine(rot, dx1) == poly_form(2, 1, {(1,): F(3, 5), (2,): F(-4, 5)})
    assert pullback_affine(rot, poly_form(2, 0, {(): x1})) == poly_form(2, 0, {(): F(3, 5) * x1 - F(4, 5) * x2})
    w = poly_form(2, 1, {(1,): x1 * x2, (2,): x2**3 + 1})
    assert pullback_affine(AffineMap.identity(2), w) == w


def test_pullback_with_translation():
    (x1,) = xs(1)
    psi = AffineMap(((1,),), (F(1, 2),))
    assert pullback_affine(psi, poly_form(1, 0, {(): x1**2})) == poly_form(1, 0, {(): x1**2 + x1 + F(1, 4)})


def test_affine_map_validation():
    with pytest.raises(ValueError):
        AffineMap(((1, 2), (2, 4)), (0, 0))
    with pytest.raises((TypeError, ValueError)):
        AffineMap(((0.6, -0.8), (0.8, 0.6)), (0, 0))
    assert not AffineMap(((2, 0), (0, 1)), (0, 0)).is_isometry
    assert signed_permutation((1, 0, 2), (1, -1, 1)).is_isometry
    assert pythagorean_rotation(3, 0, 2, (5, 12, 13), offset=(1, 0, F(1, 3))).is_isometry


# --- properties ----------------------------------------------------------

cells = st.tuples(st.integers(1, 4), st.integers(0, 4), st.integers(0, 2**31 - 1)).filter(lambda c: c[1] <= c[0])


@given(cells)
def test_d_and_dstar_square_to_zero(cell):
    n, q, seed = cell
    w = random_poly_form(n, q, np.random.default_rng(seed))
    assert d_poly(d_poly(w)).is_zero()
    assert dstar_poly(dstar_poly(w)).is_zero()


@given(cells, st.integers(0, 3))
def test_odd_operators_form_complexes(cell, m):
    n, q, seed = cell
    w = random_poly_form(n, q, np.random.default_rng(seed), max_degree=2 * m + 2)
    Sw, Ssw = s_odd_poly(m, w), s_odd_star_poly(m, w)
    assert s_odd_poly(m, Sw).is_zero()
    assert s_odd_star_poly(m, Ssw).is_zero()
    assert d_poly(Sw).is_zero()
    assert dstar_poly(Ssw).is_zero()


@given(cells)
def test_d_commutes_with_every_affine_pullback(cell):
    n, q, seed = cell
    rng = np.random.default_rng(seed)
    psi, w = random_affine(n, rng), random_poly_form(n, q, rng, max_degree=3)
    assert pullback_affine(psi, d_poly(w)) == d_poly(pullback_affine(psi, w))


@given(cells, st.integers(0, 2))
def test_isometries_commute_with_odd_operators(cell, m):
    n, q, seed = cell
    rng = np.random.default_rng(seed)
    psi, w = random_rational_isometry(n, rng), random_poly_form(n, q, rng, max_degree=2 * m + 1, monomials=3)
    assert psi.is_isometry
    for op in (dstar_poly, lambda v: s_odd_poly(m, v), lambda v: s_odd_star_poly(m, v)):
        assert pullback_affine(psi, op(w)) == op(pullback_affine(psi, w))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_non_isometry_breaks_codifferential_equivariance(n):
    psi, w = non_isometry_witness(n)
    assert not psi.is_isometry
    assert pullback_affine(psi, dstar_poly(w)) != dstar_poly(pullback_affine(psi, w))


def test_codifferential_star_sign_table():
    table = {(n, q): codifferential_star_sign(n, q) for n in range(1, 6) for q in range(0, n + 1)}
    for (n, q), s in table.items():
        assert s == (0 if q == 0 else (-1) ** (n * (q + 1) + 1))


@given(cells)
def test_codifferential_is_signed_star_d_star_on_random_forms(cell):
    from oddhodge.exterior import hodge_star

    n, q, seed = cell
    if q == 0:
        return
    w = random_poly_form(n, q, np.random.default_rng(seed))
    s = codifferential_star_sign(n, q)
    assert dstar_poly(w) == hodge_star(d_poly(hodge_star(w))) * s


def test_poly_form_rejects_wrong_degree_keys():
    with pytest.raises(ValueError):
        AlgForm(2, 1, {(1, 2): 1})
