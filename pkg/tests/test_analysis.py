import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddhodge.analysis import (
    DIVCURL_FIELDS,
    OVERSAMPLING,
    constructed_orthogonal_pair,
    divcurl_ratio_experiment,
    form_lp_norm,
    grad_norm,
    grid_size,
    hillclimb_extremizer,
    pairing_experiment,
    random_closed,
    random_coclosed,
    records_to_csv,
    records_to_json,
    sample_grid,
    sobolev_norm,
    summarize,
)
from oddhodge.errors import DegreeMismatch, UnderSampled
from oddhodge.fourier import (
    FourierForm,
    d_fourier,
    deriv_multi,
    dstar_fourier,
    hodge_star_fourier,
    l2_inner,
    random_fourier_form,
)
from oddhodge.scalars import FLOAT, RATIONAL
from oddhodge.solver import HodgeSystem, solve_odd


def fe(k, I=(), c=1.0):
    return FourierForm.single(k, I, c, FLOAT)


def test_sample_grid_examples():
    s = sample_grid(fe((1,)), 4)
    assert np.allclose(s.values[0], [1, 1j, -1, -1j], atol=1e-15)
    const = sample_grid(fe((0, 0), (1,), 2.5), 3)
    assert np.allclose(const.values[0], 2.5) and not const.values[1].any()
    assert not sample_grid(FourierForm.zero(2, 1, FLOAT), 3).values.any()


def test_sample_grid_point_view():
    s = sample_grid(fe((1, 0), (2,)), 4)
    assert s.at((1, 3)).coefficient((2,)) == pytest.approx(1j)


def test_undersampling_is_rejected():
    with pytest.raises(UnderSampled):
        sample_grid(fe((3, 0)), 6)


def test_lp_norm_examples():
    w = fe((1, 0), (1,))
    for p in (1, 1.5, 2, 3, math.inf):
        assert form_lp_norm(w, p) == pytest.approx(1.0, rel=1e-12)
    assert form_lp_norm(FourierForm.zero(2, 1, FLOAT), 1) == 0.0


def test_cosine_l1_norm():
    cos = fe((1,), (), 0.5) + fe((-1,), (), 0.5)
    assert form_lp_norm(cos, 1, N=4096) == pytest.approx(2 / math.pi, rel=1e-6)
    # default oversampling is coarser; the gap is bounded but not at the 1e-6 level
    assert form_lp_norm(cos, 1) == pytest.approx(2 / math.pi, rel=3e-2)


def test_grid_size_oversampling():
    assert grid_size(3, 2) == (7, 1)
    assert grid_size(3, math.inf) == (7, 1)
    assert grid_size(3, 1) == (7 * OVERSAMPLING, OVERSAMPLING)


def test_sobolev_examples():
    v = fe((1, 0))
    assert sobolev_norm(v, 2, 2) == pytest.approx(3.0, rel=1e-12)
    assert sobolev_norm(v, 2, 1.5) == pytest.approx(3.0, rel=1e-12)
    w = fe((2, -1), (1,), 1 + 2j) + fe((0, 1), (2,), -0.5)
    assert sobolev_norm(w, 0, 1.5) == pytest.approx(form_lp_norm(w, 1.5))
    assert sobolev_norm(FourierForm.zero(2, 0, FLOAT), 2, 2) == 0.0


def test_sobolev_matches_explicit_derivative_sum():
    w = random_fourier_form(2, 1, 2, np.random.default_rng(2), FLOAT, 0.4)
    N = grid_size(2, 1.5)[0]
    betas = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]
    explicit = sum(form_lp_norm(deriv_multi(b, w), 1.5, N=N) for b in betas)
    assert sobolev_norm(w, 2, 1.5) == pytest.approx(explicit, rel=1e-12)


def test_random_closed_and_coclosed():
    for n, deg in [(2, 1), (3, 2), (3, 3), (4, 2)]:
        f = random_closed(n, deg, 3, seed=7, kind=RATIONAL)
        assert not f.is_zero() and d_fourier(f).is_zero() and not f.has_constant_mode()
        g = random_coclosed(n, deg - 1, 3, seed=7, kind=RATIONAL)
        assert not g.is_zero() and dstar_fourier(g).is_zero()
    assert random_closed(3, 2, 2, seed=4) == random_closed(3, 2, 2, seed=4)
    assert random_coclosed(3, 1, 2, seed=4) == random_coclosed(3, 1, 2, seed=4)
    assert random_closed(3, 0, 2, seed=1).is_zero()


def test_divcurl_examples():
    f = fe((1, 0), (1,), 1j)
    for m, expected in [(0, 1.0), (1, 3.0)]:
        v, _ = solve_odd(HodgeSystem.build(2, 0, m, f=f))
        assert v == fe((1, 0))
        ratio = sobolev_norm(v, 2 * m, 2) / form_lp_norm(f, 1)
        assert ratio == pytest.approx(expected, rel=1e-12)
    assert divcurl_ratio_experiment(2, 0, 0, 1, 0, 1) == []


def test_divcurl_records():
    recs = divcurl_ratio_experiment(3, 1, 1, 2, 3, seed=10)
    assert [r.seed for r in recs] == [10, 11, 12]
    for r in recs:
        assert r.flag_q1 and not r.flag_qn1
        assert r.box_relation_ok
        assert r.ratio == pytest.approx(r.norm_v_sobolev / (r.norm_f_l1 + r.norm_g_l1))
    with pytest.raises(DegreeMismatch):
        divcurl_ratio_experiment(2, 3, 0, 1, 1, 0)


def test_divcurl_is_deterministic():
    a = records_to_csv(divcurl_ratio_experiment(2, 0, 1, 3, 3, seed=5))
    b = records_to_csv(divcurl_ratio_experiment(2, 0, 1, 3, 3, seed=5))
    assert a == b
    assert a.splitlines()[0] == ",".join(DIVCURL_FIELDS)


def test_pairing_records():
    recs = pairing_experiment(3, 1, 3, seed=2, variant="LL")
    for r in recs:
        assert r.rhs == pytest.approx(r.norm_data_l1 * r.norm_op_h_ln)
        assert r.norm_op_h_ln <= r.norm_grad_h_ln * (1 + 1e-6)
    ls = pairing_experiment(3, 1, 3, seed=2, variant="LS")
    for a, b in zip(recs, ls):
        assert a.pairing_abs == b.pairing_abs
        assert b.rhs == pytest.approx(b.norm_data_l1 * b.norm_grad_h_ln)
        assert a.ratio >= b.ratio
    dual = pairing_experiment(3, 3, 2, seed=2, side="dstar")
    assert all(r.side == "dstar" and r.rhs > 0 for r in dual)
    with pytest.raises(DegreeMismatch):
        pairing_experiment(2, 1, 1, 0)
    with pytest.raises(DegreeMismatch):
        pairing_experiment(3, 1, 1, 0, side="dstar")


def test_constructed_pairs_are_orthogonal():
    for seed in range(5):
        f, h = constructed_orthogonal_pair(3, 0, 3, seed)
        assert dstar_fourier(h).is_zero() or abs(l2_inner(dstar_fourier(h), dstar_fourier(h))) < 1e-20
        scale = math.sqrt(abs(l2_inner(f, f)) * abs(l2_inner(h, h)))
        assert abs(l2_inner(f, h)) <= 1e-10 * scale


def test_pairing_with_zero_data_vanishes():
    h = random_fourier_form(2, 1, 2, np.random.default_rng(0), FLOAT, 0.5, True)
    assert l2_inner(FourierForm.zero(2, 1, FLOAT), h) == 0


def test_hillclimb_examples():
    one = hillclimb_extremizer(2, 0, 1, 3, 1, seed=4)
    assert len(one) == 1
    assert one[0].ratio == hillclimb_extremizer(2, 0, 1, 3, 1, seed=4)[0].ratio
    traj = hillclimb_extremizer(2, 0, 1, 3, 8, seed=4)
    ratios = [r.ratio for r in traj]
    assert ratios[0] == one[0].ratio
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))
    assert records_to_csv(traj) == records_to_csv(hillclimb_extremizer(2, 0, 1, 3, 8, seed=4))
    with pytest.raises(ValueError):
        hillclimb_extremizer(2, 0, 1, 3, 0, seed=4)


def test_summary_and_json():
    recs = divcurl_ratio_experiment(2, 0, 0, 2, 4, seed=0)
    s = summarize(recs)
    assert s["trials"] == 4 and s["errors"] == 0 and s["min"] <= s["median"] <= s["max"]
    import json

    rows = json.loads(records_to_json(recs))
    assert [set(r) for r in rows] == [set(DIVCURL_FIELDS)] * 4
    assert summarize([]) == {"trials": 0, "errors": 0, "exceptional": 0}


# --- properties ----------------------------------------------------------

float_forms = st.tuples(st.integers(1, 3), st.integers(0, 3), st.integers(1, 3), st.integers(0, 2**31 - 1)).filter(
    lambda c: c[1] <= c[0]
)


def draw(n, q, B, seed, mean_zero=False):
    w = random_fourier_form(n, q, B, np.random.default_rng(seed), FLOAT, 0.4, mean_zero)
    return w if not w.is_zero() else fe((1,) + (0,) * (n - 1), tuple(range(1, q + 1)))


@given(float_forms)
def test_l2_quadrature_matches_parseval(cell):
    w = draw(*cell)
    assert form_lp_norm(w, 2) == pytest.approx(math.sqrt(l2_inner(w, w).real), rel=1e-10)


@given(float_forms, st.floats(-5, 5).filter(lambda t: abs(t) > 1e-3), st.sampled_from([1, 1.5, 2, 3, math.inf]))
def test_norm_homogeneity(cell, t, p):
    w = draw(*cell)
    assert form_lp_norm(w * t, p) == pytest.approx(abs(t) * form_lp_norm(w, p), rel=1e-12)
    assert sobolev_norm(w * (1j * t), 2, 1.5) == pytest.approx(abs(t) * sobolev_norm(w, 2, 1.5), rel=1e-12)


@given(float_forms)
def test_star_is_l1_isometry(cell):
    w = draw(*cell)
    assert form_lp_norm(hodge_star_fourier(w), 1) == pytest.approx(form_lp_norm(w, 1), rel=1e-12)


@given(float_forms)
def test_energy_identity_by_quadrature(cell):
    h = draw(*cell)
    lhs = form_lp_norm(d_fourier(h), 2, N=2 * h.bandwidth() + 1) ** 2
    lhs += form_lp_norm(dstar_fourier(h), 2, N=2 * h.bandwidth() + 1) ** 2
    assert lhs == pytest.approx(grad_norm(h, 2) ** 2, rel=1e-10)
