from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddhodge.errors import DegreeMismatch, IncompatibleData, NonTrivialKernel
from oddhodge.fourier import (
    FourierForm,
    box_apply,
    d_fourier,
    dstar_fourier,
    random_fourier_form,
    s_odd_fourier,
    s_odd_star_fourier,
)
from oddhodge.scalars import FLOAT, RATIONAL, gauss
from oddhodge.solver import (
    HodgeSystem,
    dual_system,
    relate_box_m,
    solve_first_order,
    solve_odd,
    split_solution,
)

I_ = gauss(0, 1)


def worked_f():
    """d e^{i(x1+x2)} = i e (dx1 + dx2)."""
    return FourierForm(2, 1, {(1, 1): {(1,): I_, (2,): I_}})


def test_first_order_example():
    u, rep = solve_first_order(HodgeSystem.build(2, 0, 0, f=worked_f()))
    assert u == FourierForm.single((1, 1), ())
    assert rep.residual_primal == 0 and rep.residual_dual == 0 and not rep.failed


def test_odd_example_m1():
    v, rep = solve_odd(HodgeSystem.build(2, 0, 1, f=worked_f()))
    assert v == FourierForm.single((1, 1), (), F(1, 2))
    assert s_odd_fourier(1, v) == worked_f()
    assert not (rep.flag_q1 or rep.flag_qn1 or rep.failed)


def test_box_relation_on_worked_pair():
    sys = HodgeSystem.build(2, 0, 1, f=worked_f())
    v, _ = solve_odd(sys)
    u, _ = solve_first_order(sys)
    assert relate_box_m(v, u, 1)
    assert relate_box_m(u, u, 0)
    assert not relate_box_m(v, u, 0)
    assert not relate_box_m(v, box_apply(u), 1)


def test_relate_box_m_rejects_shape_mismatch():
    assert not relate_box_m(FourierForm.zero(2, 0), FourierForm.zero(2, 1), 0)


def test_zero_data_gives_zero_solution():
    for m in range(3):
        v, rep = solve_odd(HodgeSystem.build(3, 1, m))
        assert v.is_zero() and v.q == 1 and not rep.failed


def test_m0_coincides_with_first_order():
    rng = np.random.default_rng(5)
    f = d_fourier(random_fourier_form(3, 1, 2, rng, mean_zero=True))
    g = dstar_fourier(random_fourier_form(3, 1, 2, rng, mean_zero=True))
    sys = HodgeSystem(3, 1, 0, f, g)
    assert solve_odd(sys)[0] == solve_first_order(sys)[0]


def test_constant_mode_raises_kernel():
    f = worked_f() + FourierForm.single((0, 0), (1,), 1)
    with pytest.raises(NonTrivialKernel):
        solve_odd(HodgeSystem.build(2, 0, 0, f=f))


def test_incompatible_data_rejected():
    with pytest.raises(IncompatibleData):
        HodgeSystem.build(2, 0, 0, f=FourierForm.single((1, 0), (2,), 1))
    with pytest.raises(IncompatibleData):
        HodgeSystem.build(2, 2, 0, g=FourierForm.single((1, 0), (1,), 1))


def test_degree_checks():
    with pytest.raises(DegreeMismatch):
        HodgeSystem(2, 0, 0, FourierForm.zero(2, 2), FourierForm.zero(2, -1))
    with pytest.raises(DegreeMismatch):
        HodgeSystem.build(2, 3, 0)


def test_exceptional_flags_and_warnings():
    g = dstar_fourier(FourierForm.single((1, 2, 0), (1,), 1))
    _, rep = solve_odd(HodgeSystem.build(3, 1, 1, g=g))
    assert rep.flag_q1 and not rep.flag_qn1 and rep.warnings
    f = d_fourier(FourierForm.single((1, 1, 1), (2, 3), 1))
    _, rep = solve_odd(HodgeSystem.build(3, 2, 1, f=f))
    assert rep.flag_qn1 and not rep.flag_q1 and rep.warnings
    _, rep = solve_odd(HodgeSystem.build(3, 1, 1, f=d_fourier(FourierForm.single((1, 0, 0), (2,), 1))))
    assert not rep.flag_q1 and not rep.warnings


def test_float_backend_tolerates_rounding_in_compatibility():
    rng = np.random.default_rng(0)
    f = d_fourier(random_fourier_form(3, 0, 8, rng, FLOAT, mean_zero=True))
    v, rep = solve_odd(HodgeSystem.build(3, 0, 2, f=f))
    assert rep.residual_primal <= 1e-9 and rep.residual_dual == 0


def test_split_examples():
    sys = HodgeSystem.build(2, 0, 1, f=worked_f())
    X, Y = split_solution(sys)
    assert Y.is_zero() and X == solve_odd(sys)[0]
    g = dstar_fourier(FourierForm.single((1, 2), (1, 2), 1))
    sys = HodgeSystem.build(2, 2, 1, g=g)
    X, Y = split_solution(sys)
    assert X.is_zero() and Y == solve_odd(sys)[0]


# --- properties ----------------------------------------------------------

cells = st.tuples(st.integers(2, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2**31 - 1)).filter(
    lambda c: c[1] <= c[0]
)


def random_system(n, q, m, seed, kind=RATIONAL):
    rng = np.random.default_rng(seed)
    f = d_fourier(random_fourier_form(n, q, 2, rng, kind, 0.3, True))
    g = dstar_fourier(random_fourier_form(n, q, 2, rng, kind, 0.3, True))
    return HodgeSystem(n, q, m, f, g)


@given(cells)
def test_solution_solves_exactly(cell):
    sys = random_system(*cell)
    v, rep = solve_odd(sys)
    assert s_odd_fourier(sys.m, v) == sys.f
    assert s_odd_star_fourier(sys.m, v) == sys.g
    assert rep.residual_primal == rep.residual_dual == 0 and not rep.failed
    assert not v.has_constant_mode()


@given(cells)
def test_round_trip_recovers_mean_zero_potential(cell):
    n, q, m, seed = cell
    a = random_fourier_form(n, q, 2, np.random.default_rng(seed), RATIONAL, 0.3, mean_zero=True)
    v, _ = solve_odd(HodgeSystem(n, q, m, s_odd_fourier(m, a), s_odd_star_fourier(m, a)))
    assert v == a


@given(cells)
def test_split_recombines_and_separates(cell):
    sys = random_system(*cell)
    X, Y = split_solution(sys)
    assert X + Y == solve_odd(sys)[0]
    assert s_odd_star_fourier(sys.m, X).is_zero()
    assert s_odd_fourier(sys.m, Y).is_zero()


@given(cells)
def test_box_relation(cell):
    sys = random_system(*cell)
    assert relate_box_m(solve_odd(sys)[0], solve_first_order(sys)[0], sys.m)


@given(cells)
def test_hodge_dual_maps_solutions_to_solutions(cell):
    from oddhodge.fourier import hodge_star_fourier

    sys = random_system(*cell)
    v, _ = solve_odd(sys)
    w, _ = solve_odd(dual_system(sys))
    assert w == hodge_star_fourier(v)
