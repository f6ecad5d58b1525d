"""Randomized exact identity suites for both backends.

Every check draws random exact data and compares both sides with exact
equality. A failing check keeps its first counterexample as a JSON-ready
witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator

import numpy as np

from .exterior import AlgForm, basis, hodge_star, interior, pointwise_inner, wedge
from .fourier import (
    FourierForm,
    LatticeIsometry,
    box_apply,
    box_inverse_power,
    d_fourier,
    dstar_fourier,
    hodge_star_fourier,
    l2_inner,
    pullback_lattice_isometry,
    random_fourier_form,
    s_odd_fourier,
    s_odd_star_fourier,
    star_intertwining_signs,
)
from .io import form_to_dict
from .poly import (
    AffineMap,
    codifferential_star_sign,
    d_poly,
    dstar_poly,
    poly_form,
    poly_ring,
    pullback_affine,
    pythagorean_rotation,
    random_poly_form,
    s_odd_poly,
    s_odd_star_poly,
)
from .scalars import RATIONAL, conjugate, gauss

__all__ = [
    "CheckResult",
    "SuiteReport",
    "run_suite",
    "random_const_form",
    "random_affine",
    "random_rational_isometry",
    "random_lattice_isometry",
    "non_isometry_witness",
]


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.witness is None


@dataclass
class SuiteReport:
    checks: list[CheckResult] = field(default_factory=list)
    sign_tables: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [f"{'PASS' if c.passed else 'FAIL'} {c.name} ({c.cases} cases)" for c in self.checks]
        for name, table in self.sign_tables.items():
            out.append(f"sign table {name}: {table}")
        return out


# --- random exact data ---------------------------------------------------


def random_const_form(n: int, q: int, rng: np.random.Generator, density: float = 0.7) -> AlgForm:
    terms = {}
    for I in basis(n, q):
        if rng.random() < density:
            terms[I] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    return AlgForm(n, q, terms)


def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _random_offset(n: int, rng: np.random.Generator) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(n))


def random_affine(n: int, rng: np.random.Generator) -> AffineMap:
    """Random invertible rational affine map (generally not an isometry)."""
    while True:
        A = tuple(tuple(Fraction(int(rng.integers(-2, 3))) for _ in range(n)) for _ in range(n))
        try:
            return AffineMap(A, _random_offset(n, rng))
        except ValueError:
            continue


def random_rational_isometry(n: int, rng: np.random.Generator) -> AffineMap:
    """Signed permutation, optionally composed with a (3,4,5) rotation, plus a rational translation."""
    perm = rng.permutation(n)
    signs = rng.choice((-1, 1), size=n)
    P = tuple(tuple(Fraction(int(signs[i]) if perm[i] == j else 0) for j in range(n)) for i in range(n))
    A = P
    if n >= 2 and rng.random() < 0.75:
        i, j = rng.choice(n, size=2, replace=False)
        triple = (3, 4, 5) if rng.random() < 0.5 else (5, 12, 13)
        A = _matmul(pythagorean_rotation(n, int(i), int(j), triple).A, P)
    return AffineMap(A, _random_offset(n, rng))


def random_lattice_isometry(n: int, rng: np.random.Generator) -> LatticeIsometry:
    perm = rng.permutation(n)
    signs = rng.choice((-1, 1), size=n)
    P = np.zeros((n, n), dtype=np.int64)
    P[np.arange(n), perm] = signs
    shift = [Fraction(int(t), 2) for t in rng.integers(0, 4, size=n)]
    return LatticeIsometry(P, shift)


def non_isometry_witness(n: int) -> tuple[AffineMap, AlgForm]:
    """``x -> diag(2, 1, ..., 1) x`` and ``x1 dx^1``: pullback does not commute with d* here."""
    A = tuple(tuple(Fraction(2 if i == j == 0 else int(i == j)) for j in range(n)) for i in range(n))
    x1 = poly_ring(n).gens[0]
    return AffineMap(A, (0,) * n), poly_form(n, 1, {(1,): x1})


def _poly_degree(m: int) -> int:
    # high enough that S applied once is generically nonzero
    return max(4, 2 * m + 2)


# --- suite ---------------------------------------------------------------

Check = Callable[[np.random.Generator], "dict | None"]


def _w(**kw) -> dict:
    return {k: (form_to_dict(v) if isinstance(v, (AlgForm, FourierForm)) and _serializable(v) else _plain(v)) for k, v in kw.items()}


def _serializable(v) -> bool:
    if isinstance(v, FourierForm):
        return True
    return all(hasattr(c, "terms") for c in v.terms.values())


def _plain(v):
    if isinstance(v, AffineMap):
        return {"A": [[str(a) for a in row] for row in v.A], "b": [str(x) for x in v.b]}
    if isinstance(v, LatticeIsometry):
        return {"P": v.P.tolist(), "shift_over_pi": [str(s) for s in v.shift]}
    if isinstance(v, AlgForm):
        return {"n": v.n, "q": v.q, "terms": {str(I): str(c) for I, c in v.terms.items()}}
    return v if isinstance(v, (int, str, float, bool, type(None))) else str(v)


def _exterior_checks(n: int, max_q: int) -> Iterator[tuple[str, Check]]:
    for q in range(0, min(max_q, n) + 1):
        def star_star(rng, q=q):
            w = random_const_form(n, q, rng)
            if hodge_star(hodge_star(w)) != w * (-1) ** (q * (n - q)):
                return _w(n=n, q=q, omega=w)

        def inner_vs_star(rng, q=q):
            w, e = random_const_form(n, q, rng), random_const_form(n, q, rng)
            vol = wedge(w, hodge_star(e)).coefficient(tuple(range(1, n + 1)))
            if pointwise_inner(w, e) != vol:
                return _w(n=n, q=q, omega=w, eta=e)

        def interior_nilpotent(rng, q=q):
            if q < 2:
                return None
            k = [Fraction(int(x)) for x in rng.integers(-3, 4, size=n)]
            w = random_const_form(n, q, rng)
            if not interior(k, interior(k, w)).is_zero():
                return _w(n=n, q=q, omega=w, k=str(k))

        yield f"exterior: ** = (-1)^(q(n-q)) [n={n} q={q}]", star_star
        yield f"exterior: <w,e> = vol-coefficient of w ^ *e [n={n} q={q}]", inner_vs_star
        yield f"exterior: interior(k) o interior(k) = 0 [n={n} q={q}]", interior_nilpotent
        for p in range(0, n - q + 1):
            def graded(rng, p=p, q=q):
                a, b = random_const_form(n, p, rng), random_const_form(n, q, rng)
                if wedge(a, b) != wedge(b, a) * (-1) ** (p * q):
                    return _w(n=n, p=p, q=q, omega=a, eta=b)

            yield f"exterior: w ^ e = (-1)^(pq) e ^ w [n={n} p={p} q={q}]", graded


def _poly_checks(n: int, max_q: int, max_m: int) -> Iterator[tuple[str, Check]]:
    for q in range(0, min(max_q, n) + 1):
        def d2(rng, q=q):
            w = random_poly_form(n, q, rng)
            if not d_poly(d_poly(w)).is_zero():
                return _w(n=n, q=q, omega=w)

        def ds2(rng, q=q):
            w = random_poly_form(n, q, rng)
            if not dstar_poly(dstar_poly(w)).is_zero():
                return _w(n=n, q=q, omega=w)

        def d_affine(rng, q=q):
            psi, w = random_affine(n, rng), random_poly_form(n, q, rng, max_degree=3)
            if pullback_affine(psi, d_poly(w)) != d_poly(pullback_affine(psi, w)):
                return _w(n=n, q=q, psi=psi, omega=w)

        def codiff_sign(rng, q=q):
            s = codifferential_star_sign(n, q)
            w = random_poly_form(n, q, rng)
            rhs = hodge_star(d_poly(hodge_star(w)))
            if dstar_poly(w) != (rhs * s if s else rhs):
                return _w(n=n, q=q, omega=w, sign=s)

        yield f"poly: d o d = 0 [n={n} q={q}]", d2
        yield f"poly: d* o d* = 0 [n={n} q={q}]", ds2
        yield f"poly: psi^* d = d psi^* for invertible affine psi [n={n} q={q}]", d_affine
        yield f"poly: d* = s(n,q) *d* [n={n} q={q}]", codiff_sign
        for m in range(0, max_m + 1):
            deg = _poly_degree(m)

            def ss(rng, q=q, m=m, deg=deg):
                w = random_poly_form(n, q, rng, max_degree=deg)
                if not s_odd_poly(m, s_odd_poly(m, w)).is_zero():
                    return _w(n=n, q=q, m=m, omega=w)

            def ssstar(rng, q=q, m=m, deg=deg):
                w = random_poly_form(n, q, rng, max_degree=deg)
                if not s_odd_star_poly(m, s_odd_star_poly(m, w)).is_zero():
                    return _w(n=n, q=q, m=m, omega=w)

            def d_s(rng, q=q, m=m, deg=deg):
                w = random_poly_form(n, q, rng, max_degree=deg)
                if not d_poly(s_odd_poly(m, w)).is_zero():
                    return _w(n=n, q=q, m=m, omega=w)

            def ds_sstar(rng, q=q, m=m, deg=deg):
                w = random_poly_form(n, q, rng, max_degree=deg)
                if not dstar_poly(s_odd_star_poly(m, w)).is_zero():
                    return _w(n=n, q=q, m=m, omega=w)

            def iso(rng, q=q, m=m):
                psi = random_rational_isometry(n, rng)
                w = random_poly_form(n, q, rng, max_degree=min(_poly_degree(m), 5))
                ops = {"dstar": dstar_poly, "S": lambda x: s_odd_poly(m, x), "S*": lambda x: s_odd_star_poly(m, x)}
                for name, op in ops.items():
                    if pullback_affine(psi, op(w)) != op(pullback_affine(psi, w)):
                        return _w(n=n, q=q, m=m, op=name, psi=psi, omega=w)

            yield f"poly: S o S = 0 [n={n} q={q} m={m}]", ss
            yield f"poly: S* o S* = 0 [n={n} q={q} m={m}]", ssstar
            yield f"poly: d o S = 0 [n={n} q={q} m={m}]", d_s
            yield f"poly: d* o S* = 0 [n={n} q={q} m={m}]", ds_sstar
            yield f"poly: isometry equivariance of d*, S, S* [n={n} q={q} m={m}]", iso


def _fourier_checks(n: int, max_q: int, max_m: int, bandwidth: int = 2) -> Iterator[tuple[str, Check]]:
    def rand(q, rng, mean_zero=False):
        return random_fourier_form(n, q, bandwidth, rng, RATIONAL, density=0.3, mean_zero=mean_zero)

    for q in range(0, min(max_q, n) + 1):
        def box_def(rng, q=q):
            w = rand(q, rng)
            if box_apply(w) != d_fourier(dstar_fourier(w)) + dstar_fourier(d_fourier(w)):
                return _w(n=n, q=q, omega=w)

        def box_symbol(rng, q=q):
            w = rand(q, rng)
            ksq = (w.modes**2).sum(axis=1)
            expected = FourierForm.from_arrays(n, q, w.modes, w.coeffs * ksq.astype(object)[:, None], RATIONAL)
            if box_apply(w) != expected:
                return _w(n=n, q=q, omega=w)

        def box_inverse(rng, q=q):
            w = rand(q, rng, mean_zero=True)
            for s in (1, 2, 3):
                up = w
                for _ in range(s):
                    up = box_apply(up)
                down = box_inverse_power(s, w)
                for _ in range(s):
                    down = box_apply(down)
                if box_inverse_power(s, up) != w or down != w:
                    return _w(n=n, q=q, s=s, omega=w)

        def adjoint(rng, q=q):
            if q + 1 > n:
                return None
            a, b = rand(q, rng), rand(q + 1, rng)
            if l2_inner(d_fourier(a), b) != l2_inner(a, dstar_fourier(b)):
                return _w(n=n, q=q, omega=a, eta=b)

        def energy(rng, q=q):
            h = rand(q, rng)
            lhs = l2_inner(d_fourier(h), d_fourier(h)) + l2_inner(dstar_fourier(h), dstar_fourier(h))
            ksq = (h.modes**2).sum(axis=1)
            rhs = gauss(0)
            for kk, row in zip(ksq.tolist(), h.coeffs):
                for c in row:
                    rhs = rhs + gauss(kk) * c * conjugate(c)
            if lhs != rhs:
                return _w(n=n, q=q, h=h)

        yield f"fourier: box = dd* + d*d [n={n} q={q}]", box_def
        yield f"fourier: box multiplies mode k by |k|^2 [n={n} q={q}]", box_symbol
        yield f"fourier: box^-s is a two-sided inverse, s=1..3 [n={n} q={q}]", box_inverse
        yield f"fourier: <dw, e> = <w, d*e> [n={n} q={q}]", adjoint
        yield f"fourier: ||dh||^2 + ||d*h||^2 = sum |k|^2 |h_k|^2 [n={n} q={q}]", energy
        for m in range(0, max_m + 1):
            def complex_(rng, q=q, m=m):
                w = rand(q, rng)
                checks = {
                    "S o S": s_odd_fourier(m, s_odd_fourier(m, w)),
                    "S* o S*": s_odd_star_fourier(m, s_odd_star_fourier(m, w)),
                    "d o S": d_fourier(s_odd_fourier(m, w)),
                    "d* o S*": dstar_fourier(s_odd_star_fourier(m, w)),
                }
                for name, out in checks.items():
                    if not out.is_zero():
                        return _w(n=n, q=q, m=m, identity=name, omega=w)

            def collapse(rng, q=q, m=m):
                w = rand(q, rng)
                if len(w.modes) == 0:
                    return None
                row = int(rng.integers(len(w.modes)))
                single = FourierForm.from_arrays(n, q, w.modes[row:row + 1], w.coeffs[row:row + 1], RATIONAL)
                ksq = int((w.modes[row] ** 2).sum())
                if s_odd_fourier(m, single) != d_fourier(single) * ksq**m:
                    return _w(n=n, q=q, m=m, omega=single)

            def lattice(rng, q=q, m=m):
                psi = random_lattice_isometry(n, rng)
                w = rand(q, rng)
                ops = {
                    "d": d_fourier,
                    "dstar": dstar_fourier,
                    "S": lambda x: s_odd_fourier(m, x),
                    "S*": lambda x: s_odd_star_fourier(m, x),
                }
                for name, op in ops.items():
                    if pullback_lattice_isometry(psi, op(w)) != op(pullback_lattice_isometry(psi, w)):
                        return _w(n=n, q=q, m=m, op=name, psi=psi, omega=w)

            def star_dual(rng, q=q, m=m):
                sf, sg = star_intertwining_signs(n, q, m)
                w = rand(q, rng)
                sw = hodge_star_fourier(w)
                lhs_f, rhs_f = s_odd_fourier(m, sw), hodge_star_fourier(s_odd_star_fourier(m, w))
                lhs_g, rhs_g = s_odd_star_fourier(m, sw), hodge_star_fourier(s_odd_fourier(m, w))
                if lhs_f != rhs_f * (sf or 1) or lhs_g != rhs_g * (sg or 1):
                    return _w(n=n, q=q, m=m, omega=w)

            yield f"fourier: S o S = 0, S* o S* = 0, d o S = 0, d* o S* = 0 [n={n} q={q} m={m}]", complex_
            yield f"fourier: single mode S = |k|^(2m) d [n={n} q={q} m={m}]", collapse
            yield f"fourier: lattice-isometry equivariance of d, d*, S, S* [n={n} q={q} m={m}]", lattice
            yield f"fourier: * intertwines S and S* with recorded signs [n={n} q={q} m={m}]", star_dual


def _witness_check(n: int) -> CheckResult:
    psi, w = non_isometry_witness(n)
    res = CheckResult(f"poly: d* equivariance fails for the non-isometry diag(2,1,..) [n={n}]", cases=1)
    if pullback_affine(psi, dstar_poly(w)) == dstar_poly(pullback_affine(psi, w)):
        res.witness = _w(n=n, psi=psi, omega=w, problem="expected a failure of equivariance")
    return res


def run_suite(n: int = 3, max_q: int | None = None, max_m: int = 2, trials: int = 3, seed: int = 0) -> SuiteReport:
    """Run every identity for ``q <= max_q``, ``m <= max_m`` with ``trials`` random cases each."""
    if n < 1:
        raise ValueError("n must be >= 1")
    max_q = n if max_q is None else max_q
    report = SuiteReport()
    if trials <= 0:
        return report
    rng = np.random.default_rng(seed)
    groups = [_exterior_checks(n, max_q), _poly_checks(n, max_q, max_m), _fourier_checks(n, max_q, max_m)]
    for group in groups:
        for name, check in group:
            res = CheckResult(name)
            for _ in range(trials):
                res.cases += 1
                witness = check(rng)
                if witness is not None:
                    res.witness = witness
                    break
            report.checks.append(res)
    report.checks.append(_witness_check(n))
    report.sign_tables["d* = s *d* (poly), s by q"] = {q: codifferential_star_sign(n, q) for q in range(1, n + 1)}
    report.sign_tables["S(*v) = sf *(S* v), S*(*v) = sg *(S v); (sf, sg) by q"] = {
        q: star_intertwining_signs(n, q, 0) for q in range(0, n + 1)
    }
    return report
