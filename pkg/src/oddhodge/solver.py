"""Odd-order Hodge systems ``S v = f, S* v = g`` with ``S = d (d* d)^m`` on the torus.

Applying ``d*`` to the first equation and ``d`` to the second gives
``box^{m+1} v = d* f + d g``; on mean-zero forms ``box`` is invertible, so
the solve is a single Fourier multiplier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegreeMismatch, DimensionMismatch, IncompatibleData, NonTrivialKernel
from .fourier import (
    FourierForm,
    box_apply,
    box_inverse_power,
    d_fourier,
    dstar_fourier,
    hodge_star_fourier,
    l2_inner,
    s_odd_fourier,
    s_odd_star_fourier,
    star_intertwining_signs,
)

__all__ = [
    "HodgeSystem",
    "SolveReport",
    "solve_first_order",
    "solve_odd",
    "relate_box_m",
    "split_solution",
    "dual_system",
]


@dataclass(frozen=True)
class HodgeSystem:
    n: int
    q: int
    m: int
    f: FourierForm
    g: FourierForm

    def __post_init__(self):
        if not 0 <= self.q <= self.n:
            raise DegreeMismatch(f"q={self.q} outside 0..{self.n}")
        if self.m < 0:
            raise ValueError("m must be non-negative")
        for name, form, deg in (("f", self.f, self.q + 1), ("g", self.g, self.q - 1)):
            if form.n != self.n:
                raise DimensionMismatch(f"{name} lives in R^{form.n}, system in R^{self.n}")
            if form.q != deg:
                raise DegreeMismatch(f"{name} must have degree {deg}, got {form.q}")
        if self.f.kind is not self.g.kind:
            raise TypeError("f and g must share a scalar kind")
        if not _vanishes(d_fourier(self.f), self.f):
            raise IncompatibleData("f is not closed (df != 0)")
        if not _vanishes(dstar_fourier(self.g), self.g):
            raise IncompatibleData("g is not coclosed (d*g != 0)")

    @classmethod
    def build(cls, n: int, q: int, m: int, f: FourierForm | None = None, g: FourierForm | None = None, kind=None):
        """Convenience constructor; a missing side is the zero form of the right degree."""
        kind = kind or (f.kind if f is not None else g.kind if g is not None else None)
        if kind is None:
            from .scalars import RATIONAL

            kind = RATIONAL
        f = f if f is not None else FourierForm.zero(n, q + 1, kind)
        g = g if g is not None else FourierForm.zero(n, q - 1, kind)
        return cls(n, q, m, f, g)

    @property
    def kind(self):
        return self.f.kind

    @property
    def flag_q1(self) -> bool:
        return self.q == 1 and not self.g.is_zero()

    @property
    def flag_qn1(self) -> bool:
        return self.q == self.n - 1 and not self.f.is_zero()

    @property
    def exceptional(self) -> bool:
        return self.flag_q1 or self.flag_qn1

    def with_m(self, m: int) -> "HodgeSystem":
        return HodgeSystem(self.n, self.q, m, self.f, self.g)


@dataclass
class SolveReport:
    backend: str
    residual_primal: float
    residual_dual: float
    flag_q1: bool
    flag_qn1: bool
    failed: bool = False
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "residual_primal": self.residual_primal,
            "residual_dual": self.residual_dual,
            "flag_q1": self.flag_q1,
            "flag_qn1": self.flag_qn1,
            "failed": self.failed,
            "warnings": list(self.warnings),
        }


# float data: d and d* of exactly closed data are off by rounding of order eps * |k|
FLOAT_COMPAT_RTOL = 1e-10


def _vanishes(image: FourierForm, source: FourierForm) -> bool:
    if image.is_zero():
        return True
    if image.kind.exact:
        return False
    return _norm(image) <= FLOAT_COMPAT_RTOL * (1 + source.bandwidth()) * _norm(source)


def _norm(form: FourierForm) -> float:
    return math.sqrt(max(form.kind.real_part(l2_inner(form, form)), 0.0))


def _relative(residual: FourierForm, target: FourierForm) -> float:
    r = _norm(residual)
    scale = _norm(target)
    return r / scale if scale > 0 else r


def _report(sys: HodgeSystem, v: FourierForm) -> SolveReport:
    res_f = s_odd_fourier(sys.m, v) - sys.f
    res_g = s_odd_star_fourier(sys.m, v) - sys.g
    exact = sys.kind.exact
    report = SolveReport(
        backend=sys.kind.name,
        residual_primal=_relative(res_f, sys.f),
        residual_dual=_relative(res_g, sys.g),
        flag_q1=sys.flag_q1,
        flag_qn1=sys.flag_qn1,
    )
    if exact:
        report.failed = not (res_f.is_zero() and res_g.is_zero())
    if sys.flag_q1:
        report.warnings.append("q = 1 with g != 0: the L1 div-curl bound is not asserted (Hardy-space substitute applies)")
    if sys.flag_qn1:
        report.warnings.append("q = n-1 with f != 0: the L1 div-curl bound is not asserted (Hardy-space substitute applies)")
    return report


def _check_mean_zero(sys: HodgeSystem) -> None:
    for name, form in (("f", sys.f), ("g", sys.g)):
        if form.has_constant_mode():
            raise NonTrivialKernel(f"{name} has a constant mode; it is not in the range of S on the torus")


def solve_odd(sys: HodgeSystem) -> tuple[FourierForm, SolveReport]:
    """The mean-zero q-form v with ``S v = f`` and ``S* v = g``."""
    _check_mean_zero(sys)
    rhs = dstar_fourier(sys.f) + d_fourier(sys.g)
    v = box_inverse_power(sys.m + 1, rhs)
    return v, _report(sys, v)


def solve_first_order(sys: HodgeSystem) -> tuple[FourierForm, SolveReport]:
    """Solve ``d u = f, d* u = g`` (the m = 0 system with the same data)."""
    return solve_odd(sys.with_m(0))


def relate_box_m(v: FourierForm, u: FourierForm, m: int, rtol: float = 1e-9) -> bool:
    """True iff ``box^m v == u``: exactly for rational forms, to relative ``rtol`` for float forms."""
    if (v.n, v.q, v.kind) != (u.n, u.q, u.kind):
        return False
    out = v
    for _ in range(m):
        out = box_apply(out)
    if v.kind.exact:
        return out == u
    return _norm(out - u) <= rtol * max(_norm(u), _norm(out))


def split_solution(sys: HodgeSystem) -> tuple[FourierForm, FourierForm]:
    """``v = X + Y`` with X solving ``(f, 0)`` and Y solving ``(0, g)``."""
    X, _ = solve_odd(HodgeSystem.build(sys.n, sys.q, sys.m, f=sys.f, kind=sys.kind))
    Y, _ = solve_odd(HodgeSystem.build(sys.n, sys.q, sys.m, g=sys.g, kind=sys.kind))
    return X, Y


def dual_system(sys: HodgeSystem) -> HodgeSystem:
    """Hodge-star image of a system: its solution is ``*v`` for v solving ``sys``.

    Data map ``(f, g) -> (sf * *g, sg * *f)`` on degree ``n - q``, with signs
    from :func:`~oddhodge.fourier.star_intertwining_signs`.
    """
    sf, sg = star_intertwining_signs(sys.n, sys.q, sys.m)
    new_f = hodge_star_fourier(sys.g) * (sf or 1)
    new_g = hodge_star_fourier(sys.f) * (sg or 1)
    return HodgeSystem(sys.n, sys.n - sys.q, sys.m, new_f, new_g)
