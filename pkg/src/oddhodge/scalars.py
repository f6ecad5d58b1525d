"""Scalar rings used by the Fourier backend.

Two kinds are supported: exact Gaussian rationals (sympy's ``QQ_I`` domain)
and complex floats. Operator code is written once against the small
:class:`ScalarKind` surface below.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import numpy as np
from sympy.polys.domains import QQ, QQ_I

__all__ = ["ScalarKind", "RATIONAL", "FLOAT", "kind_by_name", "gauss", "conjugate"]


def gauss(re: Any = 0, im: Any = 0):
    """Exact Gaussian rational ``re + i*im`` from ints, Fractions or 'p/q' strings."""
    return QQ_I(_to_qq(re), _to_qq(im))


def _to_qq(x: Any):
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return QQ.convert(x)


def _qq_to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def conjugate(x: Any) -> Any:
    if isinstance(x, QQ_I.dtype):
        return QQ_I(x.x, -x.y)
    if isinstance(x, (complex, np.complexfloating)):
        return x.conjugate()
    return x


@dataclass(frozen=True)
class ScalarKind:
    name: str
    dtype: Any
    zero: Any
    one: Any
    i_unit: Any
    convert: Callable[[Any], Any]
    to_complex: Callable[[Any], complex]
    exact: bool

    def conj_array(self, a: np.ndarray) -> np.ndarray:
        if self.exact:
            return _conj_obj(a) if a.size else a.copy()
        return np.conj(a)

    def nonzero_mask(self, a: np.ndarray) -> np.ndarray:
        if self.exact:
            return _bool_obj(a).astype(bool) if a.size else np.zeros(a.shape, bool)
        return a != 0

    def zeros(self, shape) -> np.ndarray:
        if self.exact:
            out = np.empty(shape, dtype=object)
            out.fill(self.zero)
            return out
        return np.zeros(shape, dtype=complex)

    def from_ints(self, a: np.ndarray) -> np.ndarray:
        """Integer array cast so it multiplies cleanly with this kind's coefficients."""
        return a.astype(object) if self.exact else a

    def real_part(self, x: Any) -> float:
        return float(x.x) if self.exact else float(np.real(x))

    def as_parts(self, x: Any) -> tuple:
        """Real and imaginary parts: Fractions for exact scalars, floats otherwise."""
        if self.exact:
            return _qq_to_fraction(x.x), _qq_to_fraction(x.y)
        x = complex(x)
        return x.real, x.imag

    def from_parts(self, re: Any, im: Any) -> Any:
        if self.exact:
            return gauss(re, im)
        return complex(float(re), float(im))


_conj_obj = np.frompyfunc(conjugate, 1, 1)
_bool_obj = np.frompyfunc(bool, 1, 1)


def _exact_convert(x: Any):
    if isinstance(x, QQ_I.dtype):
        return x
    if isinstance(x, complex):
        raise TypeError("complex floats are not exact scalars")
    return gauss(x, 0)


RATIONAL = ScalarKind(
    name="rational",
    dtype=object,
    zero=QQ_I(0, 0),
    one=QQ_I(1, 0),
    i_unit=QQ_I(0, 1),
    convert=_exact_convert,
    to_complex=lambda x: complex(float(x.x), float(x.y)),
    exact=True,
)

FLOAT = ScalarKind(
    name="float",
    dtype=complex,
    zero=0j,
    one=1 + 0j,
    i_unit=1j,
    convert=complex,
    to_complex=complex,
    exact=False,
)


def kind_by_name(name: str) -> ScalarKind:
    try:
        return {"rational": RATIONAL, "float": FLOAT}[name]
    except KeyError:
        raise ValueError(f"unknown scalar kind {name!r}") from None
