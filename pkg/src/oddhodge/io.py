"""JSON (de)serialization of forms and Hodge systems.

Form file::

    {"n": 2, "q": 0, "backend": "fourier", "scalar": "rational",
     "terms": [{"k": [1, 1], "I": [], "re": "1/2", "im": "0/1"}]}

Polynomial terms are ``{"alpha": [...], "I": [...], "coeff": "p/q"}``.
Rationals are always strings; floats are JSON numbers written with
``repr`` precision so they round-trip bit for bit.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from sympy.polys.domains import QQ

from .exterior import AlgForm
from .fourier import FourierForm
from .poly import poly_ring
from .scalars import kind_by_name
from .solver import HodgeSystem

__all__ = [
    "FormFileError",
    "form_to_dict",
    "form_from_dict",
    "dumps_form",
    "loads_form",
    "system_to_dict",
    "system_from_dict",
    "rational_str",
]


class FormFileError(ValueError):
    """Malformed form or system file."""


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _parse_rational(s: Any) -> Fraction:
    if not isinstance(s, str):
        raise FormFileError(f"rational values must be strings like 'p/q', got {s!r}")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormFileError(f"bad rational {s!r}") from exc
    if "/" in s and int(s.split("/")[1]) <= 0:
        raise FormFileError(f"denominator must be positive in {s!r}")
    return value


def _parse_float(x: Any) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormFileError(f"float values must be JSON numbers, got {x!r}")
    return float(x)


def form_to_dict(form: AlgForm | FourierForm) -> dict:
    if isinstance(form, FourierForm):
        terms = []
        mask = form.kind.nonzero_mask(form.coeffs)
        for k, row, present in zip(form.modes.tolist(), form.coeffs, mask):
            for I, c, keep in zip(form.components, row, present):
                if not keep:
                    continue
                re, im = form.kind.as_parts(c)
                if form.kind.exact:
                    re, im = rational_str(re), rational_str(im)
                terms.append({"k": list(k), "I": list(I), "re": re, "im": im})
        return {"n": form.n, "q": form.q, "backend": "fourier", "scalar": form.kind.name, "terms": terms}
    terms = []
    for I, p in sorted(form.terms.items()):
        for alpha, c in sorted(p.terms()):
            terms.append(
                {"alpha": list(alpha), "I": list(I), "coeff": rational_str(Fraction(int(c.numerator), int(c.denominator)))}
            )
    return {"n": form.n, "q": form.q, "backend": "poly", "scalar": "rational", "terms": terms}


def _int_list(x: Any, what: str) -> list[int]:
    if not isinstance(x, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in x):
        raise FormFileError(f"{what} must be a list of integers, got {x!r}")
    return x


def form_from_dict(d: Any) -> AlgForm | FourierForm:
    if not isinstance(d, dict):
        raise FormFileError("form must be a JSON object")
    try:
        n, q, backend, scalar, terms = d["n"], d["q"], d["backend"], d["scalar"], d["terms"]
    except KeyError as exc:
        raise FormFileError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(n, int) or n < 1 or not isinstance(q, int):
        raise FormFileError("n must be a positive integer and q an integer")
    if not isinstance(terms, list):
        raise FormFileError("terms must be a list")
    try:
        if backend == "fourier":
            kind = kind_by_name(scalar)
            spectrum: dict = {}
            for t in terms:
                k = tuple(_int_list(t["k"], "k"))
                I = tuple(_int_list(t["I"], "I"))
                if kind.exact:
                    c = kind.from_parts(_parse_rational(t["re"]), _parse_rational(t["im"]))
                else:
                    c = kind.from_parts(_parse_float(t["re"]), _parse_float(t["im"]))
                comp = spectrum.setdefault(k, {})
                comp[I] = comp[I] + c if I in comp else c
            return FourierForm(n, q, spectrum, kind)
        if backend == "poly":
            if scalar != "rational":
                raise FormFileError("polynomial forms only support rational scalars")
            R = poly_ring(n)
            comps: dict = {}
            for t in terms:
                alpha = tuple(_int_list(t["alpha"], "alpha"))
                I = tuple(_int_list(t["I"], "I"))
                if len(alpha) != n or any(a < 0 for a in alpha):
                    raise FormFileError(f"bad exponent {alpha}")
                c = _parse_rational(t["coeff"])
                comps[I] = comps.get(I, R.zero) + R({alpha: QQ(c.numerator, c.denominator)})
            return AlgForm(n, q, comps)
    except FormFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormFileError(f"invalid term: {exc}") from exc
    raise FormFileError(f"unknown backend {backend!r}")


def dumps_form(form: AlgForm | FourierForm) -> str:
    return json.dumps(form_to_dict(form), indent=1) + "\n"


def loads_form(text: str) -> AlgForm | FourierForm:
    try:
        return form_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise FormFileError(f"invalid JSON: {exc}") from exc


def system_to_dict(sys: HodgeSystem) -> dict:
    return {"n": sys.n, "q": sys.q, "m": sys.m, "f": form_to_dict(sys.f), "g": form_to_dict(sys.g)}


def system_from_dict(d: Any) -> HodgeSystem:
    """Parse a system file; compatibility is checked by :class:`HodgeSystem` (IncompatibleData)."""
    if not isinstance(d, dict):
        raise FormFileError("system must be a JSON object")
    try:
        n, q, m = d["n"], d["q"], d["m"]
        f, g = form_from_dict(d["f"]), form_from_dict(d["g"])
    except KeyError as exc:
        raise FormFileError(f"missing field {exc.args[0]!r}") from None
    if not all(isinstance(x, int) for x in (n, q, m)):
        raise FormFileError("n, q, m must be integers")
    if not isinstance(f, FourierForm) or not isinstance(g, FourierForm):
        raise FormFileError("system data must be Fourier forms")
    if f.n != n or g.n != n or f.q != q + 1 or g.q != q - 1:
        raise FormFileError("f must have degree q+1 and g degree q-1 in R^n")
    if f.kind is not g.kind:
        raise FormFileError("f and g must use the same scalar type")
    return HodgeSystem(n, q, m, f, g)
