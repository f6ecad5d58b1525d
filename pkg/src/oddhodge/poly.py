"""Exact differential calculus for forms with rational polynomial coefficients.

Coefficients live in sympy's sparse polynomial ring ``QQ[x1, ..., xn]``.
A polynomial form is an :class:`~oddhodge.exterior.AlgForm` whose scalars
are elements of that ring.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .exterior import AlgForm, _accumulate, _dropzeros, _merge, hodge_star, wedge

__all__ = [
    "poly_ring",
    "poly",
    "PolyForm",
    "poly_form",
    "d_poly",
    "dstar_poly",
    "s_odd_poly",
    "s_odd_star_poly",
    "AffineMap",
    "pullback_affine",
    "signed_permutation",
    "pythagorean_rotation",
    "random_poly_form",
    "codifferential_star_sign",
]

PolyForm = AlgForm


@lru_cache(maxsize=None)
def poly_ring(n: int):
    """The ring ``QQ[x1..xn]``; its generators are ``x1..xn``."""
    R, *_ = ring(",".join(f"x{i}" for i in range(1, n + 1)), QQ)
    return R


def _qq(c: Any):
    if isinstance(c, str):
        c = Fraction(c)
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    return QQ.convert(c)


def poly(n: int, terms: dict[Sequence[int], Any]):
    """Polynomial from ``{exponent tuple: coefficient}``."""
    R = poly_ring(n)
    return R.from_dict({tuple(int(e) for e in a): _qq(c) for a, c in terms.items() if c})


def poly_form(n: int, q: int, terms: dict[Sequence[int], Any]) -> AlgForm:
    """Polynomial form from ``{I: polynomial-or-rational}``; constants are lifted into the ring."""
    R = poly_ring(n)
    return AlgForm(n, q, {I: (c if getattr(c, "ring", None) is R else R(_qq(c))) for I, c in terms.items()})


def d_poly(omega: AlgForm) -> AlgForm:
    n, q = omega.n, omega.q
    if q + 1 > n or q < 0:
        return AlgForm.zero(n, q + 1)
    gens = poly_ring(n).gens
    out: dict = {}
    for I, c in omega.terms.items():
        for j in range(1, n + 1):
            if j in I:
                continue
            dc = c.diff(gens[j - 1])
            if not dc:
                continue
            sign, J = _merge((j,), I)
            _accumulate(out, J, dc if sign > 0 else -dc)
    return AlgForm._raw(n, q + 1, _dropzeros(out.items()))


def dstar_poly(omega: AlgForm) -> AlgForm:
    """Codifferential ``-sum_j d/dx_j (e_j ⌟ omega)``."""
    n, q = omega.n, omega.q
    if q < 1 or q > n:
        return AlgForm.zero(n, q - 1)
    gens = poly_ring(n).gens
    out: dict = {}
    for I, c in omega.terms.items():
        for p, i in enumerate(I):
            dc = c.diff(gens[i - 1])
            if not dc:
                continue
            # e_i ⌟ dx^I carries (-1)^p; the leading minus flips it once more
            _accumulate(out, I[:p] + I[p + 1:], -dc if p % 2 == 0 else dc)
    return AlgForm._raw(n, q - 1, _dropzeros(out.items()))


def s_odd_poly(m: int, omega: AlgForm) -> AlgForm:
    """``d (d* d)^m omega``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = omega
    for _ in range(m):
        out = dstar_poly(d_poly(out))
    return d_poly(out)


def s_odd_star_poly(m: int, omega: AlgForm) -> AlgForm:
    """``(d* d)^m d* omega``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = dstar_poly(omega)
    for _ in range(m):
        out = dstar_poly(d_poly(out))
    return out


def _frac(x: Any) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("affine maps must have exact rational entries")
    return Fraction(x)


@dataclass(frozen=True)
class AffineMap:
    """``psi(x) = A x + b`` with exact rational entries."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    is_isometry: bool = field(init=False)

    def __post_init__(self):
        A = tuple(tuple(_frac(a) for a in row) for row in self.A)
        n = len(A)
        if any(len(row) != n for row in A):
            raise ValueError("A must be square")
        b = tuple(_frac(x) for x in self.b) if self.b is not None else (Fraction(0),) * n
        if len(b) != n:
            raise ValueError("offset has wrong length")
        if _det(A) == 0:
            raise ValueError("A must be invertible")
        ata = [[sum(A[k][i] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        iso = all(ata[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "is_isometry", iso)

    @property
    def n(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)


def _det(A) -> Fraction:
    M = [list(row) for row in A]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            for k in range(c, n):
                M[r][k] -= f * M[c][k]
    return det


def _pullback_basis(psi: AffineMap, I: tuple[int, ...]) -> AlgForm:
    # psi^* dx^i = sum_j A_ij dx^j, wedged over i in I
    n = psi.n
    out = AlgForm(n, 0, {(): Fraction(1)})
    for i in I:
        out = wedge(out, AlgForm.covector(psi.A[i - 1]))
    return out


def pullback_affine(psi: AffineMap, omega: AlgForm) -> AlgForm:
    n = omega.n
    if psi.n != n:
        raise ValueError("map and form live in different dimensions")
    R = poly_ring(n)
    gens = R.gens
    subs = []
    for i in range(n):
        image = R(_qq(psi.b[i]))
        for j in range(n):
            if psi.A[i][j]:
                image += _qq(psi.A[i][j]) * gens[j]
        subs.append((gens[i], image))
    out: dict = {}
    for I, c in omega.terms.items():
        composed = c.compose(subs)
        if not composed:
            continue
        for J, a in _pullback_basis(psi, I).terms.items():
            _accumulate(out, J, composed * _qq(a))
    return AlgForm._raw(n, omega.q, _dropzeros(out.items()))


def signed_permutation(perm: Sequence[int], signs: Sequence[int], offset: Sequence[Any] | None = None) -> AffineMap:
    """``x_i -> signs[i] * x_{perm[i]}`` (0-based perm) plus an optional offset."""
    n = len(perm)
    A = [[0] * n for _ in range(n)]
    for i, (p, s) in enumerate(zip(perm, signs)):
        A[i][p] = s
    return AffineMap(tuple(map(tuple, A)), tuple(offset) if offset is not None else (0,) * n)


def pythagorean_rotation(n: int, i: int, j: int, triple=(3, 4, 5), offset: Sequence[Any] | None = None) -> AffineMap:
    """Rational rotation acting in the (i, j) coordinate plane (0-based) with cosine a/c and sine b/c."""
    a, b, c = triple
    if a * a + b * b != c * c:
        raise ValueError(f"{triple} is not a Pythagorean triple")
    A = [[Fraction(int(r == s)) for s in range(n)] for r in range(n)]
    A[i][i] = Fraction(a, c)
    A[i][j] = Fraction(-b, c)
    A[j][i] = Fraction(b, c)
    A[j][j] = Fraction(a, c)
    return AffineMap(tuple(map(tuple, A)), tuple(offset) if offset is not None else (0,) * n)


def random_poly_form(
    n: int,
    q: int,
    rng: np.random.Generator,
    max_degree: int = 4,
    monomials: int = 4,
    density: float = 0.75,
) -> AlgForm:
    """Random polynomial form: each component present with probability ``density``,
    each present component a sum of up to ``monomials`` random terms with small integer coefficients."""
    from .exterior import basis

    terms = {}
    for I in basis(n, q):
        if rng.random() >= density:
            continue
        coeffs = {}
        for _ in range(monomials):
            deg = int(rng.integers(0, max_degree + 1))
            alpha = np.bincount(rng.integers(0, n, size=deg), minlength=n)
            coeffs[tuple(int(a) for a in alpha)] = int(rng.integers(1, 6)) * int(rng.choice((-1, 1)))
        p = poly(n, coeffs)
        if p:
            terms[I] = p
    return AlgForm(n, q, terms)


def codifferential_star_sign(n: int, q: int) -> int:
    """The sign ``s`` with ``d* = s * (*d*)`` on polynomial q-forms, found by probing.

    Returns 0 when both sides vanish identically (q = 0 or q > n).
    """
    if q < 1 or q > n:
        return 0
    gens = poly_ring(n).gens
    # a generic probe: x_{i} * x_1 ... x_n on every component makes every derivative nonzero
    probe_coeff = 1
    for x in gens:
        probe_coeff = probe_coeff * (x + 1)
    from .exterior import basis

    probe = AlgForm(n, q, {I: probe_coeff * (k + 2) for k, I in enumerate(basis(n, q))})
    lhs = dstar_poly(probe)
    rhs = hodge_star(d_poly(hodge_star(probe)))
    if lhs == rhs:
        return 1
    if lhs == -rhs:
        return -1
    raise ArithmeticError(f"d* is not a signed multiple of *d* for n={n}, q={q}")
