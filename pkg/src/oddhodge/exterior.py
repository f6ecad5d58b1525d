"""Constant-coefficient exterior algebra on R^n with the standard metric.

Basis covectors ``dx^I`` are named by strictly increasing, 1-based index
tuples. :class:`AlgForm` is a sparse map from such tuples to scalars taken
from any commutative ring supporting ``+``, ``-``, ``*`` and truthiness as a
zero test (Fractions, complex numbers, sympy Gaussian rationals, sympy
polynomial ring elements).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import DegreeMismatch, DimensionMismatch
from .scalars import conjugate

__all__ = [
    "IndexSet",
    "AlgForm",
    "basis",
    "merge_sign",
    "wedge",
    "hodge_star",
    "star_sign",
    "interior",
    "pointwise_inner",
]


@dataclass(frozen=True)
class IndexSet:
    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        _check_indices(idx, self.n)

    @property
    def q(self) -> int:
        return len(self.indices)


def _check_indices(idx: tuple[int, ...], n: int) -> None:
    if any(i < 1 or i > n for i in idx):
        raise ValueError(f"index out of range 1..{n}: {idx}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"indices must be strictly increasing: {idx}")


@lru_cache(maxsize=None)
def basis(n: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Increasing index tuples of length q in lexicographic order (empty if q is out of range)."""
    if q < 0 or q > n:
        return ()
    return tuple(combinations(range(1, n + 1), q))


def _merge(I: tuple[int, ...], J: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    if set(I) & set(J):
        return 0, ()
    # parity of the sorting permutation = number of inversions between I and J
    inversions = sum(1 for i in I for j in J if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(I + J))


def merge_sign(I: IndexSet, J: IndexSet) -> tuple[int, IndexSet | None]:
    """Sign and merged index set for ``dx^I ^ dx^J``; sign 0 (and None) on overlap."""
    if I.n != J.n:
        raise DimensionMismatch(f"ambient dimensions differ: {I.n} vs {J.n}")
    sign, merged = _merge(I.indices, J.indices)
    if sign == 0:
        return 0, None
    return sign, IndexSet(merged, I.n)


def _is_zero(c: Any) -> bool:
    return not c


class AlgForm:
    """Immutable sparse q-form at a point: ``sum_I terms[I] dx^I``.

    Zero coefficients are never stored. Degrees outside ``0..n`` are allowed
    and always hold the zero form.
    """

    __slots__ = ("n", "q", "_terms")

    def __init__(self, n: int, q: int, terms: Mapping[Sequence[int], Any] | None = None):
        self.n = int(n)
        self.q = int(q)
        clean: dict[tuple[int, ...], Any] = {}
        for I, c in (terms or {}).items():
            I = tuple(int(i) for i in I)
            if len(I) != self.q:
                raise DegreeMismatch(f"index set {I} does not have length {self.q}")
            _check_indices(I, self.n)
            if not _is_zero(c):
                clean[I] = c
        self._terms = clean

    @classmethod
    def _raw(cls, n: int, q: int, terms: dict) -> "AlgForm":
        # trusted constructor: keys already validated, zeros already dropped
        obj = cls.__new__(cls)
        obj.n, obj.q, obj._terms = n, q, terms
        return obj

    @classmethod
    def zero(cls, n: int, q: int) -> "AlgForm":
        return cls._raw(n, q, {})

    @classmethod
    def basis_form(cls, n: int, I: Sequence[int], coeff: Any = 1) -> "AlgForm":
        return cls(n, len(I), {tuple(I): coeff})

    @classmethod
    def covector(cls, k: Sequence[Any]) -> "AlgForm":
        """The 1-form ``sum_j k_j dx^j``."""
        n = len(k)
        return cls(n, 1, {(j + 1,): c for j, c in enumerate(k)})

    @property
    def terms(self) -> Mapping[tuple[int, ...], Any]:
        return MappingProxyType(self._terms)

    def coefficient(self, I: Sequence[int]) -> Any:
        return self._terms.get(tuple(I), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def map_coefficients(self, fn: Callable[[Any], Any]) -> "AlgForm":
        return AlgForm._raw(self.n, self.q, _dropzeros((I, fn(c)) for I, c in self._terms.items()))

    def _check_same(self, other: "AlgForm") -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"ambient dimensions differ: {self.n} vs {other.n}")
        if self.q != other.q:
            raise DegreeMismatch(f"degrees differ: {self.q} vs {other.q}")

    def __add__(self, other: "AlgForm") -> "AlgForm":
        if not isinstance(other, AlgForm):
            return NotImplemented
        self._check_same(other)
        out = dict(self._terms)
        for I, c in other._terms.items():
            out[I] = out[I] + c if I in out else c
        return AlgForm._raw(self.n, self.q, _dropzeros(out.items()))

    def __neg__(self) -> "AlgForm":
        return AlgForm._raw(self.n, self.q, {I: -c for I, c in self._terms.items()})

    def __sub__(self, other: "AlgForm") -> "AlgForm":
        if not isinstance(other, AlgForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Any) -> "AlgForm":
        if isinstance(scalar, AlgForm):
            return NotImplemented
        return self.map_coefficients(lambda c: c * scalar)

    def __rmul__(self, scalar: Any) -> "AlgForm":
        if isinstance(scalar, AlgForm):
            return NotImplemented
        return self.map_coefficients(lambda c: scalar * c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgForm):
            return NotImplemented
        if (self.n, self.q) != (other.n, other.q) or self._terms.keys() != other._terms.keys():
            return False
        return all(_is_zero(c - other._terms[I]) for I, c in self._terms.items())

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self._terms:
            return f"AlgForm(n={self.n}, q={self.q}, 0)"
        body = " + ".join(f"({c})dx^{I}" for I, c in sorted(self._terms.items()))
        return f"AlgForm(n={self.n}, q={self.q}, {body})"


def _dropzeros(items: Iterable[tuple[tuple[int, ...], Any]]) -> dict:
    return {I: c for I, c in items if not _is_zero(c)}


def _accumulate(out: dict, I: tuple[int, ...], c: Any) -> None:
    if I in out:
        out[I] = out[I] + c
    else:
        out[I] = c


def wedge(omega: AlgForm, eta: AlgForm) -> AlgForm:
    if omega.n != eta.n:
        raise DimensionMismatch(f"ambient dimensions differ: {omega.n} vs {eta.n}")
    n, q = omega.n, omega.q + eta.q
    out: dict = {}
    if 0 <= q <= n:
        for I, a in omega._terms.items():
            for J, b in eta._terms.items():
                sign, K = _merge(I, J)
                if sign:
                    _accumulate(out, K, a * b if sign > 0 else -(a * b))
    return AlgForm._raw(n, q, _dropzeros(out.items()))


@lru_cache(maxsize=None)
def star_sign(n: int, I: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """``(s, I^c)`` with ``*dx^I = s dx^{I^c}``, chosen so ``dx^I ^ *dx^I`` is the volume form."""
    comp = tuple(j for j in range(1, n + 1) if j not in I)
    sign, _ = _merge(I, comp)
    return sign, comp


def hodge_star(omega: AlgForm) -> AlgForm:
    n = omega.n
    out = {}
    for I, c in omega._terms.items():
        s, comp = star_sign(n, I)
        out[comp] = c if s > 0 else -c
    return AlgForm._raw(n, n - omega.q, out)


def interior(k: Sequence[Any], omega: AlgForm) -> AlgForm:
    """Contraction ``k ⌟ omega`` of a covector (identified with a vector) into a form."""
    if len(k) != omega.n:
        raise DimensionMismatch(f"covector has length {len(k)}, form lives in R^{omega.n}")
    if omega.q < 1:
        raise DegreeMismatch("interior product needs a form of degree >= 1")
    out: dict = {}
    for I, c in omega._terms.items():
        for p, i in enumerate(I):
            kc = k[i - 1]
            if _is_zero(kc):
                continue
            term = kc * c
            _accumulate(out, I[:p] + I[p + 1:], term if p % 2 == 0 else -term)
    return AlgForm._raw(omega.n, omega.q - 1, _dropzeros(out.items()))


def pointwise_inner(omega: AlgForm, eta: AlgForm, conj: Callable[[Any], Any] = conjugate) -> Any:
    """``sum_I omega_I * conj(eta_I)``; pass ``conj=lambda c: c`` for real rings without a conjugation."""
    omega._check_same(eta)
    total: Any = 0
    for I, c in omega._terms.items():
        if I in eta._terms:
            total = total + c * conj(eta._terms[I])
    return total
