"""Trigonometric-polynomial forms on the torus [0, 2pi)^n as sparse Fourier spectra.

A :class:`FourierForm` stores its spectrum as a pair of arrays: ``modes``
(M x n integer wave vectors, sorted, unique) and ``coeffs`` (M x C, one
column per basis covector in ``basis(n, q)`` order). The coefficient dtype is
``object`` holding exact Gaussian rationals, or ``complex128``. Every operator
here is a Fourier multiplier, so it acts row by row.

The represented form is ``sum_k sum_I coeffs[k, I] e^{i k.x} dx^I``; inner
products use the normalized Haar measure on the torus.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import DegreeMismatch, DimensionMismatch, NonTrivialKernel, TranslationNotExact
from .exterior import AlgForm, _merge, basis, star_sign
from .scalars import RATIONAL, ScalarKind, gauss

__all__ = [
    "FourierForm",
    "d_fourier",
    "dstar_fourier",
    "box_apply",
    "box_inverse_power",
    "s_odd_fourier",
    "s_odd_star_fourier",
    "hodge_star_fourier",
    "l2_inner",
    "deriv_multi",
    "LatticeIsometry",
    "pullback_lattice_isometry",
    "random_fourier_form",
    "star_intertwining_signs",
]


@lru_cache(maxsize=None)
def _column(n: int, q: int) -> dict[tuple[int, ...], int]:
    return {I: c for c, I in enumerate(basis(n, q))}


@lru_cache(maxsize=None)
def _wedge_table(n: int, q: int) -> tuple[tuple[int, int, int, int], ...]:
    # rows (src column, j, dst column, sign) for dx^j ^ dx^I
    dst = _column(n, q + 1)
    rows = []
    for src, I in enumerate(basis(n, q)):
        for j in range(1, n + 1):
            sign, J = _merge((j,), I)
            if sign:
                rows.append((src, j - 1, dst[J], sign))
    return tuple(rows)


@lru_cache(maxsize=None)
def _interior_table(n: int, q: int) -> tuple[tuple[int, int, int, int], ...]:
    # rows (src column, i, dst column, sign) for e_i ⌟ dx^I
    dst = _column(n, q - 1)
    rows = []
    for src, I in enumerate(basis(n, q)):
        for p, i in enumerate(I):
            rows.append((src, i - 1, dst[I[:p] + I[p + 1:]], -1 if p % 2 else 1))
    return tuple(rows)


class FourierForm:
    __slots__ = ("n", "q", "kind", "modes", "coeffs")

    def __init__(
        self,
        n: int,
        q: int,
        terms: Mapping[Sequence[int], Mapping[Sequence[int], Any] | AlgForm] | None = None,
        kind: ScalarKind = RATIONAL,
    ):
        """Build from ``{k: {I: coefficient}}`` (or ``{k: AlgForm}``); repeated entries add up."""
        cols = _column(n, q)
        rows, vals = [], []
        for k, comp in (terms or {}).items():
            k = tuple(int(x) for x in k)
            if len(k) != n:
                raise DimensionMismatch(f"mode {k} does not have length {n}")
            if isinstance(comp, AlgForm):
                if (comp.n, comp.q) != (n, q):
                    raise DegreeMismatch("mode coefficient has the wrong shape")
                comp = comp.terms
            row = kind.zeros(len(cols))
            for I, c in comp.items():
                I = tuple(int(i) for i in I)
                if I not in cols:
                    raise DegreeMismatch(f"{I} is not a basis index set of degree {q} in R^{n}")
                row[cols[I]] = row[cols[I]] + kind.convert(c)
            rows.append(k)
            vals.append(row)
        modes = np.array(rows, dtype=np.int64).reshape(len(rows), n)
        coeffs = np.array(vals, dtype=kind.dtype).reshape(len(rows), len(cols))
        self._set(n, q, kind, *_canonical(modes, coeffs, kind))

    def _set(self, n, q, kind, modes, coeffs):
        self.n, self.q, self.kind, self.modes, self.coeffs = n, q, kind, modes, coeffs
        modes.setflags(write=False)
        coeffs.setflags(write=False)

    @classmethod
    def from_arrays(cls, n: int, q: int, modes: np.ndarray, coeffs: np.ndarray, kind: ScalarKind) -> "FourierForm":
        modes = np.asarray(modes, dtype=np.int64).reshape(-1, n)
        ncols = len(basis(n, q))
        coeffs = np.asarray(coeffs, dtype=kind.dtype).reshape(len(modes), ncols)
        obj = cls.__new__(cls)
        obj._set(n, q, kind, *_canonical(modes, coeffs, kind))
        return obj

    @classmethod
    def zero(cls, n: int, q: int, kind: ScalarKind = RATIONAL) -> "FourierForm":
        return cls.from_arrays(n, q, np.zeros((0, n), np.int64), kind.zeros((0, len(basis(n, q)))), kind)

    @classmethod
    def single(cls, k: Sequence[int], I: Sequence[int], coeff: Any = 1, kind: ScalarKind = RATIONAL) -> "FourierForm":
        """``coeff * e^{i k.x} dx^I``."""
        return cls(len(k), len(I), {tuple(k): {tuple(I): coeff}}, kind)

    # --- views -----------------------------------------------------------

    @property
    def components(self) -> tuple[tuple[int, ...], ...]:
        return basis(self.n, self.q)

    @property
    def terms(self) -> dict[tuple[int, ...], AlgForm]:
        comps = self.components
        return {
            tuple(int(x) for x in k): AlgForm(self.n, self.q, dict(zip(comps, row)))
            for k, row in zip(self.modes, self.coeffs)
        }

    def coefficient(self, k: Sequence[int], I: Sequence[int]) -> Any:
        hit = np.flatnonzero((self.modes == np.asarray(k)).all(axis=1)) if len(self.modes) else []
        if len(hit) == 0:
            return self.kind.zero
        return self.coeffs[hit[0], _column(self.n, self.q)[tuple(I)]]

    def is_zero(self) -> bool:
        return len(self.modes) == 0

    def has_constant_mode(self) -> bool:
        return bool(len(self.modes)) and bool((self.modes == 0).all(axis=1).any())

    def bandwidth(self) -> int:
        return int(np.abs(self.modes).max()) if len(self.modes) else 0

    def to_kind(self, kind: ScalarKind) -> "FourierForm":
        if kind is self.kind:
            return self
        if kind.exact:
            raise TypeError("cannot convert float coefficients to exact scalars")
        conv = np.array([[self.kind.to_complex(c) for c in row] for row in self.coeffs], dtype=complex)
        return FourierForm.from_arrays(self.n, self.q, self.modes, conv.reshape(self.coeffs.shape), kind)

    def mean_zero_part(self) -> "FourierForm":
        keep = ~(self.modes == 0).all(axis=1)
        return FourierForm.from_arrays(self.n, self.q, self.modes[keep], self.coeffs[keep], self.kind)

    # --- linear structure ------------------------------------------------

    def _check_same(self, other: "FourierForm") -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"ambient dimensions differ: {self.n} vs {other.n}")
        if self.q != other.q:
            raise DegreeMismatch(f"degrees differ: {self.q} vs {other.q}")
        if self.kind is not other.kind:
            raise TypeError("cannot mix exact and float forms")

    def __add__(self, other: "FourierForm") -> "FourierForm":
        if not isinstance(other, FourierForm):
            return NotImplemented
        self._check_same(other)
        return FourierForm.from_arrays(
            self.n,
            self.q,
            np.concatenate([self.modes, other.modes]),
            np.concatenate([self.coeffs, other.coeffs]),
            self.kind,
        )

    def __neg__(self) -> "FourierForm":
        return self._with_coeffs(-self.coeffs)

    def __sub__(self, other: "FourierForm") -> "FourierForm":
        if not isinstance(other, FourierForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Any) -> "FourierForm":
        if isinstance(scalar, FourierForm):
            return NotImplemented
        return FourierForm.from_arrays(self.n, self.q, self.modes, self.coeffs * self.kind.convert(scalar), self.kind)

    __rmul__ = __mul__

    def _with_coeffs(self, coeffs: np.ndarray, q: int | None = None) -> "FourierForm":
        return FourierForm.from_arrays(self.n, self.q if q is None else q, self.modes, coeffs, self.kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FourierForm):
            return NotImplemented
        if (self.n, self.q, self.kind) != (other.n, other.q, other.kind):
            return False
        if self.modes.shape != other.modes.shape or not np.array_equal(self.modes, other.modes):
            return False
        return bool(np.all(self.coeffs == other.coeffs)) if self.coeffs.size else True

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FourierForm(n={self.n}, q={self.q}, kind={self.kind.name}, modes={len(self.modes)})"


def _canonical(modes: np.ndarray, coeffs: np.ndarray, kind: ScalarKind):
    if len(modes) == 0 or coeffs.shape[1] == 0:
        n = modes.shape[1]
        return np.zeros((0, n), np.int64), kind.zeros((0, coeffs.shape[1]))
    uniq, inverse = np.unique(modes, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    if len(uniq) != len(modes):
        summed = kind.zeros((len(uniq), coeffs.shape[1]))
        np.add.at(summed, inverse, coeffs)
        coeffs = summed
    else:
        # np.unique sorts; reorder coefficient rows to match
        order = np.empty(len(inverse), dtype=np.int64)
        order[inverse] = np.arange(len(inverse))
        coeffs = coeffs[order]
    keep = kind.nonzero_mask(coeffs).any(axis=1)
    return np.ascontiguousarray(uniq[keep]), np.ascontiguousarray(coeffs[keep])


# --- operators -----------------------------------------------------------


def d_fourier(omega: FourierForm) -> FourierForm:
    """Exterior derivative: symbol ``i k ^``."""
    n, q, kind = omega.n, omega.q, omega.kind
    out = kind.zeros((len(omega.modes), len(basis(n, q + 1))))
    if q + 1 <= n and q >= 0 and len(omega.modes):
        k = kind.from_ints(omega.modes)
        a = omega.coeffs
        for src, j, dst, sign in _wedge_table(n, q):
            out[:, dst] += sign * k[:, j] * a[:, src]
        out = out * kind.i_unit
    return omega._with_coeffs(out, q + 1)


def dstar_fourier(omega: FourierForm) -> FourierForm:
    """Codifferential: symbol ``-i k ⌟``."""
    n, q, kind = omega.n, omega.q, omega.kind
    out = kind.zeros((len(omega.modes), len(basis(n, q - 1))))
    if 1 <= q <= n and len(omega.modes):
        k = kind.from_ints(omega.modes)
        a = omega.coeffs
        for src, i, dst, sign in _interior_table(n, q):
            out[:, dst] += sign * k[:, i] * a[:, src]
        out = out * (-kind.i_unit)
    return omega._with_coeffs(out, q - 1)


def _ksq(omega: FourierForm) -> np.ndarray:
    return (omega.modes * omega.modes).sum(axis=1)


def box_apply(omega: FourierForm) -> FourierForm:
    """Hodge Laplacian ``dd* + d*d``: multiplies mode k by ``|k|^2``."""
    ksq = omega.kind.from_ints(_ksq(omega))
    return omega._with_coeffs(omega.coeffs * ksq[:, None])


def box_inverse_power(s: int, omega: FourierForm) -> FourierForm:
    """Inverse of ``box^s`` on mean-zero forms."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    ksq = _ksq(omega)
    if (ksq == 0).any():
        raise NonTrivialKernel("form has a constant (k = 0) mode; box^s is not invertible there")
    denom = omega.kind.from_ints(ksq**s)
    if omega.kind.exact:
        coeffs = omega.coeffs / denom[:, None]
    else:
        coeffs = omega.coeffs / denom[:, None].astype(float)
    return omega._with_coeffs(coeffs)


def s_odd_fourier(m: int, omega: FourierForm) -> FourierForm:
    """``d (d* d)^m omega``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = omega
    for _ in range(m):
        out = dstar_fourier(d_fourier(out))
    return d_fourier(out)


def s_odd_star_fourier(m: int, omega: FourierForm) -> FourierForm:
    """``(d* d)^m d* omega``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = dstar_fourier(omega)
    for _ in range(m):
        out = dstar_fourier(d_fourier(out))
    return out


@lru_cache(maxsize=None)
def _star_table(n: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    cols = _column(n, n - q)
    dst, sgn = [], []
    for I in basis(n, q):
        s, comp = star_sign(n, I)
        dst.append(cols[comp])
        sgn.append(s)
    return np.array(dst, dtype=np.int64), np.array(sgn, dtype=np.int64)


def hodge_star_fourier(omega: FourierForm) -> FourierForm:
    n, q, kind = omega.n, omega.q, omega.kind
    if q < 0 or q > n:
        return FourierForm.zero(n, n - q, kind)
    dst, sgn = _star_table(n, q)
    out = kind.zeros(omega.coeffs.shape)
    out[:, dst] = omega.coeffs * kind.from_ints(sgn)[None, :]
    return omega._with_coeffs(out, n - q)


def l2_inner(omega: FourierForm, eta: FourierForm) -> Any:
    """``<omega, eta>`` under the normalized measure, conjugate-linear in ``eta``."""
    omega._check_same(eta)
    kind = omega.kind
    if not len(omega.modes) or not len(eta.modes):
        return kind.zero
    index = {tuple(k): r for r, k in enumerate(eta.modes.tolist())}
    ia, ib = [], []
    for r, k in enumerate(omega.modes.tolist()):
        hit = index.get(tuple(k))
        if hit is not None:
            ia.append(r)
            ib.append(hit)
    if not ia:
        return kind.zero
    prod = omega.coeffs[ia] * kind.conj_array(eta.coeffs[ib])
    if not kind.exact:
        return complex(prod.sum())
    total = kind.zero
    for v in prod.ravel():
        total = total + v
    return total


def deriv_multi(beta: Sequence[int], omega: FourierForm) -> FourierForm:
    """Componentwise ``d^|beta| / dx^beta``: symbol ``prod_j (i k_j)^beta_j``."""
    if len(beta) != omega.n or any(b < 0 for b in beta):
        raise ValueError(f"bad multi-index {beta} for R^{omega.n}")
    kind = omega.kind
    k = omega.modes.astype(object)
    factor = np.ones(len(k), dtype=object)
    for j, b in enumerate(beta):
        if b:
            factor = factor * k[:, j] ** b
    if not kind.exact:
        factor = factor.astype(float)
    phase = [kind.one, kind.i_unit, -kind.one, -kind.i_unit][sum(beta) % 4]
    return omega._with_coeffs(omega.coeffs * factor[:, None] * phase)


class LatticeIsometry:
    """Torus-preserving isometry ``x -> P x + pi * shift`` with P a signed permutation matrix.

    ``shift`` is given in units of pi. The exact backend needs every entry of
    ``shift`` to be a multiple of 1/2 so the phases ``e^{i k.a}`` stay Gaussian
    rational.
    """

    def __init__(self, P: Sequence[Sequence[int]], shift: Sequence[Any] | None = None):
        P = np.asarray(P, dtype=np.int64)
        n = P.shape[0]
        if P.shape != (n, n) or not (np.abs(P).sum(axis=0) == 1).all() or not (np.abs(P).sum(axis=1) == 1).all():
            raise ValueError("P must be a signed permutation matrix")
        self.P = P
        self.n = n
        self.shift = tuple(shift) if shift is not None else (0,) * n
        if len(self.shift) != n:
            raise ValueError("shift has wrong length")

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "LatticeIsometry":
        P = np.eye(n, dtype=np.int64)
        P[[i, j]] = P[[j, i]]
        return cls(P)

    def _quarter_turns(self) -> np.ndarray | None:
        from fractions import Fraction

        out = []
        for s in self.shift:
            try:
                t = Fraction(s) * 2
            except (TypeError, ValueError):
                return None
            if t.denominator != 1:
                return None
            out.append(int(t))
        return np.array(out, dtype=np.int64)


def pullback_lattice_isometry(psi: LatticeIsometry, omega: FourierForm) -> FourierForm:
    n, q, kind = omega.n, omega.q, omega.kind
    if psi.n != n:
        raise DimensionMismatch("isometry and form live in different dimensions")
    P = psi.P
    # omega(Px + a) = sum_k a_k e^{ik.a} e^{i (P^T k).x}
    new_modes = omega.modes @ P
    if kind.exact:
        turns = psi._quarter_turns()
        if turns is None:
            raise TranslationNotExact(f"shift {psi.shift} (units of pi) leaves the Gaussian rationals")
        powers = [kind.one, kind.i_unit, -kind.one, -kind.i_unit]
        phase = np.array([powers[int(t) % 4] for t in omega.modes @ turns], dtype=object)
    else:
        a = np.pi * np.array([float(s) for s in psi.shift])
        phase = np.exp(1j * (omega.modes @ a))
    # psi^* dx^i = sum_j P_ij dx^j; for a signed permutation each dx^I maps to +-dx^J
    perm = np.abs(P).argmax(axis=1) + 1
    eps = P[np.arange(n), perm - 1]
    cols = _column(n, q)
    out = kind.zeros(omega.coeffs.shape)
    for src, I in enumerate(basis(n, q)):
        image = tuple(int(perm[i - 1]) for i in I)
        sign = int(np.prod([eps[i - 1] for i in I])) if I else 1
        # parity of sorting the image
        inv = sum(1 for x in range(len(image)) for y in range(x + 1, len(image)) if image[x] > image[y])
        sign *= -1 if inv % 2 else 1
        out[:, cols[tuple(sorted(image))]] = omega.coeffs[:, src] * (phase * sign)
    return FourierForm.from_arrays(n, q, new_modes, out, kind)


def random_fourier_form(
    n: int,
    q: int,
    bandwidth: int,
    rng: np.random.Generator,
    kind: ScalarKind = RATIONAL,
    density: float = 0.25,
    mean_zero: bool = False,
) -> FourierForm:
    """Random band-limited form; each (mode, component) slot is filled with probability ``density``.

    Exact coefficients are Gaussian integers with parts in [-3, 3]; float
    coefficients are standard complex normals.
    """
    comps = len(basis(n, q))
    axes = [np.arange(-bandwidth, bandwidth + 1)] * n
    modes = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n) if n else np.zeros((1, 0), np.int64)
    if mean_zero:
        modes = modes[~(modes == 0).all(axis=1)]
    mask = rng.random((len(modes), comps)) < density
    if kind.exact:
        re = rng.integers(-3, 4, size=mask.shape)
        im = rng.integers(-3, 4, size=mask.shape)
        coeffs = kind.zeros(mask.shape)
        for r, c in zip(*np.nonzero(mask)):
            coeffs[r, c] = gauss(int(re[r, c]), int(im[r, c]))
    else:
        vals = rng.standard_normal(mask.shape) + 1j * rng.standard_normal(mask.shape)
        coeffs = np.where(mask, vals, 0)
    return FourierForm.from_arrays(n, q, modes, coeffs, kind)


@lru_cache(maxsize=None)
def star_intertwining_signs(n: int, q: int, m: int) -> tuple[int, int]:
    """Signs ``(sf, sg)`` with ``S(*v) = sf * *(S* v)`` and ``S*(*v) = sg * *(S v)`` on q-forms v.

    Found by probing with a generic exact form; a sign is 0 when both sides
    vanish identically for this degree.
    """
    rng = np.random.default_rng(12345 + 97 * n + 7 * q + m)
    probe = random_fourier_form(n, q, 1, rng, RATIONAL, density=1.0, mean_zero=True)
    sv = hodge_star_fourier(probe)
    pairs = [
        (s_odd_fourier(m, sv), hodge_star_fourier(s_odd_star_fourier(m, probe))),
        (s_odd_star_fourier(m, sv), hodge_star_fourier(s_odd_fourier(m, probe))),
    ]
    signs = []
    for lhs, rhs in pairs:
        if lhs.is_zero() and rhs.is_zero():
            signs.append(0)
        elif lhs == rhs:
            signs.append(1)
        elif lhs == -rhs:
            signs.append(-1)
        else:
            raise ArithmeticError(f"Hodge star does not intertwine S and S* for n={n}, q={q}, m={m}")
    return signs[0], signs[1]
