"""Grid quadrature norms and the seeded experiment harness.

Norm conventions:

* ``lp_norm``: ``(mean over grid of |omega(x)|^p)^(1/p)`` where ``|.|`` is
  the Euclidean norm of the coefficient vector (normalized torus measure).
* ``sobolev_norm``: SUM over all multi-indices ``|beta| <= order`` of the
  ``L^r`` norms of ``D^beta omega``.
* ``grad_norm``: ``L^p`` norm of the pointwise l2 norm over all
  (coordinate derivative, component) pairs.

Grids use ``N = 2B + 1`` points per axis (B = bandwidth) for ``p = 2`` and
``p = inf``, and ``4 (2B + 1)`` otherwise.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Any, Iterable, Sequence

import numpy as np
import scipy.fft

from .errors import DegreeMismatch, OddHodgeError, UnderSampled
from .exterior import AlgForm, basis
from .fourier import (
    FourierForm,
    d_fourier,
    dstar_fourier,
    l2_inner,
    random_fourier_form,
)
from .scalars import FLOAT, ScalarKind
from .solver import HodgeSystem, relate_box_m, solve_first_order, solve_odd

__all__ = [
    "GridSample",
    "ExperimentRecord",
    "DIVCURL_FIELDS",
    "PAIRING_FIELDS",
    "OVERSAMPLING",
    "grid_size",
    "sample_grid",
    "lp_norm",
    "sobolev_norm",
    "grad_norm",
    "form_lp_norm",
    "random_closed",
    "random_coclosed",
    "divcurl_ratio_experiment",
    "pairing_experiment",
    "constructed_orthogonal_pair",
    "hillclimb_extremizer",
    "summarize",
    "records_to_csv",
    "records_to_json",
]

OVERSAMPLING = 4


def grid_size(bandwidth: int, p: float) -> tuple[int, int]:
    """Points per axis and oversampling factor for quadrature of an ``L^p`` norm."""
    factor = 1 if p in (2, math.inf) else OVERSAMPLING
    return factor * (2 * max(bandwidth, 0) + 1), factor


@dataclass(frozen=True)
class GridSample:
    n: int
    q: int
    N: int
    values: np.ndarray  # shape (C, N, ..., N)
    oversampling: float

    def at(self, point: Sequence[int]) -> AlgForm:
        comps = basis(self.n, self.q)
        return AlgForm(self.n, self.q, {I: complex(self.values[(c, *point)]) for c, I in enumerate(comps)})


def _compact_spectrum(omega: FourierForm) -> tuple[np.ndarray, int]:
    """Coefficients on the cube ``[-B, B]^n`` as an array of shape ``(C, 2B+1, ..., 2B+1)``."""
    B = omega.bandwidth()
    L = 2 * B + 1
    C = omega.coeffs.shape[1]
    spec = np.zeros((C,) + (L,) * omega.n, dtype=complex)
    if len(omega.modes):
        coeffs = omega.coeffs
        if omega.kind.exact:
            coeffs = np.array([[omega.kind.to_complex(c) for c in row] for row in coeffs], dtype=complex)
        idx = tuple((omega.modes + B).T)
        spec[(slice(None),) + idx] = coeffs.T
    return spec, B


def _check_grid(omega: FourierForm, N: int) -> None:
    if N < 2 * omega.bandwidth() + 1:
        raise UnderSampled(f"N={N} is below the Nyquist bound {2 * omega.bandwidth() + 1}")


def _expand_axis(arr: np.ndarray, axis: int, B: int, N: int) -> np.ndarray:
    # values along one axis at x_j = 2 pi j / N of sum_{|k| <= B} a_k e^{i k x}
    shape = list(arr.shape)
    shape[axis] = N
    full = np.zeros(shape, dtype=complex)
    index = [slice(None)] * arr.ndim
    index[axis] = np.arange(-B, B + 1) % N
    full[tuple(index)] = arr
    return scipy.fft.ifft(full, axis=axis, norm="forward")


def _derivative_fields(omega: FourierForm, order: int, N: int):
    """Yield ``(beta, values)`` for every ``|beta| <= order``; values has shape ``(C, N, ..., N)``.

    Axes are synthesized one at a time, so each 1-D transform only runs over
    lines that are still band-limited in the remaining axes. The last
    (contiguous) axis goes last, where the arrays are largest.
    """
    spec, B = _compact_spectrum(omega)
    n = omega.n
    k = np.arange(-B, B + 1)

    def rec(arr, axis, prefix, budget):
        if axis > n:
            yield prefix, arr
            return
        symbol_shape = [1] * arr.ndim
        symbol_shape[axis] = len(k)
        sym = (1j * k).reshape(symbol_shape)
        for b in range(budget + 1):
            part = arr * sym**b if b else arr
            yield from rec(_expand_axis(part, axis, B, N), axis + 1, prefix + (b,), budget - b)

    yield from rec(spec, 1, (), order)


def _magnitude(values: np.ndarray) -> np.ndarray:
    if values.shape[0] == 1:
        return np.abs(values[0])
    return np.sqrt((values.real**2 + values.imag**2).sum(axis=0))


def sample_grid(omega: FourierForm, N: int) -> GridSample:
    _check_grid(omega, N)
    if omega.coeffs.shape[1] == 0:
        values = np.zeros((0,) + (N,) * omega.n, dtype=complex)
    else:
        _, values = next(_derivative_fields(omega, 0, N))
    nyq = 2 * omega.bandwidth() + 1
    return GridSample(omega.n, omega.q, N, values, N / nyq)


def _lp_of_magnitude(mag: np.ndarray, p: float) -> float:
    if mag.size == 0:
        return 0.0
    if p == math.inf:
        return float(mag.max())
    if p == 1:
        return float(mag.mean())
    if p == 2:
        return float(math.sqrt(np.mean(mag * mag)))
    if p == 1.5:
        # r = n/(n-1) at n = 3; much cheaper than a general power
        return float(np.mean(mag * np.sqrt(mag)) ** (1.0 / p))
    return float(np.mean(mag**p) ** (1.0 / p))


def lp_norm(sample: GridSample, p: float) -> float:
    if p < 1:
        raise ValueError("p must be >= 1")
    if sample.values.shape[0] == 0:
        return 0.0
    return _lp_of_magnitude(_magnitude(sample.values), p)


def form_lp_norm(omega: FourierForm, p: float, N: int | None = None) -> float:
    """``lp_norm(sample_grid(omega, N), p)`` with the default grid for ``p``."""
    if omega.is_zero():
        return 0.0
    N = N or grid_size(omega.bandwidth(), p)[0]
    return lp_norm(sample_grid(omega, N), p)


def sobolev_norm(omega: FourierForm, order: int, r: float, N: int | None = None) -> float:
    """``sum_{|beta| <= order} ||D^beta omega||_{L^r}`` by grid quadrature.

    Same value as summing ``lp_norm(sample_grid(deriv_multi(beta, omega)), r)``
    over beta, computed from one spectrum.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if omega.is_zero():
        return 0.0
    N = N or grid_size(omega.bandwidth(), r)[0]
    _check_grid(omega, N)
    return float(sum(_lp_of_magnitude(_magnitude(vals), r) for _, vals in _derivative_fields(omega, order, N)))


def grad_norm(omega: FourierForm, p: float, N: int | None = None) -> float:
    if omega.is_zero():
        return 0.0
    n = omega.n
    N = N or grid_size(omega.bandwidth(), p)[0]
    _check_grid(omega, N)
    sq = np.zeros((N,) * n)
    for beta, vals in _derivative_fields(omega, 1, N):
        if sum(beta) == 1:
            sq += (vals.real**2 + vals.imag**2).sum(axis=0)
    return _lp_of_magnitude(np.sqrt(sq), p)


# --- random data ---------------------------------------------------------


def _rng(seed: int | np.random.Generator) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_closed(
    n: int,
    degree: int,
    bandwidth: int,
    density: float = 0.25,
    seed: int | np.random.Generator = 0,
    kind: ScalarKind = FLOAT,
) -> FourierForm:
    """``d a`` for a random band-limited potential ``a`` of degree ``degree - 1``; nonzero whenever possible."""
    if bandwidth < 1:
        raise ValueError("bandwidth must be >= 1")
    rng = _rng(seed)
    if degree < 1 or degree > n:
        return FourierForm.zero(n, degree, kind)
    while True:
        f = d_fourier(random_fourier_form(n, degree - 1, bandwidth, rng, kind, density, mean_zero=True))
        if not f.is_zero():
            return f


def random_coclosed(
    n: int,
    degree: int,
    bandwidth: int,
    density: float = 0.25,
    seed: int | np.random.Generator = 0,
    kind: ScalarKind = FLOAT,
) -> FourierForm:
    """``d* b`` for a random band-limited potential ``b`` of degree ``degree + 1``; nonzero whenever possible."""
    if bandwidth < 1:
        raise ValueError("bandwidth must be >= 1")
    rng = _rng(seed)
    if degree < 0 or degree + 1 > n:
        return FourierForm.zero(n, degree, kind)
    while True:
        g = dstar_fourier(random_fourier_form(n, degree + 1, bandwidth, rng, kind, density, mean_zero=True))
        if not g.is_zero():
            return g


# --- experiments ---------------------------------------------------------


@dataclass
class ExperimentRecord:
    seed: int
    n: int
    q: int
    m: int = 0
    bandwidth: int = 0
    norm_f_l1: float = 0.0
    norm_g_l1: float = 0.0
    norm_v_sobolev: float = 0.0
    ratio: float = math.nan
    flag_q1: bool = False
    flag_qn1: bool = False
    box_relation_ok: bool | None = None
    variant: str = ""
    side: str = ""
    pairing_abs: float = 0.0
    norm_data_l1: float = 0.0
    norm_op_h_ln: float = 0.0
    norm_grad_h_ln: float = 0.0
    rhs: float = 0.0
    error: str = ""

    @property
    def exceptional(self) -> bool:
        return self.flag_q1 or self.flag_qn1


DIVCURL_FIELDS = (
    "seed",
    "n",
    "q",
    "m",
    "bandwidth",
    "norm_f_l1",
    "norm_g_l1",
    "norm_v_sobolev",
    "ratio",
    "flag_q1",
    "flag_qn1",
)

PAIRING_FIELDS = (
    "seed",
    "n",
    "q",
    "variant",
    "side",
    "pairing_abs",
    "norm_data_l1",
    "norm_op_h_ln",
    "norm_grad_h_ln",
    "rhs",
    "ratio",
)


def _divcurl_trial(sys: HodgeSystem, seed: int, bandwidth: int, r: float) -> ExperimentRecord:
    rec = ExperimentRecord(seed=seed, n=sys.n, q=sys.q, m=sys.m, bandwidth=bandwidth)
    rec.flag_q1, rec.flag_qn1 = sys.flag_q1, sys.flag_qn1
    try:
        v, _ = solve_odd(sys)
        if sys.m >= 1:
            u, _ = solve_first_order(sys)
            rec.box_relation_ok = relate_box_m(v, u, sys.m)
    except OddHodgeError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    rec.norm_f_l1 = form_lp_norm(sys.f, 1)
    rec.norm_g_l1 = form_lp_norm(sys.g, 1)
    rec.norm_v_sobolev = sobolev_norm(v, 2 * sys.m, r)
    denom = rec.norm_f_l1 + rec.norm_g_l1
    rec.ratio = rec.norm_v_sobolev / denom if denom > 0 else math.nan
    return rec


def divcurl_ratio_experiment(
    n: int,
    q: int,
    m: int,
    bandwidth: int,
    trials: int,
    seed: int,
    density: float = 0.25,
    kind: ScalarKind = FLOAT,
) -> list[ExperimentRecord]:
    """Ratios ``||v||_{W^{2m,r}} / (||f||_1 + ||g||_1)`` with ``r = n/(n-1)`` over random closed/coclosed data.

    Trial ``t`` draws from ``default_rng(seed + t)`` and records that seed.
    """
    if n < 2:
        raise ValueError("the div-curl exponent n/(n-1) needs n >= 2")
    if not 0 <= q <= n:
        raise DegreeMismatch(f"q={q} outside 0..{n}")
    r = n / (n - 1)
    records = []
    for t in range(trials):
        trial_seed = seed + t
        rng = np.random.default_rng(trial_seed)
        f = random_closed(n, q + 1, bandwidth, density, rng, kind)
        g = random_coclosed(n, q - 1, bandwidth, density, rng, kind)
        records.append(_divcurl_trial(HodgeSystem(n, q, m, f, g), trial_seed, bandwidth, r))
    return records


def _pairing_degree(n: int, q: int, side: str) -> int:
    if side == "d":
        if not 0 <= q <= n - 2:
            raise DegreeMismatch(f"the d-variant needs 0 <= q <= n-2, got q={q}, n={n}")
        return q + 1
    if side == "dstar":
        if not 2 <= q <= n:
            raise DegreeMismatch(f"the d*-variant needs 2 <= q <= n, got q={q}, n={n}")
        return q - 1
    raise ValueError(f"side must be 'd' or 'dstar', got {side!r}")


def pairing_experiment(
    n: int,
    q: int,
    trials: int,
    seed: int,
    variant: str = "LL",
    side: str = "d",
    bandwidth: int = 4,
    density: float = 0.25,
) -> list[ExperimentRecord]:
    """Pairings ``|<f, h>|`` against ``||f||_1 * ||Op h||_{L^n}``.

    ``side="d"``: f closed of degree q+1, Op = d* (LL) or grad (LS).
    ``side="dstar"``: g coclosed of degree q-1, Op = d (LL) or grad (LS).
    Both norms are always recorded; ``variant`` picks which enters ``rhs``.
    """
    if variant not in ("LL", "LS"):
        raise ValueError(f"variant must be 'LL' or 'LS', got {variant!r}")
    deg = _pairing_degree(n, q, side)
    records = []
    for t in range(trials):
        trial_seed = seed + t
        rng = np.random.default_rng(trial_seed)
        if side == "d":
            data = random_closed(n, deg, bandwidth, density, rng)
            h = random_fourier_form(n, deg, bandwidth, rng, FLOAT, density, mean_zero=True)
            op_h = dstar_fourier(h)
        else:
            data = random_coclosed(n, deg, bandwidth, density, rng)
            h = random_fourier_form(n, deg, bandwidth, rng, FLOAT, density, mean_zero=True)
            op_h = d_fourier(h)
        rec = ExperimentRecord(seed=trial_seed, n=n, q=q, bandwidth=bandwidth, variant=variant, side=side)
        rec.pairing_abs = abs(l2_inner(data, h))
        rec.norm_data_l1 = form_lp_norm(data, 1)
        rec.norm_op_h_ln = form_lp_norm(op_h, n, N=grid_size(bandwidth, n)[0])
        rec.norm_grad_h_ln = grad_norm(h, n, N=grid_size(bandwidth, n)[0])
        rec.rhs = rec.norm_data_l1 * (rec.norm_op_h_ln if variant == "LL" else rec.norm_grad_h_ln)
        rec.ratio = rec.pairing_abs / rec.rhs if rec.rhs > 0 else math.nan
        records.append(rec)
    return records


def constructed_orthogonal_pair(
    n: int, q: int, bandwidth: int, seed: int | np.random.Generator, density: float = 0.25
) -> tuple[FourierForm, FourierForm]:
    """``f = d a`` closed and ``h = d* c`` coclosed, both of degree q+1, so ``<f, h> = <a, d* d* c> = 0``."""
    _pairing_degree(n, q, "d")
    rng = _rng(seed)
    f = random_closed(n, q + 1, bandwidth, density, rng)
    h = random_coclosed(n, q + 1, bandwidth, density, rng)
    return f, h


def hillclimb_extremizer(
    n: int,
    q: int,
    m: int,
    bandwidth: int,
    steps: int,
    seed: int,
    density: float = 0.25,
    step_size: float = 0.5,
) -> list[ExperimentRecord]:
    """Greedy search for data with a large div-curl ratio.

    Each step perturbs one random Fourier coefficient of the potential of f
    or g and keeps the change if the ratio increases. Returns the best record
    after each step; the first entry is the initial draw.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if n < 2:
        raise ValueError("the div-curl exponent n/(n-1) needs n >= 2")
    r = n / (n - 1)
    rng = np.random.default_rng(seed)
    pot_f = random_fourier_form(n, q, bandwidth, rng, FLOAT, density, mean_zero=True) if q + 1 <= n else None
    pot_g = random_fourier_form(n, q, bandwidth, rng, FLOAT, density, mean_zero=True) if q >= 1 else None

    def evaluate(pf, pg) -> ExperimentRecord:
        f = d_fourier(pf) if pf is not None else FourierForm.zero(n, q + 1, FLOAT)
        g = dstar_fourier(pg) if pg is not None else FourierForm.zero(n, q - 1, FLOAT)
        return _divcurl_trial(HodgeSystem(n, q, m, f, g), seed, bandwidth, r)

    def perturb(p: FourierForm) -> FourierForm:
        axes = [np.arange(-bandwidth, bandwidth + 1)] * n
        k = np.array([int(rng.choice(a)) for a in axes])
        if not k.any():
            k[int(rng.integers(n))] = 1
        I = basis(n, q)[int(rng.integers(len(basis(n, q))))]
        delta = step_size * (rng.standard_normal() + 1j * rng.standard_normal())
        return p + FourierForm.single(k, I, delta, FLOAT)

    best = evaluate(pot_f, pot_g)
    trajectory = [best]
    for _ in range(steps - 1):
        pf, pg = pot_f, pot_g
        if pf is not None and (pg is None or rng.random() < 0.5):
            pf = perturb(pf)
        elif pg is not None:
            pg = perturb(pg)
        cand = evaluate(pf, pg)
        if not math.isnan(cand.ratio) and (math.isnan(best.ratio) or cand.ratio > best.ratio):
            best, pot_f, pot_g = cand, pf, pg
        trajectory.append(best)
    return trajectory


# --- reporting -----------------------------------------------------------


def summarize(records: Iterable[ExperimentRecord]) -> dict[str, Any]:
    records = list(records)
    ratios = np.array([r.ratio for r in records if not math.isnan(r.ratio)])
    out: dict[str, Any] = {
        "trials": len(records),
        "errors": sum(1 for r in records if r.error),
        "exceptional": sum(1 for r in records if r.exceptional),
    }
    if ratios.size:
        out.update(
            max=float(ratios.max()),
            median=float(np.quantile(ratios, 0.5)),
            q90=float(np.quantile(ratios, 0.9)),
            min=float(ratios.min()),
        )
    return out


def _row(rec: ExperimentRecord, names: Sequence[str]) -> dict[str, Any]:
    d = asdict(rec)
    return {k: d[k] for k in names}


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def records_to_csv(records: Iterable[ExperimentRecord], names: Sequence[str] = DIVCURL_FIELDS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for rec in records:
        row = _row(rec, names)
        writer.writerow([_fmt(row[k]) for k in names])
    return buf.getvalue()


def records_to_json(records: Iterable[ExperimentRecord], names: Sequence[str] = DIVCURL_FIELDS) -> str:
    rows = []
    for rec in records:
        row = _row(rec, names)
        rows.append({k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()})
    return json.dumps(rows, indent=1) + "\n"
