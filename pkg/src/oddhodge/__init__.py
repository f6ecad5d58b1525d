"""Odd-order exterior operators d(d*d)^m: exact identities, a torus Hodge solver, and div-curl experiments."""
from .errors import (
    DegreeMismatch,
    DimensionMismatch,
    IncompatibleData,
    NonTrivialKernel,
    OddHodgeError,
    TranslationNotExact,
    UnderSampled,
)
from .exterior import AlgForm, IndexSet, basis, hodge_star, interior, merge_sign, pointwise_inner, wedge
from .fourier import (
    FourierForm,
    LatticeIsometry,
    box_apply,
    box_inverse_power,
    d_fourier,
    deriv_multi,
    dstar_fourier,
    hodge_star_fourier,
    l2_inner,
    pullback_lattice_isometry,
    s_odd_fourier,
    s_odd_star_fourier,
)
from .poly import AffineMap, d_poly, dstar_poly, pullback_affine, s_odd_poly, s_odd_star_poly
from .scalars import FLOAT, RATIONAL, gauss
from .solver import HodgeSystem, SolveReport, relate_box_m, solve_first_order, solve_odd, split_solution

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "AlgForm",
    "DegreeMismatch",
    "DimensionMismatch",
    "FLOAT",
    "FourierForm",
    "HodgeSystem",
    "IncompatibleData",
    "IndexSet",
    "LatticeIsometry",
    "NonTrivialKernel",
    "OddHodgeError",
    "RATIONAL",
    "SolveReport",
    "TranslationNotExact",
    "UnderSampled",
    "basis",
    "box_apply",
    "box_inverse_power",
    "d_fourier",
    "d_poly",
    "deriv_multi",
    "dstar_fourier",
    "dstar_poly",
    "gauss",
    "hodge_star",
    "hodge_star_fourier",
    "interior",
    "l2_inner",
    "merge_sign",
    "pointwise_inner",
    "pullback_affine",
    "pullback_lattice_isometry",
    "relate_box_m",
    "s_odd_fourier",
    "s_odd_poly",
    "s_odd_star_fourier",
    "s_odd_star_poly",
    "solve_first_order",
    "solve_odd",
    "split_solution",
    "wedge",
]
