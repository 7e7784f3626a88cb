"""Column/row Littlewood-Paley square functions, truncations, tent norm.

The squared column profile is

    S_c(f)(x)^2 = sum_I <f,w_I>* <f,w_I> / |I| * 1_I(x),

a PSD step function on the finest grid; the row version squares the
adjointed coefficients.  Truncations sum the stored levels <= n, so the
truncation at the top represented level recovers the full square function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import adjoint, clamped_eigh, eigvals_psd, recompose, weighted_power_sum_norm
from .dyadic import StepFunction
from .errors import InvalidParameter
from .wavelets import CoefficientField, TentField

__all__ = [
    "SquareProfile",
    "square_fn_col",
    "square_fn_row",
    "truncated_square_fn",
    "tent_norm",
    "lp_norm_of_root",
]


@dataclass(frozen=True)
class SquareProfile:
    """A PSD profile S (root) together with its exact square S**2."""

    square: StepFunction
    root: StepFunction


def _coefficient_hull(c: CoefficientField):
    """Integer window hull covering the grid window and every coefficient."""
    lo, hi = c.lo, c.hi
    for interval in c.entries:
        lo = min(lo, int(np.floor(interval.lo)))
        hi = max(hi, int(np.ceil(interval.hi)))
    return lo, hi


def _gram_profile(c: CoefficientField, row: bool, max_level=None) -> StepFunction:
    lo, hi = _coefficient_hull(c)
    n = (hi - lo) * (1 << c.depth)
    cells = np.zeros((n, c.dim, c.dim), dtype=np.complex128)
    probe = StepFunction.zeros(1, c.depth, lo, hi)
    for interval, mat in c.entries.items():
        if max_level is not None and interval.level > max_level:
            continue
        rng = probe.cell_range(interval)
        if rng is None:
            continue
        gram = mat @ np.conj(mat.T) if row else np.conj(mat.T) @ mat
        cells[rng[0] : rng[1]] += gram / interval.length
    return StepFunction(c.dim, c.depth, lo, hi, cells)


def _profile_from_square(square: StepFunction) -> SquareProfile:
    w, v = clamped_eigh(square.cells, strict=False)
    root = StepFunction(
        square.dim, square.depth, square.lo, square.hi, recompose(np.sqrt(w), v)
    )
    return SquareProfile(square=square, root=root)


def square_fn_col(c: CoefficientField) -> SquareProfile:
    return _profile_from_square(_gram_profile(c, row=False))


def square_fn_row(c: CoefficientField) -> SquareProfile:
    return _profile_from_square(_gram_profile(c, row=True))


def truncated_square_fn(c: CoefficientField, n: int) -> SquareProfile:
    """Square function summing the represented levels <= n.

    ``n`` below every represented level yields the zero profile; ``n`` above
    the represented range is rejected.
    """
    if n > c.level_max:
        raise InvalidParameter(f"truncation level {n} above represented range")
    return _profile_from_square(_gram_profile(c, row=False, max_level=n))


def lp_norm_of_root(square_cells: np.ndarray, p, cell_width: float) -> float:
    """||S||_p computed from the cells of S**2 (eigenvalues -> sqrt)."""
    lam = eigvals_psd(square_cells)
    return weighted_power_sum_norm(np.sqrt(lam), p, cell_width)


def tent_norm(g: TentField, p) -> float:
    """L_p norm of (sum_I g_I(x)* g_I(x))**0.5.

    Tent entries carry their own |I|**-0.5 profile (the Phi-image form), so
    the plain ell^2_c sum reproduces the coefficient-level Hardy norm on
    Phi images.
    """
    if not (np.isinf(p) or p >= 1):
        raise InvalidParameter(f"p must be >= 1 or inf, got {p}")
    n = (g.hi - g.lo) * (1 << g.depth)
    square = np.zeros((n, g.dim, g.dim), dtype=np.complex128)
    for gi in g.entries.values():
        square += adjoint(gi.cells) @ gi.cells
    return lp_norm_of_root(square, p, 2.0 ** (-g.depth))
