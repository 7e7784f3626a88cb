"""Wavelet bases (exact Haar, sampled Meyer) and the analysis/synthesis maps.

The wavelet attached to the interval ``I`` is

    w_I(x) = |I|**-0.5 * w((x - c_I) / |I|),      c_I the center of I,

so the mother wavelet ``w`` is centered at 0.  For Haar, ``w`` is +1 on
[-1/2, 0), -1 on [0, 1/2) and the system is exact on dyadic grids.  The
Meyer mother is built in frequency domain (band profile on
[2*pi/3, 8*pi/3] with the degree-7 polynomial transition bump), sampled on
a uniform grid and evaluated by linear interpolation; note that with our
centered indexing the half-integer shifts supply the classical e^{i*xi/2}
phase, so the sampled system is orthonormal up to quadrature error.

Analysis collects wavelet coefficients over a level range plus a separate
scaling component (unit-cell means).  With the Haar basis and the default
range (0 .. depth-1) synthesis inverts analysis exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Dict, Optional

import numpy as np

from ._linalg import adjoint
from .dyadic import DyadicInterval, StepFunction
from .errors import (
    InvalidInput,
    InvalidParameter,
    ShapeError,
    Unsupported,
)

__all__ = [
    "HaarBasis",
    "MeyerBasis",
    "HAAR",
    "wavelet_basis",
    "CoefficientField",
    "TentField",
    "wavelet_eval",
    "analyze",
    "synthesize",
    "embed_phi",
    "project_psi",
    "decay_check",
]


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HaarBasis:
    kind: str = "haar"


def _transition_bump(u):
    """The degree-7 polynomial nu with nu(0)=0, nu(1)=1, nu(u)+nu(1-u)=1."""
    u = np.clip(u, 0.0, 1.0)
    return u ** 4 * (35.0 - 84.0 * u + 70.0 * u ** 2 - 20.0 * u ** 3)


def _band_profile(xi):
    """Meyer frequency profile M(xi) for xi >= 0 (supported on [2pi/3, 8pi/3])."""
    out = np.zeros_like(xi)
    lo, mid, hi = 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0, 8.0 * np.pi / 3.0
    rising = (xi >= lo) & (xi < mid)
    falling = (xi >= mid) & (xi <= hi)
    out[rising] = np.sin(0.5 * np.pi * _transition_bump(3.0 * xi[rising] / (2.0 * np.pi) - 1.0))
    out[falling] = np.cos(0.5 * np.pi * _transition_bump(3.0 * xi[falling] / (4.0 * np.pi) - 1.0))
    return out


def _gauss_legendre_nodes(radius, order=12):
    """Composite Gauss-Legendre nodes over the two Meyer frequency bands."""
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in ((2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0), (4.0 * np.pi / 3.0, 8.0 * np.pi / 3.0)):
        # panel phase width <= ~3 rad at the truncation radius keeps GL exact
        panels = max(8, int(np.ceil((b - a) * max(radius, 1.0) / 3.0)))
        edges = np.linspace(a, b, panels + 1)
        for left, right in zip(edges[:-1], edges[1:]):
            half = 0.5 * (right - left)
            nodes.append(0.5 * (left + right) + half * base_x)
            weights.append(half * base_w)
    return np.concatenate(nodes), np.concatenate(weights)


class MeyerBasis:
    """Sampled Meyer mother wavelet, truncated at |y| <= radius.

    Samples live on a grid of step ``2**-delta_log2``; evaluation linearly
    interpolates and the cumulative integral of the interpolant is kept so
    that analysis integrals against constant cells are exact for the
    sampled wavelet.
    """

    kind = "meyer"

    def __init__(self, delta_log2: int = 11, radius: float = 32.0, decay_m: int = 2):
        if decay_m < 2:
            raise InvalidParameter("decay exponent m must be >= 2")
        self.delta_log2 = int(delta_log2)
        self.radius = float(radius)
        self.decay_m = int(decay_m)
        delta = 2.0 ** (-self.delta_log2)
        half = int(round(self.radius / delta))
        self.grid = (np.arange(2 * half + 1) - half) * delta
        xi, wts = _gauss_legendre_nodes(self.radius)
        coeff = wts * _band_profile(xi) / np.pi
        coeff_d = coeff * xi
        vals = np.empty_like(self.grid)
        ders = np.empty_like(self.grid)
        block = 8192
        for s in range(0, self.grid.size, block):
            ys = self.grid[s : s + block, None]
            phase = ys * xi[None, :]
            vals[s : s + block] = np.cos(phase) @ coeff
            ders[s : s + block] = -np.sin(phase) @ coeff_d
        # the C^3 band profile leaves a ~(radius)^-4 truncation residual in
        # the mean; remove that DC component so the sampled mother integrates
        # to zero exactly, then renormalize on the grid
        vals = vals - np.trapezoid(vals, dx=delta) / (self.grid[-1] - self.grid[0])
        nrm = np.sqrt(np.trapezoid(vals ** 2, dx=delta))
        self.normalization = float(nrm)
        self.values = vals / nrm
        self.derivs = ders / nrm
        self.delta = delta
        cum = np.concatenate(
            [[0.0], np.cumsum(0.5 * (self.values[1:] + self.values[:-1]) * delta)]
        )
        self._cumulative = cum

    def eval(self, y):
        return np.interp(y, self.grid, self.values, left=0.0, right=0.0)

    def eval_deriv(self, y):
        return np.interp(y, self.grid, self.derivs, left=0.0, right=0.0)

    def integral_up_to(self, y):
        """integral of the sampled mother from -radius to y (0 outside)."""
        return np.interp(y, self.grid, self._cumulative, left=0.0, right=self._cumulative[-1])


HAAR = HaarBasis()


@lru_cache(maxsize=4)
def _meyer_cached(delta_log2: int, radius: float, decay_m: int) -> MeyerBasis:
    return MeyerBasis(delta_log2=delta_log2, radius=radius, decay_m=decay_m)


def wavelet_basis(kind: str, delta_log2: int = 11, radius: float = 32.0, decay_m: int = 2):
    if kind == "haar":
        return HAAR
    if kind == "meyer":
        return _meyer_cached(delta_log2, float(radius), int(decay_m))
    raise InvalidParameter(f"unknown basis kind {kind!r}")


def wavelet_eval(basis, interval: DyadicInterval, x: float) -> float:
    """Point value of w_I at x (0 outside the support/truncation)."""
    scale = 2.0 ** (interval.level / 2.0)
    if isinstance(basis, HaarBasis):
        if interval.lo <= x < interval.center:
            return scale
        if interval.center <= x < interval.hi:
            return -scale
        return 0.0
    y = (x - interval.center) / interval.length
    return scale * float(basis.eval(y))


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientField:
    """Wavelet coefficients <f, w_I> plus the separate scaling component.

    ``scaling`` holds one matrix per unit cell of the window (the level-0
    means) or None when the scaling part was not collected.
    """

    dim: int
    depth: int
    lo: int
    hi: int
    level_min: int
    level_max: int
    entries: Dict[DyadicInterval, np.ndarray]
    scaling: Optional[np.ndarray] = None

    def __post_init__(self):
        for interval in self.entries:
            if not (self.level_min <= interval.level <= self.level_max):
                raise InvalidInput(f"coefficient level {interval.level} outside range")
        if self.scaling is not None:
            s = np.ascontiguousarray(self.scaling, dtype=np.complex128)
            if s.shape != (self.hi - self.lo, self.dim, self.dim):
                raise ShapeError("scaling part must hold one matrix per unit cell")
            s.setflags(write=False)
            object.__setattr__(self, "scaling", s)

    def adjoint(self) -> "CoefficientField":
        ent = {i: np.conj(m.T) for i, m in self.entries.items()}
        sc = None if self.scaling is None else adjoint(self.scaling)
        return CoefficientField(
            self.dim, self.depth, self.lo, self.hi, self.level_min, self.level_max, ent, sc
        )

    def map_entries(self, fn) -> "CoefficientField":
        return CoefficientField(
            self.dim,
            self.depth,
            self.lo,
            self.hi,
            self.level_min,
            self.level_max,
            {i: fn(i, m) for i, m in self.entries.items()},
            self.scaling,
        )

    def hs_energy(self) -> float:
        """sum_I ||<f, w_I>||_HS^2 over the represented coefficients."""
        return float(
            sum(np.sum(np.abs(m) ** 2) for m in self.entries.values())
        )


def _haar_coefficients(f: StepFunction, level_min, level_max):
    prefix = np.concatenate(
        [np.zeros((1, f.dim, f.dim), dtype=np.complex128), np.cumsum(f.cells, axis=0)]
    ) * f.cell_width
    entries: Dict[DyadicInterval, np.ndarray] = {}
    n_total = f.ncells
    base = f.lo * (1 << f.depth)
    for n in range(level_min, level_max + 1):
        if n >= f.depth:
            # halves are sub-cell: f is constant there, every coefficient is 0
            continue
        scale = 2.0 ** (n / 2.0)  # |I|**-0.5
        span = 1 << (f.depth - n)
        if n >= 0:
            offsets = np.arange(f.lo * (1 << n), f.hi * (1 << n))
        else:
            shift = 1 << (-n)
            offsets = np.arange(f.lo // shift, -(-f.hi // shift))
        starts = offsets * span - base
        mids = starts + span // 2
        stops = starts + span
        cs = np.clip(starts, 0, n_total)
        cm = np.clip(mids, 0, n_total)
        ce = np.clip(stops, 0, n_total)
        left = prefix[cm] - prefix[cs]
        right = prefix[ce] - prefix[cm]
        coef = scale * (left - right)
        for j, mat in zip(offsets, coef):
            entries[DyadicInterval(n, int(j))] = mat
    return entries


def _meyer_cell_integrals(basis: MeyerBasis, interval: DyadicInterval, f: StepFunction):
    """integral of w_I over each grid cell of ``f`` (vector of length ncells)."""
    edges = f.lo + np.arange(f.ncells + 1) * f.cell_width
    y = (edges - interval.center) / interval.length
    cum = basis.integral_up_to(y)
    return np.sqrt(interval.length) * np.diff(cum)


def _meyer_offsets(basis: MeyerBasis, level, f: StepFunction):
    length = 2.0 ** (-level)
    pad = basis.radius
    lo = int(np.floor(f.lo / length - pad - 0.5))
    hi = int(np.ceil(f.hi / length + pad - 0.5))
    return range(lo, hi + 1)


def analyze(
    f: StepFunction,
    basis=HAAR,
    level_min: int = 0,
    level_max: Optional[int] = None,
    with_scaling: bool = True,
) -> CoefficientField:
    """Wavelet coefficients <f, w_I> = integral f * w_I over a level range.

    Haar integrals are exact on the grid; Meyer integrals are quadratures of
    the sampled mother against the constant cells.  The scaling component
    (unit-cell means) is collected unless ``with_scaling`` is False; for the
    homogeneous Meyer expansions over negative levels it should be off.
    """
    if level_max is None:
        level_max = f.depth - 1
    if level_max > f.depth:
        raise InvalidParameter(f"level {level_max} exceeds grid depth {f.depth}")
    if level_min > level_max:
        raise InvalidParameter("empty level range")
    if isinstance(basis, HaarBasis):
        entries = _haar_coefficients(f, level_min, level_max)
    else:
        entries = {}
        for n in range(level_min, level_max + 1):
            for j in _meyer_offsets(basis, n, f):
                interval = DyadicInterval(n, j)
                ints = _meyer_cell_integrals(basis, interval, f)
                entries[interval] = np.einsum("k,kij->ij", ints, f.cells)
    scaling = None
    if with_scaling:
        block = 1 << f.depth
        scaling = f.cells.reshape(-1, block, f.dim, f.dim).mean(axis=1)
    return CoefficientField(
        f.dim, f.depth, f.lo, f.hi, level_min, level_max, entries, scaling
    )


def synthesize(c: CoefficientField, basis=HAAR) -> StepFunction:
    """Rebuild the step function sum_I <f,w_I> w_I (+ scaling component)."""
    d = c.dim
    n_total = (c.hi - c.lo) * (1 << c.depth)
    cells = np.zeros((n_total, d, d), dtype=np.complex128)
    if c.scaling is not None:
        cells += np.repeat(c.scaling, 1 << c.depth, axis=0)
    out = StepFunction(d, c.depth, c.lo, c.hi, cells)
    cells = np.array(out.cells)  # writable copy
    base = c.lo * (1 << c.depth)
    for interval, mat in c.entries.items():
        if not np.any(mat):
            continue
        if isinstance(basis, HaarBasis):
            if interval.level >= c.depth:
                raise InvalidParameter(
                    f"level-{interval.level} Haar wavelet is not representable at depth {c.depth}"
                )
            span = 1 << (c.depth - interval.level)
            start = interval.offset * span - base
            mid = start + span // 2
            stop = start + span
            scale = 2.0 ** (interval.level / 2.0)
            a, b = max(start, 0), min(mid, n_total)
            if a < b:
                cells[a:b] += scale * mat
            a, b = max(mid, 0), min(stop, n_total)
            if a < b:
                cells[a:b] -= scale * mat
        else:
            probe = StepFunction.zeros(1, c.depth, c.lo, c.hi)
            ints = _meyer_cell_integrals(basis, interval, probe)
            avgs = ints / probe.cell_width
            cells += avgs[:, None, None] * mat
    return StepFunction(d, c.depth, c.lo, c.hi, cells)


# ---------------------------------------------------------------------------
# tent fields: Phi embedding and Psi projection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TentField:
    """Family (g_I)_I of step functions with g_I supported inside I."""

    dim: int
    depth: int
    lo: int
    hi: int
    entries: Dict[DyadicInterval, StepFunction] = dataclass_field(default_factory=dict)

    def __post_init__(self):
        for interval, g in self.entries.items():
            if g.dim != self.dim or g.depth != self.depth or g.lo != self.lo or g.hi != self.hi:
                raise ShapeError(f"tent entry at {interval} lives on a different grid")
            rng = g.cell_range(interval)
            mask = np.ones(g.ncells, dtype=bool)
            if rng is not None:
                mask[rng[0] : rng[1]] = False
            if np.any(np.abs(g.cells[mask])):
                raise InvalidInput(f"tent entry at {interval} spills outside its interval")


def embed_phi(c: CoefficientField) -> TentField:
    """Phi: coefficients -> tent field with entry (<f,w_I>/|I|**0.5) 1_I."""
    entries = {}
    probe = StepFunction.zeros(c.dim, c.depth, c.lo, c.hi)
    for interval, mat in c.entries.items():
        cells = np.zeros_like(probe.cells)
        rng = probe.cell_range(interval)
        if rng is not None:
            cells[rng[0] : rng[1]] = mat * 2.0 ** (interval.level / 2.0)
        entries[interval] = StepFunction(c.dim, c.depth, c.lo, c.hi, cells)
    return TentField(c.dim, c.depth, c.lo, c.hi, entries)


def project_psi(g: TentField, basis=HAAR) -> StepFunction:
    """Psi: tent field -> sum_I (|I|**-0.5 integral_I g_I) w_I."""
    entries = {}
    levels = [i.level for i in g.entries]
    level_min = min(levels, default=0)
    level_max = max(levels, default=0)
    for interval, gi in g.entries.items():
        entries[interval] = 2.0 ** (interval.level / 2.0) * gi.integrate()
    field = CoefficientField(
        g.dim, g.depth, g.lo, g.hi, level_min, level_max, entries, scaling=None
    )
    return synthesize(field, basis)


def decay_check(basis, m: Optional[int] = None) -> float:
    """Fitted constant C = max over samples of max(|w|,|w'|) * (1+|y|)**m."""
    if isinstance(basis, HaarBasis):
        raise Unsupported("the Haar mother wavelet is not a Schwartz function")
    if m is None:
        m = basis.decay_m
    if m < 2:
        raise InvalidParameter("decay exponent m must be >= 2")
    envelope = np.maximum(np.abs(basis.values), np.abs(basis.derivs))
    return float(np.max(envelope * (1.0 + np.abs(basis.grid)) ** m))
