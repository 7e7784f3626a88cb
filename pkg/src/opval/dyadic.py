"""Dyadic grid arithmetic, matrix-valued step functions, and trace calculus.

Level convention: an interval at level ``n`` has length ``2**-n``, so
``I(n, j) = [j * 2**-n, (j + 1) * 2**-n)``.  The harmonic-analysis
literature often indexes the same grid by lengths ``2**(-k+1)``; that ``k``
equals our ``n + 1``.

Step functions are piecewise constant on a uniform grid of ``2**depth``
cells per unit over an integer support window ``[lo, hi)`` and are treated
as zero outside the window.  All operations here are pure; arrays inside a
``StepFunction`` are frozen after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np

from ._linalg import (
    DEFAULT_PSD_TOL,
    adjoint,
    psd_sqrt as _psd_sqrt_matrix,
    singvals,
    weighted_power_sum_norm,
)
from .errors import InvalidInput, InvalidParameter, ShapeError

__all__ = [
    "DyadicInterval",
    "StepFunction",
    "SignPattern",
    "lp_norm",
    "psd_sqrt",
    "conditional_expectation",
    "trace_pair",
    "remove_unit_means",
]


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """Index (level, offset) of the dyadic interval [j*2^-n, (j+1)*2^-n)."""

    level: int
    offset: int

    @property
    def length(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def lo(self) -> float:
        return self.offset * 2.0 ** (-self.level)

    @property
    def hi(self) -> float:
        return (self.offset + 1) * 2.0 ** (-self.level)

    @property
    def center(self) -> float:
        return (self.offset + 0.5) * 2.0 ** (-self.level)

    def parent(self) -> "DyadicInterval":
        return DyadicInterval(self.level - 1, self.offset >> 1)

    def children(self):
        return (
            DyadicInterval(self.level + 1, 2 * self.offset),
            DyadicInterval(self.level + 1, 2 * self.offset + 1),
        )

    def contains(self, other: "DyadicInterval") -> bool:
        """True iff ``other`` is a (non-strict) dyadic descendant of self."""
        if other.level < self.level:
            return False
        return (other.offset >> (other.level - self.level)) == self.offset

    @staticmethod
    def containing(x: float, level: int) -> "DyadicInterval":
        """The unique level-``level`` interval containing the point ``x``."""
        return DyadicInterval(level, int(np.floor(x * 2.0 ** level)))


@dataclass(frozen=True)
class StepFunction:
    """Matrix-valued function, constant on cells of width 2**-depth.

    ``cells[k]`` covers ``[lo + k * 2**-depth, lo + (k+1) * 2**-depth)``.
    """

    dim: int
    depth: int
    lo: int
    hi: int
    cells: np.ndarray

    def __post_init__(self):
        if self.hi <= self.lo:
            raise InvalidInput("support window [lo, hi) must be nonempty")
        if self.depth < 0:
            raise InvalidParameter("grid depth must be nonnegative")
        cells = np.ascontiguousarray(self.cells, dtype=np.complex128)
        n = (self.hi - self.lo) * (1 << self.depth)
        if cells.shape != (n, self.dim, self.dim):
            raise ShapeError(
                f"cells shape {cells.shape} != expected {(n, self.dim, self.dim)}"
            )
        if not np.all(np.isfinite(cells.view(np.float64))):
            raise InvalidInput("non-finite cell entries")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, dim, depth, lo=0, hi=1):
        n = (hi - lo) * (1 << depth)
        return cls(dim, depth, lo, hi, np.zeros((n, dim, dim), dtype=np.complex128))

    @classmethod
    def constant(cls, matrix, depth, lo=0, hi=1):
        matrix = np.asarray(matrix, dtype=np.complex128)
        d = matrix.shape[0]
        n = (hi - lo) * (1 << depth)
        return cls(d, depth, lo, hi, np.broadcast_to(matrix, (n, d, d)).copy())

    # -- geometry ------------------------------------------------------
    @property
    def ncells(self) -> int:
        return (self.hi - self.lo) * (1 << self.depth)

    @property
    def cell_width(self) -> float:
        return 2.0 ** (-self.depth)

    def same_grid(self, other: "StepFunction") -> bool:
        return (
            self.dim == other.dim
            and self.depth == other.depth
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def cell_range(self, interval: DyadicInterval):
        """Half-open cell-index range covered by ``interval`` (clipped).

        Returns None when the interval is finer than one cell or disjoint
        from the window.
        """
        if interval.level > self.depth:
            return None
        span = 1 << (self.depth - interval.level)
        start = interval.offset * span - self.lo * (1 << self.depth)
        stop = start + span
        start, stop = max(start, 0), min(stop, self.ncells)
        if start >= stop:
            return None
        return start, stop

    # -- calculus -------------------------------------------------------
    def integrate(self) -> np.ndarray:
        return self.cell_width * self.cells.sum(axis=0)

    def adjoint(self) -> "StepFunction":
        return StepFunction(self.dim, self.depth, self.lo, self.hi, adjoint(self.cells))

    def allclose(self, other: "StepFunction", tol=1e-12) -> bool:
        return self.same_grid(other) and bool(
            np.max(np.abs(self.cells - other.cells), initial=0.0) <= tol
        )

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.cells), initial=0.0))

    def __add__(self, other):
        if not self.same_grid(other):
            raise ShapeError("grid mismatch in addition")
        return StepFunction(self.dim, self.depth, self.lo, self.hi, self.cells + other.cells)

    def __sub__(self, other):
        if not self.same_grid(other):
            raise ShapeError("grid mismatch in subtraction")
        return StepFunction(self.dim, self.depth, self.lo, self.hi, self.cells - other.cells)

    def __neg__(self):
        return StepFunction(self.dim, self.depth, self.lo, self.hi, -self.cells)

    def __mul__(self, scalar):
        return StepFunction(self.dim, self.depth, self.lo, self.hi, self.cells * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SignPattern:
    """Finite choice of signs epsilon_I = +-1 on a set of dyadic intervals."""

    signs: Dict[DyadicInterval, int]

    def __post_init__(self):
        for interval, eps in self.signs.items():
            if eps not in (-1, 1):
                raise InvalidInput(f"sign for {interval} must be +-1, got {eps}")


def lp_norm(f: StepFunction, p) -> float:
    """Trace p-norm: (sum_k 2^-D sum_i sigma_i(cells[k])**p) ** (1/p).

    ``p = inf`` returns the largest singular value over all cells.
    """
    if not (np.isinf(p) or p >= 1):
        raise InvalidParameter(f"p must be >= 1 or inf, got {p}")
    if not np.all(np.isfinite(f.cells.view(np.float64))):
        raise InvalidInput("non-finite cell entries")
    s = singvals(f.cells)
    return weighted_power_sum_norm(s, p, f.cell_width)


def psd_sqrt(a, tol_psd=DEFAULT_PSD_TOL):
    """PSD square root of a Hermitian matrix with eigenvalue clamp at 0."""
    return _psd_sqrt_matrix(a, tol=tol_psd)


def conditional_expectation(f: StepFunction, level: int) -> StepFunction:
    """Average ``f`` over each dyadic interval of length 2**-level.

    ``level = 0`` averages over the unit cells of the support window.
    """
    if level < 0 or level > f.depth:
        raise InvalidParameter(f"level must be in [0, {f.depth}], got {level}")
    block = 1 << (f.depth - level)
    means = f.cells.reshape(-1, block, f.dim, f.dim).mean(axis=1)
    return StepFunction(f.dim, f.depth, f.lo, f.hi, np.repeat(means, block, axis=0))


def remove_unit_means(f: StepFunction) -> StepFunction:
    """Subtract the unit-cell averages (the level-0 conditional expectation)."""
    return f - conditional_expectation(f, 0)


def trace_pair(g: StepFunction, f: StepFunction) -> complex:
    """The sesquilinear pairing ``tr integral g(x)* f(x) dx``."""
    if not g.same_grid(f):
        raise ShapeError("trace pairing requires matching grids")
    return complex(g.cell_width * np.einsum("kij,kij->", np.conj(g.cells), f.cells))
