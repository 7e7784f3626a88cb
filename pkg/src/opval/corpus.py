"""Seeded corpora: random, structured, and smooth test functions."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .config import RunConfig
from .dyadic import StepFunction, remove_unit_means
from .rng import SplitMix64, derive_seed

__all__ = [
    "random_step_function",
    "smooth_step_function",
    "gen_corpus",
]


def random_step_function(
    rng: SplitMix64,
    dim: int,
    depth: int,
    lo: int = 0,
    hi: int = 1,
    kind: str = "gaussian",
    mean_zero: bool = False,
) -> StepFunction:
    """One seeded random step function.

    kinds: gaussian (dense complex), hermitian, diagonal, scalar (forces
    dim 1), psd (Gram squares).
    """
    n = (hi - lo) * (1 << depth)
    if kind == "scalar":
        dim = 1
    if kind == "diagonal":
        diag = rng.complex_normal((n, dim))
        cells = np.zeros((n, dim, dim), dtype=np.complex128)
        idx = np.arange(dim)
        cells[:, idx, idx] = diag
    elif kind == "hermitian":
        raw = rng.complex_normal((n, dim, dim))
        cells = 0.5 * (raw + np.conj(np.swapaxes(raw, -1, -2)))
    elif kind == "psd":
        raw = rng.complex_normal((n, dim, dim))
        cells = raw @ np.conj(np.swapaxes(raw, -1, -2))
    else:
        cells = rng.complex_normal((n, dim, dim))
    f = StepFunction(dim, depth, lo, hi, cells)
    return remove_unit_means(f) if mean_zero else f


def _bump(x, center, width):
    return np.exp(-0.5 * ((x - center) / width) ** 2)


def smooth_step_function(
    rng: SplitMix64,
    dim: int,
    depth: int,
    lo: int = 0,
    hi: int = 4,
    terms: int = 3,
    diagonal: bool = True,
) -> StepFunction:
    """Sampled sums of Gaussian bumps (diagonal matrix profile by default)."""
    n = (hi - lo) * (1 << depth)
    x = lo + (np.arange(n) + 0.5) * 2.0 ** (-depth)
    cells = np.zeros((n, dim, dim), dtype=np.complex128)
    span = hi - lo
    for i in range(dim):
        profile = np.zeros(n)
        for _ in range(terms):
            u = rng.uniform(3)
            center = lo + span * (0.2 + 0.6 * u[0])
            width = 0.08 * span + 0.25 * span * u[1] * 0.5
            amp = 2.0 * u[2] - 1.0
            profile += amp * _bump(x, center, width)
        cells[:, i, i] = profile
        if not diagonal and dim > 1:
            for j in range(i + 1, dim):
                u = rng.uniform(3)
                off = (u[2] - 0.5) * _bump(x, lo + span * (0.3 + 0.4 * u[0]), 0.2 * span)
                cells[:, i, j] += off
                cells[:, j, i] += off
    return StepFunction(dim, depth, lo, hi, cells)


def gen_corpus(config: RunConfig) -> List[Tuple[str, StepFunction]]:
    """Deterministic named corpus for the given seed/config."""
    out: List[Tuple[str, StepFunction]] = []
    kinds = ("gaussian", "hermitian", "diagonal", "scalar")
    dim_cap = max(1, min(3, config.dim))
    for kind in kinds:
        for idx in range(config.corpus_count):
            dim = 1 if kind == "scalar" else 1 + (idx % dim_cap)
            depth = 3 + (idx % min(config.depth, 4))
            hi = 1 + (idx % 2)
            rng = SplitMix64(derive_seed(config.seed, f"corpus/{kind}/{idx}"))
            f = random_step_function(rng, dim, depth, 0, hi, kind=kind)
            out.append((f"{kind}_d{f.dim}_D{depth}_{idx:03d}", f))
    for idx in range(config.corpus_count):
        rng = SplitMix64(derive_seed(config.seed, f"corpus/smooth/{idx}"))
        f = smooth_step_function(rng, 1 + (idx % 2), min(config.depth + 1, 6), 0, 4)
        out.append((f"smooth_d{f.dim}_{idx:03d}", f))
    return out
