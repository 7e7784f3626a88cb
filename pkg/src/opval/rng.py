"""Deterministic random streams for corpora and optimizer starts.

The generator is a stateless SplitMix-style 64-bit mixer, reproduced here
bit-exactly so that corpora are identical across platforms and numpy
versions:

    state_i = (seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2**64
    z = state_i
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    out_i = z ^ (z >> 31)

Uniforms take the top 53 bits: u_i = (out_i >> 11) * 2**-53 in [0, 1).
Normals come from Box-Muller on consecutive uniforms (u = draws[2i],
v = draws[2i+1]):

    r = sqrt(-2 * log(1 - u))            # 1 - u in (0, 1], so log is finite
    n_{2i} = r * cos(2*pi*v),  n_{2i+1} = r * sin(2*pi*v)

A standard complex Gaussian entry is (n_a + 1j * n_b) / sqrt(2), so
E|z|^2 = 1.  Sub-streams are derived by hashing a label into the seed.
"""

from __future__ import annotations

import hashlib

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def derive_seed(seed: int, label: str) -> int:
    """Fold a text label into a 64-bit sub-seed (SHA-256 based, stable)."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return (seed ^ int.from_bytes(digest[:8], "big")) & 0xFFFFFFFFFFFFFFFF


class SplitMix64:
    """Counter-based SplitMix64 stream; see module docstring for the bits."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def raw(self, n: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            z = (self._seed + idx * _GAMMA) & _MASK
            z = ((z ^ (z >> np.uint64(30))) * _MIX1) & _MASK
            z = ((z ^ (z >> np.uint64(27))) * _MIX2) & _MASK
            return z ^ (z >> np.uint64(31))

    def uniform(self, n: int) -> np.ndarray:
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def normal(self, n: int) -> np.ndarray:
        m = (n + 1) // 2
        u = self.uniform(2 * m)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        out = np.empty(2 * m)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def complex_normal(self, shape) -> np.ndarray:
        n = int(np.prod(shape))
        z = self.normal(2 * n)
        return ((z[:n] + 1j * z[n:]) / np.sqrt(2.0)).reshape(shape)

    def integers(self, n: int, bound: int) -> np.ndarray:
        """n draws uniform on [0, bound) by 53-bit rejection-free scaling."""
        return np.minimum((self.uniform(n) * bound).astype(np.int64), bound - 1)

    def gaussian_matrix(self, d: int) -> np.ndarray:
        return self.complex_normal((d, d))

    def hermitian_matrix(self, d: int) -> np.ndarray:
        a = self.gaussian_matrix(d)
        return 0.5 * (a + a.conj().T)

    def psd_matrix(self, d: int, ridge: float = 0.0) -> np.ndarray:
        a = self.gaussian_matrix(d)
        return a @ a.conj().T + ridge * np.eye(d)
