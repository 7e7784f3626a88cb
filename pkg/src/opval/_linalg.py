"""Batched Hermitian functional calculus.

Matrix-valued data is stored as complex128 arrays of shape (..., d, d).
Fractional powers go through the eigendecomposition of the Hermitian part,
with eigenvalues in [-tol*scale, 0) clamped to zero.  Norm accumulations are
scaled by the largest value first so that huge exponents (p up to 2**16 and
beyond) neither overflow nor underflow.
"""

import numpy as np

from .errors import InvalidInput, NotPositive

DEFAULT_PSD_TOL = 1e-10


def adjoint(a):
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian_part(a):
    return 0.5 * (a + adjoint(a))


def is_hermitian(a, rtol=1e-10):
    a = np.asarray(a)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    dev = float(np.max(np.abs(a - adjoint(a)))) if a.size else 0.0
    return dev <= rtol * scale if scale > 0 else dev == 0.0


def clamped_eigh(a, tol=DEFAULT_PSD_TOL, strict=True):
    """Eigendecompose Hermitian ``a``; clamp small negative eigenvalues to 0.

    With ``strict`` a NotPositive is raised when any eigenvalue falls below
    -tol * scale (scale = largest |eigenvalue| of that matrix).
    """
    w, v = np.linalg.eigh(hermitian_part(a))
    scale = np.max(np.abs(w), axis=-1, keepdims=True)
    if strict:
        bad = w < -tol * np.maximum(scale, 1e-300)
        if np.any(bad):
            raise NotPositive(
                f"eigenvalue {float(w[bad].min())} below the PSD tolerance"
            )
    return np.maximum(w, 0.0), v


def recompose(w, v):
    return np.einsum("...ij,...j,...kj->...ik", v, w, np.conj(v))


def pos_part(a):
    """PSD part of a Hermitian matrix: negative eigenvalues dropped."""
    w, v = np.linalg.eigh(hermitian_part(a))
    return recompose(np.maximum(w, 0.0), v)


def psd_power(a, t, tol=DEFAULT_PSD_TOL, strict=True):
    """a**t for Hermitian PSD ``a``; negative ``t`` needs strict positivity."""
    w, v = clamped_eigh(a, tol=tol, strict=strict)
    if t < 0 and np.any(w <= 0.0):
        raise NotPositive("negative power of a singular matrix")
    return recompose(np.power(w, t), v)


def psd_sqrt(a, tol=DEFAULT_PSD_TOL):
    """PSD square root of a Hermitian PSD matrix (eigenvalue clamp at 0)."""
    a = np.asarray(a, dtype=np.complex128)
    if not is_hermitian(a, rtol=1e-8):
        raise InvalidInput("matrix is not Hermitian")
    return psd_power(a, 0.5, tol=tol, strict=True)


def eigvals_psd(a):
    """Eigenvalues of Hermitian ``a`` clamped at zero (no strict check)."""
    return np.maximum(np.linalg.eigvalsh(hermitian_part(a)), 0.0)


def singvals(a):
    return np.linalg.svd(a, compute_uv=False)


def op_norm(a):
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        return 0.0
    return float(np.max(singvals(a)))


def weighted_power_sum_norm(vals, p, weight):
    """(weight * sum(vals**p)) ** (1/p), overflow-safe; ``p`` may be inf.

    ``vals`` is any array of nonnegative numbers (singular values or
    eigenvalues pooled over cells); ``weight`` is the measure of one cell.
    """
    v = np.asarray(vals, dtype=float).ravel()
    if v.size == 0:
        return 0.0
    m = float(v.max())
    if m <= 0.0:
        return 0.0
    if np.isinf(p):
        return m
    with np.errstate(under="ignore"):
        total = float(((v / m) ** p).sum())
    return m * float(weight * total) ** (1.0 / p)
