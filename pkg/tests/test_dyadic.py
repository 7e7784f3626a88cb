from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opval.dyadic import (
    DyadicInterval,
    StepFunction,
    conditional_expectation,
    lp_norm,
    psd_sqrt,
    remove_unit_means,
    trace_pair,
)
from opval.errors import InvalidInput, InvalidParameter, NotPositive, ShapeError
from opval.rng import SplitMix64

from conftest import haar_step, random_step


# ---------------------------------------------------------------------------
# dyadic interval arithmetic
# ---------------------------------------------------------------------------

levels = st.integers(min_value=-12, max_value=12)
offsets = st.integers(min_value=-(1 << 14), max_value=1 << 14)


def _endpoints(i: DyadicInterval):
    scale = Fraction(1, 2 ** i.level) if i.level >= 0 else Fraction(2 ** (-i.level))
    return i.offset * scale, (i.offset + 1) * scale


@given(levels, offsets, levels, offsets)
def test_contains_matches_rational_endpoints(l1, o1, l2, o2):
    a = DyadicInterval(l1, o1)
    b = DyadicInterval(l2, o2)
    alo, ahi = _endpoints(a)
    blo, bhi = _endpoints(b)
    assert a.contains(b) == (alo <= blo and bhi <= ahi)


@given(levels, offsets)
def test_parent_contains_child(level, offset):
    i = DyadicInterval(level, offset)
    assert i.parent().contains(i)
    assert i.parent().length == 2 * i.length
    left, right = i.children()
    assert i.contains(left) and i.contains(right)
    assert left.hi == right.lo


def test_geometry():
    i = DyadicInterval(3, 5)
    assert i.length == 2.0 ** -3
    assert i.lo == 5 / 8 and i.hi == 6 / 8
    assert i.center == (5 + 0.5) / 8
    assert DyadicInterval.containing(0.7, 3) == i
    assert DyadicInterval.containing(-0.1, 0) == DyadicInterval(0, -1)


# ---------------------------------------------------------------------------
# lp_norm
# ---------------------------------------------------------------------------


def test_lp_norm_zero_function():
    z = StepFunction.zeros(2, 3)
    for p in (1.0, 2.0, 3.5, np.inf):
        assert lp_norm(z, p) == 0.0


def test_lp_norm_unit_constant():
    f = StepFunction.constant(np.array([[1.0]]), 4)
    assert lp_norm(f, 3.0) == pytest.approx(1.0, abs=1e-14)


def test_lp_norm_diag_12_p2():
    f = StepFunction.constant(np.diag([1.0, 2.0]), 3)
    # hand eigenvalue sum: 1 + 4 = 5
    assert lp_norm(f, 2.0) == pytest.approx(np.sqrt(5.0), abs=1e-13)


def test_lp_norm_validates():
    f = StepFunction.constant(np.eye(2), 2)
    with pytest.raises(InvalidParameter):
        lp_norm(f, 0.5)
    with pytest.raises(InvalidInput):
        StepFunction(1, 1, 0, 1, np.array([[[np.nan]], [[1.0]]]))


def test_lp_norm_triangle_and_homogeneity():
    for seed in range(12):
        f = random_step(seed, 2, 4)
        g = random_step(seed + 100, 2, 4)
        for p in (1.0, 2.0, 3.0, np.inf):
            lf, lg, lfg = lp_norm(f, p), lp_norm(g, p), lp_norm(f + g, p)
            assert lfg <= lf + lg + 1e-10
            assert lp_norm(2.5 * f, p) == pytest.approx(2.5 * lf, rel=1e-12)


def test_lp_norm_lyapunov_log_convexity():
    # 1/p = (1-theta)/p0 + theta/p1
    for seed in range(8):
        f = random_step(seed, 3, 3)
        for p0, p1, theta in ((1.0, 4.0, 0.5), (2.0, np.inf, 0.25), (1.0, 2.0, 0.75)):
            inv = (1 - theta) / p0 + (0.0 if np.isinf(p1) else theta / p1)
            p = 1.0 / inv
            lhs = lp_norm(f, p)
            rhs = lp_norm(f, p0) ** (1 - theta) * lp_norm(f, p1) ** theta
            assert lhs <= rhs + 1e-9


def test_lp_norm_huge_exponent_stable():
    f = StepFunction.constant(np.diag([3.0, 0.5]), 2)
    assert lp_norm(f, 2.0 ** 15) == pytest.approx(3.0, rel=1e-3)


# ---------------------------------------------------------------------------
# psd_sqrt
# ---------------------------------------------------------------------------


def test_psd_sqrt_identity_and_diagonal():
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_psd_sqrt_multiply_back():
    a = np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex)
    b = psd_sqrt(a)
    assert np.max(np.abs(b @ b - a)) <= 1e-12
    w = np.linalg.eigvalsh(b)
    assert w.min() >= -1e-14


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPositive):
        psd_sqrt(np.diag([1.0, -1.0]))
    with pytest.raises(InvalidInput):
        psd_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_sqrt_clamps_roundoff():
    a = np.diag([1.0, -1e-14])
    b = psd_sqrt(a)
    assert np.linalg.eigvalsh(b).min() >= 0.0


# ---------------------------------------------------------------------------
# conditional expectation
# ---------------------------------------------------------------------------


def test_conditional_expectation_idempotent_and_exact():
    f = random_step(3, 2, 5)
    for n in range(6):
        e = conditional_expectation(f, n)
        again = conditional_expectation(e, n)
        assert (e - again).max_abs() <= 1e-14


def test_conditional_expectation_kills_haar():
    h = haar_step()
    assert conditional_expectation(h, 0).max_abs() <= 1e-15


def test_conditional_expectation_preserves_integral():
    for seed in range(6):
        f = random_step(seed, 3, 5, hi=2)
        for n in (0, 2, 4):
            e = conditional_expectation(f, n)
            assert np.max(np.abs(e.integrate() - f.integrate())) <= 1e-12


def test_conditional_expectation_rejects_bad_levels():
    f = random_step(0, 1, 3)
    with pytest.raises(InvalidParameter):
        conditional_expectation(f, -1)
    with pytest.raises(InvalidParameter):
        conditional_expectation(f, 4)


def test_conditional_expectation_contraction():
    for seed in range(6):
        f = random_step(seed, 2, 4, hi=2)
        for n in (0, 1, 3):
            e = conditional_expectation(f, n)
            for p in (1.0, 2.0, np.inf):
                assert lp_norm(e, p) <= lp_norm(f, p) * (1 + 1e-12)


def test_kadison_schwarz_at_step_level():
    for seed in range(8):
        f = random_step(seed, 3, 4)
        square = StepFunction(
            3, 4, 0, 1, np.conj(np.swapaxes(f.cells, -1, -2)) @ f.cells
        )
        for n in (0, 2):
            ef = conditional_expectation(f, n)
            esq = conditional_expectation(square, n)
            gap = esq.cells - np.conj(np.swapaxes(ef.cells, -1, -2)) @ ef.cells
            w = np.linalg.eigvalsh(0.5 * (gap + np.conj(np.swapaxes(gap, -1, -2))))
            assert w.min() >= -1e-10


# ---------------------------------------------------------------------------
# trace pairing
# ---------------------------------------------------------------------------


def test_trace_pair_haar_unit():
    h = haar_step()
    assert trace_pair(h, h) == pytest.approx(1.0 + 0.0j, abs=1e-14)


def test_trace_pair_disjoint_supports():
    a = StepFunction.zeros(1, 2)
    b = StepFunction.zeros(1, 2)
    ca, cb = np.array(a.cells), np.array(b.cells)
    ca[0] = 1.0
    cb[3] = 1.0
    a = StepFunction(1, 2, 0, 1, ca)
    b = StepFunction(1, 2, 0, 1, cb)
    assert trace_pair(a, b) == 0.0


def test_trace_pair_conjugate_symmetry_and_cs():
    for seed in range(10):
        g = random_step(seed, 2, 4)
        f = random_step(seed + 50, 2, 4)
        assert trace_pair(g, f) == pytest.approx(np.conj(trace_pair(f, g)), abs=1e-12)
        assert abs(trace_pair(g, f)) <= lp_norm(g, 2.0) * lp_norm(f, 2.0) + 1e-10


def test_trace_pair_grid_mismatch():
    with pytest.raises(ShapeError):
        trace_pair(random_step(0, 1, 3), random_step(0, 1, 4))


def test_remove_unit_means():
    f = random_step(1, 2, 4, hi=2)
    g = remove_unit_means(f)
    means = g.cells.reshape(2, 16, 2, 2).mean(axis=1)
    assert np.max(np.abs(means)) <= 1e-14
