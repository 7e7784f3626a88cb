"""Acceptance suite: one test per criterion, printed as a pass/fail line.

Every tolerance is pinned here, not configured elsewhere.  Random instances
come from fixed seeds so reruns are identical.
"""

import itertools
import time

import numpy as np
import pytest

from opval._linalg import adjoint
from opval.checks import (
    fefferman_check,
    hp_lpmo_check,
    operator_lemma_check,
    sign_flip,
    stein_check,
    rademacher_norm,
)
from opval.config import RunConfig
from opval.corpus import random_step_function, smooth_step_function
from opval.dyadic import (
    SignPattern,
    StepFunction,
    lp_norm,
    remove_unit_means,
)
from opval.norms import bmo_col_norm, hardy_col_norm, lpmo_col_norm, maximal_norm, mean_osc_bmo_norm
from opval.rng import SplitMix64, derive_seed
from opval.serialize import canonical_dumps
from opval.squares import square_fn_col
from opval.verify import run_verify
from opval.wavelets import analyze, synthesize, wavelet_basis

SEED = 727272


def _rng(label):
    return SplitMix64(derive_seed(SEED, label))


def _report(criterion, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] acceptance {criterion}: {detail}"
    print(line)
    assert passed, line


def test_criterion_01_calderon_roundtrip():
    worst = 0.0
    for i in range(100):
        d, depth = 1 + i % 3, 3 + i % 4
        f = random_step_function(_rng(f"c1/{i}"), d, depth, 0, 1 + i % 2)
        worst = max(worst, (synthesize(analyze(f)) - f).max_abs())
    _report("1 Calderon round-trip", worst <= 1e-12, f"max cell error {worst:.3e}")


def test_criterion_02_parseval_and_rademacher():
    worst_p = worst_r = 0.0
    for i in range(100):
        d, depth = 1 + i % 3, 3 + i % 4
        f = random_step_function(_rng(f"c2/{i}"), d, depth, 0, 1 + i % 2)
        h2 = hardy_col_norm(f, 2.0)
        worst_p = max(worst_p, abs(h2 - lp_norm(remove_unit_means(f), 2.0)))
        if i % 2 == 0:
            worst_r = max(worst_r, abs(rademacher_norm(f, 2.0) - h2))
    _report(
        "2 Parseval/H2 + Rademacher p=2",
        worst_p <= 1e-10 and worst_r <= 1e-10,
        f"parseval dev {worst_p:.3e}, rademacher dev {worst_r:.3e}",
    )


def test_criterion_03_fefferman_bound():
    failures, max_ratio = 0, 0.0
    for i in range(200):
        d, depth = 1 + i % 3, 3 + (i // 3) % 3
        phi = random_step_function(_rng(f"c3p/{i}"), d, depth)
        f = random_step_function(_rng(f"c3f/{i}"), d, depth, mean_zero=True)
        rep = fefferman_check(phi, f)
        failures += 0 if rep.passed else 1
        max_ratio = max(max_ratio, rep.metadata["ratio"])
    _report(
        "3 Fefferman sqrt(2) bound",
        failures == 0,
        f"0 failures required, got {failures}; empirical max ratio {max_ratio:.6f}",
    )


def test_criterion_04_hp_lpmo_bound():
    failures = 0
    for i in range(200):
        d, depth = 1 + i % 3, 3 + (i // 3) % 3
        phi = random_step_function(_rng(f"c4p/{i}"), d, depth)
        f = random_step_function(_rng(f"c4f/{i}"), d, depth, mean_zero=True)
        failures += 0 if hp_lpmo_check(phi, f, 1.5).passed else 1
    _report("4 H_p-L_p'MO bound at p=3/2", failures == 0, f"failures {failures}/200")


def test_criterion_05_operator_lemma():
    from opval._linalg import psd_power

    worst_slack = np.inf
    failures = 0
    for i in range(500):
        d = 1 + i % 3
        rng = _rng(f"c5/{i}")
        y = rng.psd_matrix(d, ridge=0.3)
        u, _ = np.linalg.qr(rng.gaussian_matrix(d))
        w = (u * rng.uniform(d)) @ u.conj().T
        ys = psd_power(y, 0.5)
        x = ys @ w @ ys
        us = rng.uniform(2)
        rep = operator_lemma_check(x, y, 0.999 * us[0], 1.0 + us[1])
        slack = rep.rhs - rep.lhs
        worst_slack = min(worst_slack, slack)
        failures += 0 if slack >= -1e-9 else 1
    _report(
        "5 operator lemma (s,t)",
        failures == 0,
        f"500 instances, min slack {worst_slack:.3e} >= -1e-9",
    )


def test_criterion_06_stein_p2():
    failures = 0
    for i in range(100):
        d, depth = 1 + i % 3, 3 + i % 3
        rng = _rng(f"c6/{i}")
        seq = [
            StepFunction(d, depth, 0, 1, rng.complex_normal((1 << depth, d, d)))
            for _ in range(depth)
        ]
        failures += 0 if stein_check(seq, 2.0).passed else 1
    _report("6 Stein p=2 with c=1", failures == 0, f"failures {failures}/100")


def test_criterion_07_unconditionality():
    # full-set sign flips: S_c^2 profiles exactly equal
    worst = 0.0
    for i in range(20):
        d, depth = 1 + i % 3, 3 + i % 3
        f = random_step_function(_rng(f"c7a/{i}"), d, depth)
        c = analyze(f, with_scaling=False)
        flipped = sign_flip(f, SignPattern({iv: -1 for iv in c.entries}))
        s0 = square_fn_col(c).square
        s1 = square_fn_col(analyze(flipped, with_scaling=False)).square
        worst = max(worst, (s0 - s1).max_abs())
    # subset flips never increase the H^c_1 norm: full 2^N enumeration, N <= 10
    f = random_step_function(_rng("c7b"), 2, 3)
    c = analyze(f, with_scaling=False)
    intervals = sorted(c.entries)[:7]
    base = hardy_col_norm(f, 1.0)
    violations = 0
    for mask in range(1 << len(intervals)):
        signs = {iv: -1 for b, iv in enumerate(intervals) if (mask >> b) & 1}
        if hardy_col_norm(sign_flip(f, SignPattern(signs)), 1.0) > base * (1 + 1e-12):
            violations += 1
    _report(
        "7 unconditionality",
        worst <= 1e-12 and violations == 0,
        f"S_c^2 flip dev {worst:.3e}; {violations} violations over {1 << len(intervals)} subsets",
    )


def test_criterion_08_maximal_bracket_diagonal():
    ok = True
    detail = []
    for i in range(20):
        d, depth = 2 + i % 2, 3 + i % 2
        rng = _rng(f"c8/{i}")
        n = 1 << depth
        xs = []
        for _ in range(4 + i % 3):
            vals = rng.uniform(n * d).reshape(n, d)
            cells = np.zeros((n, d, d), dtype=complex)
            cells[:, np.arange(d), np.arange(d)] = vals
            xs.append(StepFunction(d, depth, 0, 1, cells))
        stack = np.stack([x.cells for x in xs])
        exact_cells = np.zeros_like(stack[0])
        idx = np.arange(d)
        exact_cells[:, idx, idx] = stack[:, :, idx, idx].real.max(axis=0)
        exact = lp_norm(StepFunction(d, depth, 0, 1, exact_cells), 2.0)
        b = maximal_norm(xs, 2.0, seed=SEED)
        ok &= b.lower <= exact * (1 + 1e-6)
        ok &= b.upper >= exact * (1 - 1e-6)
        ok &= b.lower <= b.upper * (1 + 1e-9)
    _report("8 maximal-norm bracket (diagonal oracle)", ok, "20 instances contained")


def test_criterion_09_lpmo_bmo_consistency():
    worst = 0.0
    count = 0
    for i in range(20):
        d, depth = 1 + i % 3, 3 + i % 3
        phi = random_step_function(_rng(f"c9/{i}"), d, depth)
        bmo = bmo_col_norm(phi)
        if bmo <= 0:
            continue
        bracket = lpmo_col_norm(phi, 2.0 ** 16, compute_lower=False, ascent_iters=0)
        worst = max(worst, abs(bracket.upper / bmo - 1.0))
        count += 1
    _report(
        "9 L_infMO/BMO consistency (p=2^16)",
        worst <= 0.02 and count > 0,
        f"max deviation {worst:.3e} over {count} functions",
    )


def test_criterion_10_bmo_equivalence_envelope():
    basis = wavelet_basis("meyer")
    ratios = []
    for i in range(12):
        phi = smooth_step_function(_rng(f"c10/{i}"), 1 + i % 2, 6, 0, 4)
        wav = bmo_col_norm(phi, basis, level_min=-2, level_max=5)
        osc = mean_osc_bmo_norm(phi)
        if osc <= 1e-12 and wav <= 1e-12:
            continue
        ratios.append(wav / osc)
    ok = all(1.0 / 32.0 <= r <= 32.0 for r in ratios)
    _report(
        "10 BMO equivalence envelope (Meyer)",
        ok and ratios,
        f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}], median {np.median(ratios):.3f}",
    )


def test_criterion_11_determinism_and_runtime():
    config = RunConfig(seed=SEED)
    start = time.monotonic()
    reports_a, ok_a = run_verify(config)
    elapsed = time.monotonic() - start
    reports_b, ok_b = run_verify(config)
    text_a = canonical_dumps([r.to_dict() for r in reports_a])
    text_b = canonical_dumps([r.to_dict() for r in reports_b])
    _report(
        "11 determinism + runtime",
        ok_a and ok_b and text_a == text_b and elapsed < 300.0,
        f"identical reports, all passed, one run took {elapsed:.1f}s < 300s",
    )
