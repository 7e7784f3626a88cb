"""The asserted verification suite: one aggregated report per inequality.

Every section draws its instances from seeded sub-streams of the config
seed, evaluates the check on each instance, and emits one CheckReport whose
lhs is the worst normalized ratio over the sweep (rhs = 1).  Reports are
sorted by name; the suite passes iff every asserted report passes.  The
``inject_defect`` config key deliberately corrupts the coefficient data on
the norm side of the named check so its failure path can be exercised.
"""

from __future__ import annotations

import numpy as np

from ._linalg import adjoint
from .checks import (
    CheckReport,
    REL_TOL,
    bg_equivalence_report,
    bmo_equivalence_report,
    fefferman_check,
    hp_duality_pair,
    hp_lpmo_check,
    operator_lemma_check,
    rademacher_norm,
    sign_flip,
    stein_check,
)
from .config import RunConfig
from .corpus import random_step_function, smooth_step_function
from .dyadic import (
    SignPattern,
    StepFunction,
    conditional_expectation,
    lp_norm,
    remove_unit_means,
)
from .norms import hardy_col_norm, lpmo_col_norm, maximal_norm, bmo_col_norm
from .rng import SplitMix64, derive_seed
from .squares import square_fn_col, tent_norm
from .wavelets import TentField, analyze, embed_phi, project_psi, synthesize, wavelet_basis

__all__ = ["run_verify"]


def _sub_rng(config: RunConfig, label: str) -> SplitMix64:
    return SplitMix64(derive_seed(config.seed, label))


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0.0:
        return lhs / rhs
    return 0.0 if lhs <= 0.0 else np.inf


def _aggregate(name, pairs, constant, asserted=True, **extra) -> CheckReport:
    """Combine per-instance (lhs, rhs) pairs into one normalized report."""
    worst = 0.0
    failures = 0
    for lhs, rhs in pairs:
        if not (lhs <= rhs * (1.0 + REL_TOL)):
            failures += 1
        worst = max(worst, _ratio(lhs, rhs))
    report = CheckReport(
        name=name,
        lhs=float(worst),
        rhs=1.0,
        constant_used=float(constant),
        passed=failures == 0,
        asserted=asserted,
        metadata={"count": len(pairs), "failures": failures, "max_ratio": float(worst), **extra},
    )
    return report


def _dims_depths(i):
    return 1 + i % 3, 3 + (i // 3) % 3


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


def _calderon_section(config) -> CheckReport:
    worst = 0.0
    for i in range(config.roundtrip_instances):
        d, depth = 1 + i % 3, 3 + i % 4
        rng = _sub_rng(config, f"calderon/{i}")
        f = random_step_function(rng, d, depth, 0, 1 + i % 2)
        back = synthesize(analyze(f))
        worst = max(worst, (back - f).max_abs())
    return _aggregate("calderon-roundtrip", [(worst, 1e-12)], 1.0, tolerance=1e-12)


def _parseval_section(config) -> CheckReport:
    pairs = []
    extras = {}
    worst_r = 0.0
    for i in range(config.roundtrip_instances):
        d, depth = 1 + i % 3, 3 + i % 4
        rng = _sub_rng(config, f"parseval/{i}")
        f = random_step_function(rng, d, depth, 0, 1 + i % 2)
        h2 = hardy_col_norm(f, 2.0)
        direct = lp_norm(remove_unit_means(f), 2.0)
        pairs.append((abs(h2 - direct), 1e-10))
    return _aggregate("parseval-h2", pairs, 1.0, tolerance=1e-10, **extras)


def _rademacher_section(config) -> CheckReport:
    pairs = []
    for i in range(config.rademacher_instances):
        d, depth = 1 + i % 3, 3 + i % 3
        rng = _sub_rng(config, f"rademacher/{i}")
        f = random_step_function(rng, d, depth, 0, 1)
        val = rademacher_norm(f, 2.0, level_mode="per-level")
        ref = hardy_col_norm(f, 2.0)
        pairs.append((abs(val - ref), 1e-10))
    return _aggregate("rademacher-p2", pairs, 1.0, tolerance=1e-10)


def _fefferman_section(config):
    pairs = []
    ratios = []
    lower_dir = []
    inject = config.inject_defect == "fefferman-h1-bmo"
    for i in range(config.fefferman_pairs):
        d, depth = _dims_depths(i)
        rng = _sub_rng(config, f"fefferman/{i}")
        phi = random_step_function(rng, d, depth, 0, 1, kind="gaussian")
        f = random_step_function(rng, d, depth, 0, 1, kind="gaussian", mean_zero=True)
        rep = fefferman_check(phi, f)
        lhs, rhs = rep.lhs, rep.rhs
        if inject and i == 0:
            # corrupt the coefficient data feeding the norm side only
            rhs = np.sqrt(2.0) * bmo_col_norm(phi * 1e-6) * rep.metadata["hardy_col_1"]
        pairs.append((lhs, rhs))
        ratios.append(rep.metadata["ratio"])
        if i < 40:
            h1 = rep.metadata["hardy_col_1"]
            bmo = rep.metadata["bmo_col"]
            if h1 > 0 and bmo > 0:
                lower_dir.append(lhs / h1 / bmo)
    main = _aggregate(
        "fefferman-h1-bmo",
        pairs,
        float(np.sqrt(2.0)),
        max_pairing_ratio=float(max(ratios)),
        injected=inject,
    )
    lower = CheckReport(
        name="fefferman-lower-direction",
        lhs=0.0,
        rhs=1.0,
        constant_used=float(np.sqrt(2.0)),
        passed=True,
        asserted=False,
        metadata={
            "count": len(lower_dir),
            "sup_ratio": float(max(lower_dir)) if lower_dir else 0.0,
            "note": "empirical |pairing| / (H1 * BMO); the proof gives no numeric lower constant",
        },
    )
    return [main, lower]


def _hp_lpmo_section(config) -> CheckReport:
    pairs = []
    inject = config.inject_defect == "hp-lpmo-p=1.5"
    for i in range(config.hp_pairs):
        d, depth = _dims_depths(i)
        rng = _sub_rng(config, f"hp-lpmo/{i}")
        phi = random_step_function(rng, d, depth, 0, 1, kind="gaussian")
        f = random_step_function(rng, d, depth, 0, 1, kind="gaussian", mean_zero=True)
        rep = hp_lpmo_check(phi, f, 1.5)
        lhs, rhs = rep.lhs, rep.rhs
        if inject and i == 0:
            rhs *= 1e-6
        pairs.append((lhs, rhs))
    return _aggregate("hp-lpmo-p=1.5", pairs, float(np.sqrt(2.0)), injected=inject)


def _holder_section(config) -> CheckReport:
    pairs = []
    plist = sorted({2.0, *[p for p in config.p_list if 1.0 < p < np.inf]})
    for p in plist:
        for i in range(60):
            d, depth = _dims_depths(i)
            rng = _sub_rng(config, f"holder/{p:g}/{i}")
            phi = random_step_function(rng, d, depth, 0, 1)
            f = random_step_function(rng, d, depth, 0, 1, mean_zero=True)
            rep = hp_duality_pair(phi, f, p)
            pairs.append((rep.lhs, rep.rhs))
    return _aggregate("holder-pairing", pairs, 1.0, p_values=list(plist))


def _stein_section(config):
    pairs = []
    ratios = {}
    for i in range(config.stein_instances):
        d, depth = 1 + i % 3, 3 + i % 3
        rng = _sub_rng(config, f"stein/{i}")
        seq = [random_step_function(rng, d, depth, 0, 1) for _ in range(depth)]
        rep = stein_check(seq, 2.0)
        pairs.append((rep.lhs, rep.rhs))
        for p in config.p_list:
            if p == 2.0 or np.isinf(p):
                continue
            rp = stein_check(seq, p)
            ratios.setdefault(f"p={p:g}", []).append(rp.metadata["ratio"])
    main = _aggregate("stein-p2", pairs, 1.0)
    reported = CheckReport(
        name="stein-ratio-report",
        lhs=0.0,
        rhs=1.0,
        constant_used=float("nan"),
        passed=True,
        asserted=False,
        metadata={
            k: {"max": float(np.max(v)), "mean": float(np.mean(v))} for k, v in sorted(ratios.items())
        },
    )
    return [main, reported]


def _operator_lemma_section(config) -> CheckReport:
    pairs = []
    for i in range(config.lemma_instances):
        d = 1 + i % 3
        rng = _sub_rng(config, f"lemma/{i}")
        y = rng.psd_matrix(d, ridge=0.25)
        u, _ = np.linalg.qr(rng.gaussian_matrix(d))
        lam = rng.uniform(d)
        w = (u * lam) @ u.conj().T
        ysqrt = _matrix_sqrt(y)
        x = ysqrt @ w @ ysqrt
        us = rng.uniform(2)
        s = 0.999 * us[0]
        t = 1.0 + us[1]
        rep = operator_lemma_check(x, y, s, t)
        pairs.append((rep.lhs, rep.rhs))
    return _aggregate("operator-lemma", pairs, 2.0)


def _matrix_sqrt(y):
    from ._linalg import psd_power

    return psd_power(y, 0.5, strict=False)


def _sign_flip_section(config):
    invariance_pairs = []
    for i in range(20):
        d, depth = 1 + i % 3, 3 + i % 3
        rng = _sub_rng(config, f"signflip/inv/{i}")
        f = random_step_function(rng, d, depth, 0, 1)
        c = analyze(f, with_scaling=False)
        pattern = SignPattern({interval: -1 for interval in c.entries})
        flipped = sign_flip(f, pattern)
        s_orig = square_fn_col(c).square
        s_flip = square_fn_col(analyze(flipped, with_scaling=False)).square
        invariance_pairs.append(((s_orig - s_flip).max_abs(), 1e-12))
    inv = _aggregate("sign-flip-invariance", invariance_pairs, 1.0, tolerance=1e-12)

    # subset flips on a function with exactly `signflip_vars` coefficients
    rng = _sub_rng(config, "signflip/subset")
    nvars = config.signflip_vars
    depth = 3
    f = random_step_function(rng, 2, depth, 0, 1)
    c = analyze(f, with_scaling=False)
    intervals = sorted(c.entries.keys())[:nvars]
    base = hardy_col_norm(f, 1.0)
    monotone_pairs = []
    for mask in range(1 << len(intervals)):
        chosen = {
            interval: -1 for b, interval in enumerate(intervals) if (mask >> b) & 1
        }
        flipped = sign_flip(f, SignPattern(chosen))
        monotone_pairs.append((hardy_col_norm(flipped, 1.0), base))
    mono = _aggregate(
        "sign-flip-monotone", monotone_pairs, 1.0, enumerated=1 << len(intervals)
    )
    return [inv, mono]


def _psi_phi_section(config):
    ident_pairs = []
    for i in range(30):
        d, depth = 1 + i % 3, 3 + i % 3
        rng = _sub_rng(config, f"psiphi/{i}")
        f = random_step_function(rng, d, depth, 0, 1 + i % 2, mean_zero=True)
        g = embed_phi(analyze(f, with_scaling=False))
        back = project_psi(g)
        ident_pairs.append(((back - f).max_abs(), 1e-12))
    ident = _aggregate("psi-phi-identity", ident_pairs, 1.0, tolerance=1e-12)

    contraction_pairs = []
    for i in range(20):
        d, depth = 1 + i % 3, 4
        rng = _sub_rng(config, f"psi-contraction/{i}")
        probe = StepFunction.zeros(d, depth, 0, 1)
        field = analyze(random_step_function(rng, d, depth, 0, 1), with_scaling=False)
        entries = {}
        for interval in list(field.entries)[: 1 + i % 6]:
            cells = np.zeros_like(probe.cells)
            cr = probe.cell_range(interval)
            block = rng.complex_normal((cr[1] - cr[0], d, d))
            cells[cr[0] : cr[1]] = block
            entries[interval] = StepFunction(d, depth, 0, 1, cells)
        tent = TentField(d, depth, 0, 1, entries)
        lhs = hardy_col_norm(project_psi(tent), 2.0)
        rhs = tent_norm(tent, 2.0)
        contraction_pairs.append((lhs, rhs))
    contraction = _aggregate("psi-contraction-p2", contraction_pairs, 1.0)
    return [ident, contraction]


def _bg_section(config):
    scalar_pairs = []
    ratio_meta = {}
    for i in range(config.bg_instances):
        rng = _sub_rng(config, f"bg/{i}")
        f = random_step_function(rng, 1, 4, 0, 1, kind="scalar", mean_zero=True)
        rep = bg_equivalence_report(f, 2.0)
        scalar_pairs.append((rep.lhs, rep.rhs))
    main = _aggregate("bg-p2-scalar", scalar_pairs, 1.0)
    ratios = []
    for i in range(3):
        d = 1 + i
        rng = _sub_rng(config, f"bg-ratio/{i}")
        f = random_step_function(rng, d, 4, 0, 1, mean_zero=True)
        for p in (1.5, 3.0):
            rep = bg_equivalence_report(
                f,
                p,
                starts=min(config.descent_starts, 4),
                iters=min(config.descent_iters, 200),
                seed=config.seed,
            )
            ratios.append(
                {
                    "dim": d,
                    "p": p,
                    "ratio_lower": rep.metadata["ratio_lower"],
                    "ratio_upper": rep.metadata["ratio_upper"],
                }
            )
    report = CheckReport(
        name="bg-ratio-envelope",
        lhs=0.0,
        rhs=1.0,
        constant_used=float("nan"),
        passed=True,
        asserted=False,
        metadata={"instances": ratios},
    )
    return [main, report]


def _bmo_equivalence_section(config) -> CheckReport:
    basis = wavelet_basis(
        "meyer",
        delta_log2=config.meyer_delta_log2,
        radius=config.meyer_radius,
        decay_m=config.meyer_decay_m,
    )
    pairs = []
    ratios = []
    for i in range(config.smooth_instances):
        rng = _sub_rng(config, f"bmo-equiv/{i}")
        phi = smooth_step_function(rng, 1 + i % 2, 6, 0, 4)
        rep = bmo_equivalence_report(phi, basis, level_min=-2, level_max=5)
        pairs.append((rep.lhs, rep.rhs))
        if "ratio" in rep.metadata:
            ratios.append(rep.metadata["ratio"])
    return _aggregate(
        "bmo-equivalence-envelope",
        pairs,
        32.0,
        ratio_min=float(np.min(ratios)) if ratios else 0.0,
        ratio_max=float(np.max(ratios)) if ratios else 0.0,
        ratio_median=float(np.median(ratios)) if ratios else 0.0,
    )


def _maximal_section(config) -> CheckReport:
    pairs = []
    for i in range(config.maximal_instances):
        d = 2 + i % 2
        depth = 3 + i % 2
        rng = _sub_rng(config, f"maximal/{i}")
        xs = []
        n = (1 << depth)
        for _ in range(4 + i % 3):
            diag = rng.uniform(n * d).reshape(n, d)
            cells = np.zeros((n, d, d), dtype=np.complex128)
            cells[:, np.arange(d), np.arange(d)] = diag
            xs.append(StepFunction(d, depth, 0, 1, cells))
        stack = np.stack([x.cells for x in xs])
        exact_cells = np.zeros_like(stack[0])
        idx = np.arange(d)
        exact_cells[:, idx, idx] = stack[:, :, idx, idx].real.max(axis=0)
        exact = lp_norm(StepFunction(d, depth, 0, 1, exact_cells), 2.0)
        bracket = maximal_norm(xs, 2.0, ascent_iters=config.ascent_iters, seed=config.seed)
        dev = max(
            _ratio(bracket.lower, exact),
            _ratio(exact, bracket.upper),
            _ratio(bracket.lower, bracket.upper),
        )
        pairs.append((dev, 1.0 + 1e-6))
    return _aggregate("maximal-bracket-diagonal", pairs, 1.0, slack=1e-6)


def _lpmo_bmo_section(config) -> CheckReport:
    pairs = []
    surrogate_p = 65536.0
    for i in range(config.lpmo_bmo_instances):
        d, depth = 1 + i % 3, 3 + i % 3
        rng = _sub_rng(config, f"lpmo-bmo/{i}")
        phi = random_step_function(rng, d, depth, 0, 1)
        bmo = bmo_col_norm(phi)
        if bmo <= 0:
            continue
        bracket = lpmo_col_norm(phi, surrogate_p, compute_lower=False, ascent_iters=0)
        pairs.append((abs(bracket.upper / bmo - 1.0), 0.02))
    return _aggregate("lpmo-bmo-consistency", pairs, 1.0, surrogate_p=surrogate_p)


def _doob_section(config) -> CheckReport:
    pairs = []
    ratios = []
    for i in range(10):
        d, depth = 1 + i % 3, 3 + i % 2
        rng = _sub_rng(config, f"doob/{i}")
        f = random_step_function(rng, d, depth, 0, 1)
        square = StepFunction(d, depth, 0, 1, adjoint(f.cells) @ f.cells)
        xs = [conditional_expectation(square, n) for n in range(0, depth + 1)]
        bracket = maximal_norm(xs, 1.0, ascent_iters=0, compute_lower=False, seed=config.seed)
        target = lp_norm(f, 2.0) ** 2
        pairs.append((target, bracket.upper))
        ratios.append(bracket.upper / target if target > 0 else 0.0)
    return _aggregate(
        "doob-envelope-p2",
        pairs,
        1.0,
        max_constant=float(np.max(ratios)),
        note="upper bound of sup_n E_n(f*f) must dominate ||f||_2^2; c_p reported only",
    )


def run_verify(config: RunConfig):
    """Run the asserted suite; returns (reports sorted by name, all_passed)."""
    reports = []
    reports.append(_calderon_section(config))
    reports.append(_parseval_section(config))
    reports.append(_rademacher_section(config))
    reports.extend(_fefferman_section(config))
    reports.append(_hp_lpmo_section(config))
    reports.append(_holder_section(config))
    reports.extend(_stein_section(config))
    reports.append(_operator_lemma_section(config))
    reports.extend(_sign_flip_section(config))
    reports.extend(_psi_phi_section(config))
    reports.extend(_bg_section(config))
    reports.append(_bmo_equivalence_section(config))
    reports.append(_maximal_section(config))
    reports.append(_lpmo_bmo_section(config))
    reports.append(_doob_section(config))
    reports.sort(key=lambda r: r.name)
    all_passed = all(r.passed for r in reports if r.asserted)
    return reports, all_passed
