import numpy as np
import pytest

from opval.dyadic import (
    DyadicInterval,
    StepFunction,
    conditional_expectation,
    lp_norm,
    remove_unit_means,
)
from opval.errors import InvalidInput, InvalidParameter
from opval.wavelets import (
    HAAR,
    CoefficientField,
    TentField,
    analyze,
    embed_phi,
    project_psi,
    synthesize,
    wavelet_eval,
)

from conftest import haar_step, random_step


# ---------------------------------------------------------------------------
# wavelet_eval
# ---------------------------------------------------------------------------


def test_haar_eval_unit_interval():
    i = DyadicInterval(0, 0)
    assert wavelet_eval(HAAR, i, 0.25) == 1.0
    assert wavelet_eval(HAAR, i, 0.75) == -1.0
    assert wavelet_eval(HAAR, i, 1.5) == 0.0


def test_haar_eval_scaling():
    i = DyadicInterval(1, 0)  # [0, 1/2)
    assert wavelet_eval(HAAR, i, 0.1) == pytest.approx(np.sqrt(2.0))
    assert wavelet_eval(HAAR, i, 0.3) == pytest.approx(-np.sqrt(2.0))


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def test_analyze_constant_has_zero_coefficients():
    f = StepFunction.constant(np.array([[2.0, 1j], [-1j, 1.0]]), 4)
    c = analyze(f)
    assert max(np.max(np.abs(m)) for m in c.entries.values()) <= 1e-14
    assert np.allclose(c.scaling[0], f.cells[0])


def test_analyze_haar_is_orthonormal_probe(haar_h):
    c = analyze(haar_h)
    root = DyadicInterval(0, 0)
    assert complex(c.entries[root][0, 0]) == pytest.approx(1.0, abs=1e-14)
    others = [m for i, m in c.entries.items() if i != root]
    assert max(np.max(np.abs(m)) for m in others) <= 1e-14


def test_analyze_matches_martingale_differences():
    # per-level synthesis equals E_{n+1} f - E_n f (the martingale parallel)
    f = random_step(4, 2, 5)
    c = analyze(f)
    for n in range(0, 5):
        level_entries = {i: m for i, m in c.entries.items() if i.level == n}
        sub = CoefficientField(2, 5, 0, 1, n, n, level_entries, None)
        level_sum = synthesize(sub)
        diff = conditional_expectation(f, n + 1) - conditional_expectation(f, n)
        assert (level_sum - diff).max_abs() <= 1e-12


def test_analyze_linearity_and_adjoint():
    f = random_step(5, 2, 4)
    g = random_step(6, 2, 4)
    cf, cg = analyze(f), analyze(g)
    combo = analyze(2.0 * f + g)
    for i in combo.entries:
        assert np.allclose(combo.entries[i], 2.0 * cf.entries[i] + cg.entries[i], atol=1e-13)
    cstar = analyze(f.adjoint())
    for i in cstar.entries:
        assert np.allclose(cstar.entries[i], np.conj(cf.entries[i].T), atol=1e-14)


def test_analyze_level_cap():
    f = random_step(7, 1, 3)
    with pytest.raises(InvalidParameter):
        analyze(f, level_max=5)


def test_parseval_identity():
    for seed in range(8):
        f = random_step(seed, 3, 5, hi=2)
        c = analyze(f)
        energy = c.hs_energy()
        direct = lp_norm(remove_unit_means(f), 2.0) ** 2
        assert energy == pytest.approx(direct, abs=1e-10)


# ---------------------------------------------------------------------------
# synthesize
# ---------------------------------------------------------------------------


def test_synthesize_empty_field_is_zero():
    c = CoefficientField(2, 3, 0, 1, 0, 2, {}, None)
    assert synthesize(c).max_abs() == 0.0


def test_haar_roundtrip_exact():
    f = random_step(11, 2, 6)
    assert (synthesize(analyze(f)) - f).max_abs() <= 1e-12


def test_haar_roundtrip_wide_window():
    f = random_step(12, 3, 4, lo=-1, hi=2)
    assert (synthesize(analyze(f)) - f).max_abs() <= 1e-12


def test_synthesize_rejects_unrepresentable_level():
    bad = CoefficientField(
        1, 2, 0, 1, 2, 2, {DyadicInterval(2, 0): np.array([[1.0]])}, None
    )
    with pytest.raises(InvalidParameter):
        synthesize(bad)


# ---------------------------------------------------------------------------
# Phi / Psi
# ---------------------------------------------------------------------------


def test_embed_phi_single_coefficient():
    c = CoefficientField(
        1, 3, 0, 1, 0, 2, {DyadicInterval(0, 0): np.array([[2.0 + 1j]])}, None
    )
    g = embed_phi(c)
    entry = g.entries[DyadicInterval(0, 0)]
    assert np.allclose(entry.cells, (2.0 + 1j) * np.ones((8, 1, 1)))


def test_embed_phi_zero_field():
    c = CoefficientField(2, 3, 0, 1, 0, 2, {}, None)
    assert embed_phi(c).entries == {}


def test_psi_phi_identity_on_mean_zero():
    f = remove_unit_means(random_step(13, 2, 5, hi=2))
    g = embed_phi(analyze(f, with_scaling=False))
    assert (project_psi(g) - f).max_abs() <= 1e-12


def test_psi_kills_zero_average_entries():
    i = DyadicInterval(0, 0)
    cells = np.zeros((8, 1, 1), dtype=complex)
    cells[0:4] = 1.0
    cells[4:8] = -1.0  # zero average over I
    g = TentField(1, 3, 0, 1, {i: StepFunction(1, 3, 0, 1, cells)})
    assert project_psi(g).max_abs() <= 1e-15


def test_tent_field_support_violation():
    i = DyadicInterval(1, 0)  # [0, 1/2)
    cells = np.ones((8, 1, 1), dtype=complex)  # spills over all of [0,1)
    with pytest.raises(InvalidInput):
        TentField(1, 3, 0, 1, {i: StepFunction(1, 3, 0, 1, cells)})
