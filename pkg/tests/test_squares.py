import numpy as np
import pytest

from opval.dyadic import DyadicInterval, StepFunction, lp_norm, remove_unit_means
from opval.errors import InvalidParameter
from opval.squares import square_fn_col, square_fn_row, tent_norm, truncated_square_fn
from opval.wavelets import CoefficientField, analyze, embed_phi
from opval.norms import hardy_col_norm

from conftest import haar_step, random_step


def _field(entries, dim=1, depth=3, level_min=0, level_max=2):
    return CoefficientField(dim, depth, 0, 1, level_min, level_max, entries, None)


def test_square_fn_zero():
    prof = square_fn_col(_field({}))
    assert prof.square.max_abs() == 0.0
    assert prof.root.max_abs() == 0.0


def test_square_fn_single_unit_coefficient():
    c = _field({DyadicInterval(0, 0): np.array([[1.0 + 0j]])})
    prof = square_fn_col(c)
    assert np.allclose(prof.root.cells, np.ones((8, 1, 1)))


def test_square_root_squares_back():
    f = random_step(21, 3, 4)
    prof = square_fn_col(analyze(f, with_scaling=False))
    recomposed = prof.root.cells @ prof.root.cells
    assert np.max(np.abs(recomposed - prof.square.cells)) <= 1e-10


def test_square_fn_diagonal_componentwise():
    f = random_step(22, 2, 4)
    cells = np.zeros_like(np.array(f.cells))
    cells[:, 0, 0] = f.cells[:, 0, 0]
    cells[:, 1, 1] = f.cells[:, 1, 1]
    fd = StepFunction(2, 4, 0, 1, cells)
    prof = square_fn_col(analyze(fd, with_scaling=False)).square
    for comp in range(2):
        scalar = StepFunction(1, 4, 0, 1, cells[:, comp : comp + 1, comp : comp + 1])
        sprof = square_fn_col(analyze(scalar, with_scaling=False)).square
        assert np.max(np.abs(prof.cells[:, comp, comp] - sprof.cells[:, 0, 0])) <= 1e-12
        assert np.max(np.abs(prof.cells[:, comp, 1 - comp])) <= 1e-12


def test_square_fn_row_nilpotent_hand_case():
    a = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    c = CoefficientField(2, 3, 0, 1, 0, 2, {DyadicInterval(0, 0): a}, None)
    col = square_fn_col(c).square
    row = square_fn_row(c).square
    assert np.allclose(col.cells[0], np.diag([0.0, 1.0]))  # a* a
    assert np.allclose(row.cells[0], np.diag([1.0, 0.0]))  # a a*
    herm = CoefficientField(
        2, 3, 0, 1, 0, 2, {DyadicInterval(0, 0): np.array([[1.0, 2j], [-2j, 0.5]])}, None
    )
    assert np.allclose(square_fn_col(herm).square.cells, square_fn_row(herm).square.cells)


def test_truncations_monotone_and_telescoping():
    f = random_step(23, 2, 5)
    c = analyze(f, with_scaling=False)
    profiles = {n: truncated_square_fn(c, n) for n in range(-1, 5)}
    assert profiles[-1].square.max_abs() == 0.0
    full = square_fn_col(c).square
    assert (profiles[4].square - full).max_abs() <= 1e-14
    total = 0.0
    for n in range(0, 5):
        gap = profiles[n].square.cells - profiles[n - 1].square.cells
        w = np.linalg.eigvalsh(0.5 * (gap + np.conj(np.swapaxes(gap, -1, -2))))
        assert w.min() >= -1e-10  # PSD monotone
        total += float(np.real(np.trace(gap.sum(axis=0)))) * profiles[n].square.cell_width
    expect = float(np.real(np.trace(full.cells.sum(axis=0)))) * full.cell_width
    assert total == pytest.approx(expect, abs=1e-10)
    with pytest.raises(InvalidParameter):
        truncated_square_fn(c, 9)


def test_square_fn_sign_invariance_exact():
    f = random_step(24, 2, 4)
    c = analyze(f, with_scaling=False)
    flipped = c.map_entries(lambda i, m: -m if (i.offset + i.level) % 2 else m)
    a = square_fn_col(c).square
    b = square_fn_col(flipped).square
    assert np.array_equal(a.cells, b.cells)  # |eps a|^2 == |a|^2 exactly


def test_square_l2_matches_mean_removed():
    for seed in range(6):
        f = random_step(seed, 2, 5, hi=2)
        s = square_fn_col(analyze(f, with_scaling=False)).root
        assert lp_norm(s, 2.0) == pytest.approx(
            lp_norm(remove_unit_means(f), 2.0), abs=1e-10
        )


# ---------------------------------------------------------------------------
# tent norm
# ---------------------------------------------------------------------------


def test_tent_norm_zero():
    from opval.wavelets import TentField

    assert tent_norm(TentField(1, 3, 0, 1, {}), 2.0) == 0.0


def test_tent_norm_matches_hardy_on_phi_images():
    for seed in range(5):
        f = remove_unit_means(random_step(seed, 2, 4))
        g = embed_phi(analyze(f, with_scaling=False))
        for p in (1.0, 2.0, 3.0):
            assert tent_norm(g, p) == pytest.approx(hardy_col_norm(f, p), abs=1e-10)


def test_tent_norm_scalar_direct_sum_oracle():
    # d = 1, p = 2: ||(sum |g_I|^2)^(1/2)||_2^2 = sum_I int |g_I|^2
    from opval.wavelets import TentField

    rng = np.random.default_rng(5)
    depth = 3
    probe = StepFunction.zeros(1, depth, 0, 1)
    entries = {}
    total = 0.0
    for interval in (DyadicInterval(0, 0), DyadicInterval(1, 1), DyadicInterval(2, 0)):
        cells = np.zeros((8, 1, 1), dtype=complex)
        r = probe.cell_range(interval)
        block = rng.normal(size=(r[1] - r[0], 1, 1)) + 1j * rng.normal(size=(r[1] - r[0], 1, 1))
        cells[r[0] : r[1]] = block
        entries[interval] = StepFunction(1, depth, 0, 1, cells)
        total += float(np.sum(np.abs(block) ** 2)) * probe.cell_width
    g = TentField(1, depth, 0, 1, entries)
    assert tent_norm(g, 2.0) == pytest.approx(np.sqrt(total), abs=1e-12)
