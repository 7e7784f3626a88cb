import numpy as np
import pytest

from opval.dyadic import StepFunction
from opval.rng import SplitMix64


def haar_step(depth=4):
    """The scalar Haar function h on [0, 1) as a depth-``depth`` step function."""
    n = 1 << depth
    cells = np.concatenate(
        [np.ones((n // 2, 1, 1)), -np.ones((n // 2, 1, 1))]
    ).astype(complex)
    return StepFunction(1, depth, 0, 1, cells)


def random_step(seed, dim, depth, lo=0, hi=1, hermitian=False):
    rng = SplitMix64(seed)
    n = (hi - lo) * (1 << depth)
    cells = rng.complex_normal((n, dim, dim))
    if hermitian:
        cells = 0.5 * (cells + np.conj(np.swapaxes(cells, -1, -2)))
    return StepFunction(dim, depth, lo, hi, cells)


@pytest.fixture
def haar_h():
    return haar_step()
