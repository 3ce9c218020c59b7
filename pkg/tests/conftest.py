import numpy as np
import pytest

from qchi2 import fop
from qchi2.harness import random_density, trial_rng


@pytest.fixture
def rng():
    return np.random.default_rng(20110215)


def random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


def density_pairs(n, count, seed, floor=1e-3):
    out = []
    for i in range(count):
        r = trial_rng(seed, i)
        out.append((random_density(n, r), random_density(n, r, floor)))
    return out


BUILTINS = fop.builtin_functions()
BUILTIN_IDS = [f.spec for f in BUILTINS]
