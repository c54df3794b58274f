import os
import subprocess
import sys

import numpy as np
import pytest

from bribery import kernels
from oracles import p_wins

KINDS = list(kernels.RULE_CODES)


def random_batch(rng, B, n, m):
    pos = np.stack([np.stack([rng.permutation(m) for _ in range(n)]) for _ in range(B)])
    ell = rng.integers(0, m + 1, size=(B, n))
    return pos, ell


@pytest.mark.parametrize("kind", KINDS)
def test_numba_and_numpy_agree_with_definition(kind):
    rng = np.random.default_rng(11)
    for _ in range(40):
        n, m = int(rng.integers(1, 7)), int(rng.integers(1, 6))
        pos, ell = random_batch(rng, 25, n, m)
        target = int(rng.integers(m))
        k = int(rng.integers(1, m + 1))
        code = kernels.RULE_CODES[kind]
        fast = kernels.designated_wins(pos, ell, code, k, target, use_numba=True)
        slow = kernels.designated_wins(pos, ell, code, k, target, use_numba=False)
        assert np.array_equal(fast, slow)
        for b in range(pos.shape[0]):
            prefs = [tuple(np.argsort(pos[b, i])) for i in range(n)]
            want = p_wins(prefs, list(ell[b]), target, kind, k)
            assert bool(fast[b]) == want


def test_shared_position_table():
    rng = np.random.default_rng(3)
    pos, ell = random_batch(rng, 1, 5, 4)
    ells = rng.integers(0, 5, size=(30, 5))
    shared = kernels.designated_wins(pos, ells, kernels.FALLBACK, 0, 1)
    full = kernels.designated_wins(np.repeat(pos, 30, axis=0), ells, kernels.FALLBACK, 0, 1)
    assert np.array_equal(shared, full)
    numpy_path = kernels.designated_wins(pos, ells, kernels.FALLBACK, 0, 1, use_numba=False)
    assert np.array_equal(shared, numpy_path)


def test_shape_validation():
    with pytest.raises(ValueError):
        kernels.designated_wins(np.zeros((2, 3)), np.zeros((2, 3)), 0, 1, 0)


def test_enumeration_guard():
    with pytest.raises(kernels.EnumerationLimitError):
        kernels.enumerate_minimum([10] * 8, np.zeros((8, 10)), lambda d: np.ones(len(d), bool),
                                  limit=10 ** 6)


def test_enumerate_minimum_prefers_first_cheapest():
    cost = np.array([[0, 1, 2], [0, 1, 2]], dtype=float)
    best, digits = kernels.enumerate_minimum([3, 3], cost, lambda d: d.sum(axis=1) >= 2)
    assert best == 2 and digits.tolist() == [0, 2]


def test_single_digit_coordinates_are_skipped():
    blocks = list(kernels.mixed_radix_blocks([1, 3, 1, 2]))
    digits = np.concatenate(blocks)
    assert digits.shape == (6, 4)
    assert (digits[:, [0, 2]] == 0).all()
    assert sorted(map(tuple, digits[:, [1, 3]].tolist())) == [(a, b) for a in range(3) for b in range(2)]


def test_env_flag_disables_numba():
    code = ("import bribery._accel as a, bribery.kernels as k, numpy as np;"
            "print(a.USE_NUMBA);"
            "print(k.designated_wins(np.array([[[0,1],[1,0]]]), np.array([[1,1]]), 3, 0, 0)[0])")
    env = dict(os.environ, BRIBERY_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["False", "True"]
