import numpy as np
import pytest

from infodist import Garbling, ZeroSumGame, validate_structure


def random_structure(rng, n_k, n_c, n_d, zeros=0.0):
    probs = rng.random((n_k, n_c, n_d))
    if zeros > 0:
        mask = rng.random((n_k, n_c, n_d)) < zeros
        probs[mask] = 0.0
        if probs.sum() <= 0:
            probs[0, 0, 0] = 1.0
    return validate_structure(probs / probs.sum())


def random_ci_structure(rng, n_k, n_c, n_d):
    """Signals conditionally independent given the state."""
    pk = rng.random(n_k) + 0.1
    pk /= pk.sum()
    c_given_k = rng.random((n_k, n_c)) + 0.05
    c_given_k /= c_given_k.sum(axis=1, keepdims=True)
    d_given_k = rng.random((n_k, n_d)) + 0.05
    d_given_k /= d_given_k.sum(axis=1, keepdims=True)
    probs = np.einsum("k,kc,kd->kcd", pk, c_given_k, d_given_k)
    return validate_structure(probs)


def random_game(rng, n_k, n_i, n_j):
    return ZeroSumGame(rng.uniform(-1.0, 1.0, (n_k, n_i, n_j)))


def random_garbling(rng, source, target):
    rows = rng.random((source, target)) + 0.01
    return Garbling(rows / rows.sum(axis=1, keepdims=True))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
