"""Shared fixtures: the generator zoo and structured random objects."""

import numpy as np
import pytest

from qmsemi.algebra import commutant
from qmsemi.models import dephasing_generator, depolarizing_generator, random_lindblad


def make_zoo():
    """Dephasing, depolarizing and random few-jump models at desk scale."""
    rng = np.random.default_rng(2024)
    return {
        "dephasing_m2": dephasing_generator(2),
        "depolarizing_m2": depolarizing_generator(2),
        "depolarizing_m3": depolarizing_generator(3),
        "random_2jump_m3": random_lindblad(3, 2, rng, scale=0.6),
        "random_2jump_m4": random_lindblad(4, 2, rng, scale=0.5),
    }


@pytest.fixture(scope="session")
def zoo():
    return make_zoo()


def random_degenerate_commutant(m, rng):
    """Commutant of a Hermitian with repeated eigenvalues: a random block algebra."""
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, _ = np.linalg.qr(g)
    n_blocks = int(rng.integers(2, m)) if m > 2 else 2
    labels = np.sort(rng.integers(0, n_blocks, size=m))
    labels[0] = 0  # keep at least one block non-empty
    h = q @ np.diag(labels.astype(complex)) @ q.conj().T
    return commutant([(h + h.conj().T) / 2], m)


def random_connected_weights(v, rng, complete=True):
    """Symmetric weight matrix of a connected graph on v vertices."""
    w = np.zeros((v, v))
    order = rng.permutation(v)
    for i in range(1, v):  # random spanning tree keeps it connected
        a, b = order[i], order[rng.integers(0, i)]
        w[a, b] = w[b, a] = rng.uniform(0.2, 2.0)
    if complete:
        for a in range(v):
            for b in range(a + 1, v):
                if w[a, b] == 0.0:
                    w[a, b] = w[b, a] = rng.uniform(0.2, 2.0)
    return w
