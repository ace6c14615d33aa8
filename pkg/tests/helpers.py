"""Shared random generators for the test corpora (all explicitly seeded)."""

from fractions import Fraction

import numpy as np

from conemix import Digraph, from_kraus, from_stochastic


def random_stochastic_exact(rng, d):
    """Column-stochastic matrix with a random zero pattern, rational entries.

    Every column keeps at least one nonzero entry; weights are small random
    integers normalized per column.
    """
    cols = []
    for _ in range(d):
        support = rng.random(d) < rng.uniform(0.3, 0.9)
        if not support.any():
            support[rng.integers(d)] = True
        weights = [int(rng.integers(1, 9)) if s else 0 for s in support]
        total = sum(weights)
        cols.append([Fraction(w, total) for w in weights])
    return [list(row) for row in zip(*cols)]


def to_float_rows(exact):
    return np.array([[float(v) for v in row] for row in exact])


def random_stochastic_map(rng, d, exact=True):
    m = random_stochastic_exact(rng, d)
    return from_stochastic(m if exact else to_float_rows(m))


def random_dense_stochastic(rng, d, floor=0.05):
    """Strictly positive column-stochastic matrix (hence primitive)."""
    m = rng.random((d, d)) + floor
    return from_stochastic(m / m.sum(axis=0))


def random_strongly_connected_digraph(rng, d):
    """A random cycle through all vertices plus random chords."""
    order = rng.permutation(d)
    edges = {(int(order[i]), int(order[(i + 1) % d])) for i in range(d)}
    extra = rng.uniform(0.0, 0.4)
    for u in range(d):
        for v in range(d):
            if rng.random() < extra:
                edges.add((u, v))
    succ = tuple(tuple(sorted(v for (a, v) in edges if a == u))
                 for u in range(d))
    return Digraph(d, succ)


def random_kraus_channel(rng, h, n_ops=None):
    """Trace-preserving channel from blocks of a Haar-ish random isometry."""
    n_ops = n_ops or h * h
    g = rng.standard_normal((n_ops * h, h)) + 1j * rng.standard_normal(
        (n_ops * h, h))
    q, _ = np.linalg.qr(g)
    return from_kraus([q[i * h:(i + 1) * h] for i in range(n_ops)])


def random_hermitian(rng, h):
    g = rng.standard_normal((h, h)) + 1j * rng.standard_normal((h, h))
    return (g + g.conj().T) / 2


def random_density(rng, h):
    g = rng.standard_normal((h, h)) + 1j * rng.standard_normal((h, h))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
