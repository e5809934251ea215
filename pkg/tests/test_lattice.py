"""Short vector enumeration against plain box search."""

import random
from fractions import Fraction

import pytest

from hmfdb.lattice import NotPositiveDefinite, count_at_targets, short_vectors


def random_gram(rng, n):
    """Diagonally dominant symmetric matrix, so positive definite with
    smallest eigenvalue at least 1; then Q(v) >= |v|^2 and a small box
    provably contains every vector below the target."""
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            g[i][j] = g[j][i] = rng.randint(-2, 2)
    for i in range(n):
        g[i][i] = sum(abs(g[i][j]) for j in range(n) if j != i) \
            + rng.randint(1, 5)
    return g


def box_vectors(gram, target, radius):
    n = len(gram)
    out = set()

    def value(v):
        return sum(gram[i][j] * v[i] * v[j] for i in range(n) for j in range(n))

    def walk(prefix):
        if len(prefix) == n:
            if any(prefix) and value(prefix) == target:
                out.add(tuple(prefix))
            return
        for c in range(-radius, radius + 1):
            walk(prefix + [c])

    walk([])
    return out


def canonical(vs):
    """One representative per antipodal pair, as a set."""
    seen = set()
    for v in vs:
        v = tuple(v)
        seen.add(min(v, tuple(-x for x in v)))
    return seen


@pytest.mark.parametrize("n", [2, 3, 4])
def test_short_vectors_match_box_enumeration(n):
    rng = random.Random(100 + n)
    for _ in range(8):
        gram = random_gram(rng, n)
        target = rng.randint(1, 8)
        found = short_vectors(gram, target)
        brute = box_vectors(gram, target, radius=3)
        assert canonical(found) == canonical(brute)


def test_short_vectors_hit_the_target_exactly():
    gram = [[2, 1], [1, 2]]
    vs = short_vectors(gram, 6)
    assert vs and all(any(v) for v in vs)
    for v in vs:
        q = sum(gram[i][j] * v[i] * v[j] for i in range(2) for j in range(2))
        assert q == 6


def test_indefinite_gram_is_rejected():
    with pytest.raises(NotPositiveDefinite):
        short_vectors([[1, 0], [0, -1]], 4)


def test_count_at_targets_z4():
    # representation numbers of x1^2+..+x4^2 at 0,1,2,3,4 are 1,8,24,32,24
    gram = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert tuple(count_at_targets(gram, [0, 1, 2, 3, 4])) == (1, 8, 24, 32, 24)


def test_count_handles_fraction_entries():
    gram = [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]
    # value 1 is taken exactly by the four vectors (+-1, +-1)
    assert tuple(count_at_targets(gram, [1])) == (4,)
