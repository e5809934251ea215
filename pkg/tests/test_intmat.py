"""Integer matrix layer checked against brute-force linear algebra."""

import random
from fractions import Fraction

import pytest

from hmfdb import intmat


def brute_det(a):
    n = len(a)
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        total += (-1) ** j * a[0][j] * brute_det(minor)
    return total


def random_matrix(rng, n, m, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]


def test_det_matches_cofactor_expansion():
    rng = random.Random(42)
    for _ in range(25):
        n = rng.randint(1, 5)
        a = random_matrix(rng, n, n)
        assert intmat.det(a) == brute_det(a)


def test_hnf_is_idempotent_and_preserves_the_lattice():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 4)
        cols = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n + 2)]
        h = intmat.hnf_basis(cols)
        assert intmat.hnf_basis(h) == h
        for c in cols:
            assert intmat.lattice_contains(h, c)


def test_kernel_int():
    rng = random.Random(3)
    for _ in range(20):
        n, m = rng.randint(1, 4), rng.randint(1, 5)
        a = random_matrix(rng, n, m)
        ker = intmat.kernel_int(a)
        for v in ker:
            assert all(sum(a[i][j] * v[j] for j in range(m)) == 0
                       for i in range(n))
        # rank-nullity over Q
        assert len(ker) == m - len(_rref_rank_probe(a))


def _rref_rank_probe(a):
    mat = [[Fraction(x) for x in row] for row in a]
    rows, cols = len(mat), len(mat[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    return pivots


def test_solve_int_roundtrip():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(1, 4)
        a = random_matrix(rng, n, n)
        if intmat.det(a) == 0:
            continue
        x = [rng.randint(-5, 5) for _ in range(n)]
        b = [sum(a[i][j] * x[j] for j in range(n)) for i in range(n)]
        assert intmat.solve_int(a, b) == x


def test_lattice_index_is_determinant_ratio():
    sup = [[2, 0], [1, 3]]
    sub = [[4, 0], [2, 6]]
    assert intmat.lattice_index(sup, sub) == 4


def test_lattice_index_rejects_non_sublattice():
    with pytest.raises(ValueError):
        intmat.lattice_index([[2, 0], [0, 2]], [[3, 0], [0, 1]])


def test_lattice_sum_and_intersection():
    rng = random.Random(19)
    for _ in range(15):
        n = 3
        a = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        b = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        if intmat.det(intmat.from_columns(a)) == 0:
            continue
        if intmat.det(intmat.from_columns(b)) == 0:
            continue
        s = intmat.lattice_sum(a, b)
        i = intmat.lattice_intersection(a, b)
        for c in a + b:
            assert intmat.lattice_contains(s, c)
        for c in i:
            assert intmat.lattice_contains(intmat.hnf_basis(a), c)
            assert intmat.lattice_contains(intmat.hnf_basis(b), c)
        # index multiplicativity: [S:A][S:B] = [S:I] for the sum S
        ia = intmat.lattice_index(s, a)
        ib = intmat.lattice_index(s, b)
        ii = intmat.lattice_index(s, i)
        assert ia * ib == ii


def test_preimage_lattice():
    # vectors v with A v = 0 modulo 4 in each row, intersected back into Z^2
    a = [[2, 0], [0, 1]]
    pre = intmat.preimage_lattice(a, [[4, 0], [0, 4]], 2)
    for v in ([2, 0], [0, 4]):
        assert intmat.lattice_contains(pre, v)
    assert not intmat.lattice_contains(pre, [1, 0])
