"""Rational linear algebra: characteristic polynomials, factoring, splitting.

charpoly goes through a multimodular path internally, so it is checked here
against a from-scratch cofactor expansion of det(xI - A) using dense
polynomial arithmetic.
"""

import random
from fractions import Fraction

import pytest

from hmfdb import heckelinalg as hl
from hmfdb.heckelinalg import LinalgError


def poly_det(mat_of_polys):
    """Determinant of a matrix with polynomial entries, cofactor expansion."""
    n = len(mat_of_polys)
    if n == 1:
        return mat_of_polys[0][0]
    total = [Fraction(0)]
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat_of_polys[1:]]
        term = hl.poly_mul(mat_of_polys[0][j], poly_det(minor))
        if j % 2:
            term = hl.poly_scale(term, Fraction(-1))
        total = hl.poly_add(total, term)
    return total


def brute_charpoly(a):
    n = len(a)
    m = [[[Fraction(-a[i][j]), Fraction(1)] if i == j else [Fraction(-a[i][j])]
          for j in range(n)] for i in range(n)]
    f = poly_det(m)
    out = [Fraction(0)] * (n + 1)
    for i, c in enumerate(hl.poly_trim(f)):
        out[i] = c
    return out


def test_charpoly_matches_cofactor_expansion():
    rng = random.Random(17)
    for _ in range(20):
        n = rng.randint(1, 5)
        a = [[Fraction(rng.randint(-9, 9), rng.choice([1, 1, 2]))
              for _ in range(n)] for _ in range(n)]
        assert list(hl.charpoly(a)) == brute_charpoly(a)


def test_charpoly_of_companion_matrix():
    # x^3 - 2x - 5
    f = [Fraction(-5), Fraction(-2), Fraction(0), Fraction(1)]
    c = [[Fraction(0), Fraction(0), Fraction(5)],
         [Fraction(1), Fraction(0), Fraction(2)],
         [Fraction(0), Fraction(1), Fraction(0)]]
    assert list(hl.charpoly(c)) == f


def test_factor_poly_roundtrip_and_order():
    # (x - 1)(x + 1) in the deterministic order: shorter first, then coeffs
    f = [Fraction(-1), Fraction(0), Fraction(1)]
    fac = hl.factor_poly(f)
    assert [list(g) for g, e in fac] == [[Fraction(-1), Fraction(1)],
                                         [Fraction(1), Fraction(1)]]
    assert all(e == 1 for _, e in fac)
    # x^2 + 1 stays whole
    g = [Fraction(1), Fraction(0), Fraction(1)]
    assert [list(h) for h, _ in hl.factor_poly(g)] == [g]
    # multiplicity is reported
    h = hl.poly_mul([Fraction(-1), Fraction(1)], [Fraction(-1), Fraction(1)])
    assert [(list(p), e) for p, e in hl.factor_poly(h)] == \
        [([Fraction(-1), Fraction(1)], 2)]


def test_factor_poly_product_reconstructs():
    rng = random.Random(29)
    for _ in range(10):
        n = rng.randint(2, 5)
        f = [Fraction(rng.randint(-6, 6)) for _ in range(n)] + [Fraction(1)]
        prod = [Fraction(1)]
        for g, e in hl.factor_poly(f):
            for _ in range(e):
                prod = hl.poly_mul(prod, list(g))
        lead = prod[-1]
        scaled = hl.poly_scale(list(f), lead / f[-1])
        assert hl.poly_trim(prod) == hl.poly_trim(scaled)


def test_poly_divmod_and_gcd():
    f = hl.poly_mul([Fraction(1), Fraction(1)], [Fraction(-3), Fraction(1)])
    q, r = hl.poly_divmod(f, [Fraction(1), Fraction(1)])
    assert not any(r)
    assert hl.poly_trim(q) == [Fraction(-3), Fraction(1)]
    g = hl.poly_gcd(f, hl.poly_derivative(f))
    assert hl.poly_deg(g) == 0  # squarefree
    sq = hl.poly_mul(f, f)
    assert hl.poly_deg(hl.poly_gcd(sq, hl.poly_derivative(sq))) == 2


def test_kernel_and_rank():
    a = [[Fraction(1), Fraction(2), Fraction(3)],
         [Fraction(2), Fraction(4), Fraction(6)],
         [Fraction(0), Fraction(1), Fraction(0)]]
    assert hl.rank(a) == 2
    ker = hl.operator_kernel(a)
    assert len(ker) == 1
    v = ker[0]
    assert all(sum(a[i][j] * v[j] for j in range(3)) == 0 for i in range(3))


def test_restrict_operator_stable_and_unstable():
    a = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(3)]]
    basis = [(Fraction(1), Fraction(0))]
    assert hl.restrict_operator(a, basis) == [[Fraction(2)]]
    rot = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
    with pytest.raises(LinalgError):
        hl.restrict_operator(rot, basis)


def test_orthogonal_complement():
    space = [(Fraction(1), Fraction(1), Fraction(0))]
    diag = [Fraction(1), Fraction(1, 2), Fraction(1, 3)]
    comp = hl.orthogonal_complement(space, diag, 3)
    assert len(comp) == 2
    for v in comp:
        assert sum(v[t] * space[0][t] * diag[t] for t in range(3)) == 0


def test_splitting_element_and_pieces():
    t1 = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(2)]]
    t2 = [[Fraction(5), Fraction(0)], [Fraction(0), Fraction(5)]]
    t, f, combo = hl.splitting_element([t2, t1], 2)
    assert hl.poly_is_squarefree(list(f))
    pieces = hl.simple_pieces(t, f)
    assert sorted(len(sp) for _, sp in pieces) == [1, 1]
    # a non-commuting pair is refused
    rot = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
    sh = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
    with pytest.raises(LinalgError):
        hl.splitting_element([rot, sh], 2)


def test_cyclic_eigensystem_on_companion_block():
    # t = companion of x^2 - 2 acting on a 2-dimensional piece; the second
    # operator is 3t + 1 so its eigenvalue must come out as 1 + 3x
    t = [[Fraction(0), Fraction(2)], [Fraction(1), Fraction(0)]]
    op = hl.mat_add(hl.mat_scale(t, Fraction(3)), hl.identity_matrix(2))
    modpoly = [Fraction(-2), Fraction(0), Fraction(1)]
    coords = hl.cyclic_eigensystem(t, [t, op], modpoly)
    assert coords[0] == (Fraction(0), Fraction(1))
    assert coords[1] == (Fraction(1), Fraction(3))


def test_multiplication_matrix_represents_the_quotient_ring():
    modpoly = (Fraction(-1), Fraction(-1), Fraction(1))  # x^2 - x - 1
    mx = hl.multiplication_matrix(modpoly, (Fraction(0), Fraction(1)))
    # x * x = x + 1 in the quotient
    assert hl.mat_vec(mx, [Fraction(0), Fraction(1)]) == [Fraction(1), Fraction(1)]
    chi = hl.charpoly(mx)
    assert list(chi) == list(modpoly)


def test_charpoly_large_entries():
    # exercise more than one modular prime
    big = 10 ** 12
    a = [[Fraction(big), Fraction(1)], [Fraction(0), Fraction(-big)]]
    assert list(hl.charpoly(a)) == [Fraction(-big * big), Fraction(0), Fraction(1)]
