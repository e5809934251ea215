"""Ideal arithmetic: factorization, labels, residue rings, generators.

The splitting behaviour of rational primes is cross-checked against the
Legendre symbol of the field discriminant, which is computed here from
scratch rather than taken from the ideal layer.
"""

import random

import pytest

from hmfdb.field import make_field
from hmfdb.ideals import (Ideal, ResidueRing, conjugate_prime, divisor_ideals,
                          factor_ideal, factor_rational_prime, ideal_power,
                          ideals_of_norm, primes_of_norm_up_to,
                          totally_positive_generator)


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


RATIONAL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


@pytest.mark.parametrize("d", [5, 8, 13, 17])
def test_splitting_matches_the_discriminant_symbol(d):
    F = make_field(d)
    for p in RATIONAL_PRIMES:
        fac = factor_rational_prime(F, p)
        if d % p == 0:
            sym = 0
        elif p == 2:
            # 2 is unramified here exactly for d = 1 mod 8 split, 5 mod 8 inert
            sym = 1 if d % 8 == 1 else -1
        else:
            sym = legendre(d, p)
        if sym == 1:
            assert [(P.res_degree, e) for P, e in fac] == [(1, 1), (1, 1)]
            assert fac[0][0] != fac[1][0]
        elif sym == -1:
            assert [(P.res_degree, P.ram_index, e) for P, e in fac] == [(2, 1, 1)]
        else:
            assert [(P.ram_index, e) for P, e in fac] == [(2, 2)]
        prod = Ideal.unit_ideal(F)
        for P, e in fac:
            prod = prod * ideal_power(P, e)
        assert prod == Ideal.principal(F, F.element(p))


def test_prime_labels_and_sort():
    F = make_field(5)
    labs = [P.prime_label() for P in primes_of_norm_up_to(F, 11)]
    assert labs == ["4", "5", "9", "11.4", "11.8"]
    P11a = primes_of_norm_up_to(F, 11)[3]
    assert (P11a.p, P11a.res_degree, P11a.ram_index) == (11, 1, 1)
    assert P11a.is_split()
    assert conjugate_prime(P11a).prime_label() == "11.8"
    assert conjugate_prime(conjugate_prime(P11a)) == P11a


def test_norm_is_multiplicative():
    F = make_field(8)
    rng = random.Random(5)
    ideals = []
    for n in range(2, 12):
        ideals.extend(ideals_of_norm(F, n))
    for _ in range(20):
        A, B = rng.choice(ideals), rng.choice(ideals)
        assert (A * B).norm() == A.norm() * B.norm()


def test_ideal_counts_from_splitting():
    """Counts of integral ideals per norm, frozen from the zeta expansion."""
    F5 = make_field(5)
    assert [len(ideals_of_norm(F5, n)) for n in range(1, 21)] == \
        [1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 2, 0, 0, 0, 0, 1, 0, 0, 2, 1]
    F8 = make_field(8)
    assert [len(ideals_of_norm(F8, n)) for n in range(1, 13)] == \
        [1, 1, 0, 1, 0, 0, 2, 1, 1, 0, 0, 0]


def test_label_roundtrip_and_sort_key():
    F = make_field(13)
    for n in range(1, 30):
        for I in ideals_of_norm(F, n):
            lab = I.label()
            assert int(lab.split(".")[0]) == I.norm()
            assert I.sort_key()[0] == I.norm()
    pair = ideals_of_norm(make_field(5), 11)
    assert sorted(I.label() for I in pair) == ["11.1.4.11", "11.1.8.11"]


def test_containment_reduce_and_membership():
    F = make_field(5)
    N = ideals_of_norm(F, 11)[0]
    g = totally_positive_generator(N)
    assert N.contains(g)
    assert N.contains(g * F.omega())
    assert not N.contains(F.one())
    r = N.reduce(F.element(13, 7))
    assert N.contains(F.element(13, 7) - r)


def test_sum_product_intersection_identity():
    # (A + B)(A intersect B) = A B in any Dedekind ring
    F = make_field(8)
    rng = random.Random(23)
    pool = []
    for n in range(2, 10):
        pool.extend(ideals_of_norm(F, n))
    for _ in range(15):
        A, B = rng.choice(pool), rng.choice(pool)
        assert (A + B) * A.intersect(B) == A * B


def test_valuation_and_exact_division():
    F = make_field(5)
    P2 = factor_rational_prime(F, 2)[0][0]
    P5 = factor_rational_prime(F, 5)[0][0]
    N = ideal_power(P2, 2) * P5
    assert N.valuation(P2) == 2
    assert N.valuation(P5) == 1
    assert N.valuation(factor_rational_prime(F, 3)[0][0]) == 0
    M = N.divide_exact(P2)
    assert M * P2 == N
    assert N.is_coprime(factor_rational_prime(F, 11)[0][0])
    assert not N.is_coprime(P5)


def test_factor_ideal_recombines():
    F = make_field(17)
    for n in range(2, 40):
        for N in ideals_of_norm(F, n):
            prod = Ideal.unit_ideal(F)
            for P, e in factor_ideal(N):
                prod = prod * ideal_power(P, e)
            assert prod == N


def test_divisor_ideals_count():
    F = make_field(5)
    N = ideals_of_norm(F, 20)[0]  # (2) * (sqrt 5)
    exps = [e for _, e in factor_ideal(N)]
    want = 1
    for e in exps:
        want *= e + 1
    assert len(divisor_ideals(N)) == want
    assert any(D == Ideal.unit_ideal(F) for D in divisor_ideals(N))
    assert any(D == N for D in divisor_ideals(N))


def test_residue_ring():
    F = make_field(5)
    N = ideals_of_norm(F, 9)[0]
    R = ResidueRing(N)
    elems = R.elements()
    assert len(elems) == 9
    # reduce is a retraction onto the transversal
    for x in elems:
        assert R.reduce(x) == x
    w = F.omega()
    for x in elems:
        if R.is_unit(x):
            inv = R.inverse(x)
            assert R.reduce(x * inv) == R.reduce(F.one())
    assert R.reduce(w * 9) == R.reduce(F.zero())


def test_totally_positive_generator_generates():
    for d in (5, 8, 13, 17):
        F = make_field(d)
        for n in range(2, 16):
            for N in ideals_of_norm(F, n):
                g = totally_positive_generator(N)
                assert g.is_totally_positive()
                assert Ideal.principal(F, g) == N


def test_ideal_constructor_rejects_non_module():
    F = make_field(5)
    with pytest.raises(Exception):
        Ideal(F, [[1, 0], [0, 3]])  # not closed under multiplication by omega
