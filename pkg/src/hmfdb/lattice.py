"""Exact enumeration of short vectors of positive definite quadratic forms.

The enumeration is a Fincke-Pohst descent driven by an exact LDL^T
decomposition over the rationals.  All interval endpoints are decided by
integer comparisons against squared bounds, so the vector lists are complete:
downstream code hard-asserts on their cardinalities.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class NotPositiveDefinite(ValueError):
    pass


def _ldl(gram):
    """G = L D L^T with unit lower triangular L; raises unless G is positive definite."""
    n = len(gram)
    L = [[Fraction(0)] * n for _ in range(n)]
    D = [Fraction(0)] * n
    for i in range(n):
        L[i][i] = Fraction(1)
        s = Fraction(gram[i][i])
        for k in range(i):
            s -= L[i][k] * L[i][k] * D[k]
        if s <= 0:
            raise NotPositiveDefinite("pivot %d is %s" % (i, s))
        D[i] = s
        for j in range(i + 1, n):
            t = Fraction(gram[j][i])
            for k in range(i):
                t -= L[j][k] * L[i][k] * D[k]
            L[j][i] = t / D[i]
    return L, D


def _floor_minus_c_plus_sqrt(c, q):
    """floor(-c + sqrt(q)) for rationals c and q >= 0."""
    base = -c
    k = int(base.numerator // base.denominator) if isinstance(base, Fraction) else int(base)
    k += isqrt(int(q)) + 2 if q >= 1 else 2
    # walk down until k <= -c + sqrt(q), i.e. (k + c) <= sqrt(q)
    while True:
        r = k + c
        if r <= 0 or r * r <= q:
            return k
        k -= 1


def short_vectors(gram, target):
    """All nonzero integer vectors v with v^T G v == target, one per {v, -v} pair.

    Vectors are returned as tuples, sign-normalized so the first nonzero
    coordinate is positive, sorted lexicographically.
    """
    n = len(gram)
    if n == 0:
        return []
    target = Fraction(target)
    if target < 0:
        return []
    G = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(n):
            if G[i][j] != G[j][i]:
                raise ValueError("gram matrix must be symmetric")
    L, D = _ldl(G)
    found = set()
    x = [0] * n

    def descend(i, rem):
        if i < 0:
            if rem == 0:
                v = tuple(x)
                if any(v):
                    neg = tuple(-t for t in v)
                    found.add(min(v, neg, key=_sign_key))
            return
        c = Fraction(0)
        for j in range(i + 1, n):
            if x[j]:
                c += L[j][i] * x[j]
        q = rem / D[i]
        hi = _floor_minus_c_plus_sqrt(c, q)
        lo = -_floor_minus_c_plus_sqrt(-c, q)
        for xi in range(lo, hi + 1):
            y = xi + c
            r2 = rem - D[i] * y * y
            if r2 >= 0:
                x[i] = xi
                descend(i - 1, r2)
        x[i] = 0

    descend(n - 1, target)
    return sorted(found)


def _sign_key(v):
    for t in v:
        if t > 0:
            return (0, v)
        if t < 0:
            return (1, v)
    return (2, v)


def count_at_targets(gram, targets):
    """Vector counts (including both signs) at each listed target value."""
    out = []
    for t in targets:
        if t == 0:
            out.append(1)
        else:
            out.append(2 * len(short_vectors(gram, t)))
    return out


class GramLattice:
    """An integer lattice carried by an explicit positive definite Gram matrix."""

    def __init__(self, gram):
        self.gram = [[Fraction(x) for x in row] for row in gram]
        self.rank = len(gram)
        _ldl(self.gram)  # positive-definiteness certificate

    def value(self, v):
        G = self.gram
        n = self.rank
        s = Fraction(0)
        for i in range(n):
            if v[i]:
                row = G[i]
                for j in range(n):
                    if v[j]:
                        s += row[j] * v[i] * v[j]
        return s

    def short_vectors(self, target):
        return short_vectors(self.gram, target)

    def successive_targets(self, start=1, limit=64):
        """First target value at or above start with at least one vector."""
        t = start
        while t <= limit:
            vs = short_vectors(self.gram, t)
            if vs:
                return t, vs
            t += 1
        raise ValueError("no lattice vector with form value in [%s, %s]" % (start, limit))
