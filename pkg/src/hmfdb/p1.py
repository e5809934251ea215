"""The projective line over Z_F/N: canonical representatives, lookup, action.

Representatives are built locally at each prime power dividing N ([1:t] for
the affine points, [s:1] with s in the maximal ideal for the rest) and glued
by CRT idempotents.  They are grouped into blocks by the divisor (a) + N and
ordered by (divisor label, coordinates), which fixes the basis ordering used
everywhere downstream.
"""

from __future__ import annotations

from fractions import Fraction

from .field import FieldError
from .ideals import Ideal, ResidueRing, crt_idempotents, factor_ideal, ideal_power


class P1Error(ValueError):
    pass


def _coord_key(x, y):
    a0, a1 = x.coords()
    b0, b1 = y.coords()
    return (int(a0), int(a1), int(b0), int(b1))


class P1Index:
    """Ordered canonical representatives of P^1(Z_F/N) with O(1) lookup."""

    def __init__(self, N):
        self.level = N
        self.field = N.field
        self.factors = factor_ideal(N)
        self.ring = ResidueRing(N)
        self._local_rings = []
        self._local_primes = []
        for P, e in self.factors:
            Q = ideal_power(P, e)
            self._local_rings.append(ResidueRing(Q))
            self._local_primes.append(P)
        if len(self.factors) > 1:
            self._idem = crt_idempotents([R.modulus for R in self._local_rings])
        else:
            self._idem = [self.field.one()] * len(self.factors)
        self._build()

    # -- construction ------------------------------------------------------

    def _local_reps(self, k):
        R = self._local_rings[k]
        P = self._local_primes[k]
        one = self.field.one()
        reps = [(one, t) for t in R.elements()]
        reps.extend((s, one) for s in R.maximal_ideal_transversal(P))
        return reps

    def _glue(self, local):
        F = self.field
        a = F.zero()
        b = F.zero()
        for (la, lb), e in zip(local, self._idem):
            a = a + la * e
            b = b + lb * e
        return self.ring.reduce(a), self.ring.reduce(b)

    def _build(self):
        F = self.field
        N = self.level
        glued = []
        stack = [[]]
        for k in range(len(self.factors)):
            reps = self._local_reps(k)
            stack = [prefix + [r] for prefix in stack for r in reps]
        for local in stack:
            glued.append(self._glue(local))
        entries = []
        for a, b in glued:
            if a.is_zero():
                div = N
            else:
                div = Ideal.principal(F, a) + N
            entries.append((div.sort_key(), _coord_key(a, b), a, b, div))
        entries.sort(key=lambda t: (t[0], t[1]))
        self.reps = [(t[2], t[3]) for t in entries]
        self.size = len(self.reps)
        self._lookup = {}
        for pos, (a, b) in enumerate(self.reps):
            key = _coord_key(a, b)
            if key in self._lookup:
                raise P1Error("duplicate representative %r" % (key,))
            self._lookup[key] = pos
        self.blocks = []
        last = None
        for pos, t in enumerate(entries):
            label = t[4].label()
            if label != last:
                self.blocks.append((label, []))
                last = label
            self.blocks[-1][1].append(pos)
        expected = Fraction(N.norm())
        for P, _ in self.factors:
            expected *= Fraction(P.norm() + 1, P.norm())
        if expected != self.size:
            raise P1Error(
                "size %d does not match the point-count formula %s" % (self.size, expected))

    # -- lookup ------------------------------------------------------------

    def normalize(self, a, b):
        """Position of the canonical representative projectively equal to (a, b)."""
        F = self.field
        a = F.coerce(a)
        b = F.coerce(b)
        local = []
        for k, R in enumerate(self._local_rings):
            P = self._local_primes[k]
            ra, rb = R.reduce(a), R.reduce(b)
            if not P.contains(ra):
                lam = R.inverse(ra)
                local.append((F.one(), R.reduce(rb * lam)))
            elif not P.contains(rb):
                mu = R.inverse(rb)
                local.append((R.reduce(ra * mu), F.one()))
            else:
                raise P1Error(
                    "pair (%r, %r) is not unimodular at %s" % (a, b, P.prime_label()))
        ga, gb = self._glue(local)
        key = _coord_key(ga, gb)
        pos = self._lookup.get(key)
        if pos is None:
            raise P1Error("normalized pair %r missing from the table" % (key,))
        return pos

    def display(self, pos):
        a, b = self.reps[pos]
        return "[%s:%s]" % (a, b)

    # -- group action ------------------------------------------------------

    def gl2_action(self, mat):
        """Permutation of positions induced by the right action (a b) * mat.

        mat is a 2x2 array of field elements (or ints); its determinant must
        be a unit modulo the level.
        """
        F = self.field
        m = [[F.coerce(mat[i][j]) for j in range(2)] for i in range(2)]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if not self.ring.is_unit(det):
            raise P1Error("matrix determinant %r is not a unit modulo the level" % (det,))
        perm = []
        for a, b in self.reps:
            na = a * m[0][0] + b * m[1][0]
            nb = a * m[0][1] + b * m[1][1]
            perm.append(self.normalize(na, nb))
        if sorted(perm) != list(range(self.size)):
            raise P1Error("matrix action is not a bijection; arithmetic bug")
        return perm


def build_p1(N):
    if N.norm() < 1:
        raise P1Error("level must be a nonzero integral ideal")
    return P1Index(N)
