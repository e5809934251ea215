"""Integral ideals of the supported base fields: Hermite forms, primes, residues.

Ideals are Z-lattices in the ring of integers, stored in a canonical column
Hermite form so that equality is a data comparison and every label is
reproducible.  The degree-2 form is [[A, 0], [B, D]] over the basis {1, omega},
i.e. generators A + B*omega and D*omega with A, D > 0 and 0 <= B < D.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from . import intmat
from .field import BaseField, FieldElement, FieldError


def coord_vector(x):
    """Integer coordinates of an integral element over {1, omega} (or {1})."""
    a, b = x.coords()
    if a.denominator != 1 or b.denominator != 1:
        raise ValueError("element %r is not integral over the power basis" % (x,))
    if x.field.degree == 1:
        return [int(a)]
    return [int(a), int(b)]


def element_from_coords(field, coords):
    if field.degree == 1:
        return field.element(coords[0], 0)
    return field.element(coords[0], coords[1])


class Ideal:
    """A nonzero integral ideal in canonical Hermite form."""

    __slots__ = ("field", "cols", "_norm")

    def __init__(self, field, cols, _trusted=False):
        self.field = field
        n = field.degree
        if not _trusted:
            cols = intmat.hnf_basis(cols)
            if len(cols) != n:
                raise ValueError("lattice is not full rank: %r" % (cols,))
        self.cols = tuple(tuple(c) for c in cols)
        norm = 1
        for i in range(n):
            norm *= self.cols[i][i]
        self._norm = norm
        if not _trusted and not self._closed_under_omega():
            raise ValueError("lattice is not an ideal: %r" % (cols,))

    def _closed_under_omega(self):
        F = self.field
        if F.degree == 1:
            return True
        for col in self.cols:
            x = element_from_coords(F, col) * F.omega()
            if not self.contains(x):
                return False
        return True

    @staticmethod
    def from_generators(field, gens):
        """Ideal generated by field elements (integral, not all zero)."""
        cols = []
        basis = [field.one(), field.omega()] if field.degree == 2 else [field.one()]
        for g in gens:
            g = field.coerce(g)
            for b in basis:
                x = g * b
                if not x.is_zero():
                    cols.append(coord_vector(x))
        if not cols:
            raise ValueError("zero ideal")
        return Ideal(field, cols)

    @staticmethod
    def principal(field, g):
        return Ideal.from_generators(field, [g])

    @staticmethod
    def unit_ideal(field):
        return Ideal.principal(field, field.one())

    def norm(self):
        return self._norm

    def hnf_tuple(self):
        """(A, B, D) in degree 2; (A,) in degree 1."""
        if self.field.degree == 1:
            return (self.cols[0][0],)
        return (self.cols[0][0], self.cols[0][1], self.cols[1][1])

    def sort_key(self):
        return (self._norm,) + self.hnf_tuple()

    def label(self):
        return ".".join(str(t) for t in (self._norm,) + self.hnf_tuple())

    def basis_elements(self):
        return [element_from_coords(self.field, c) for c in self.cols]

    def contains(self, x):
        x = self.field.coerce(x)
        a, b = x.coords()
        if a.denominator != 1 or b.denominator != 1:
            return False
        if self.field.degree == 1:
            return int(a) % self.cols[0][0] == 0
        A, B = self.cols[0][0], self.cols[0][1]
        D = self.cols[1][1]
        a, b = int(a), int(b)
        if a % A:
            return False
        return (b - (a // A) * B) % D == 0

    def contains_ideal(self, other):
        return all(self.contains(x) for x in other.basis_elements())

    def reduce(self, x):
        """Canonical representative of x modulo the ideal, coords in the HNF box."""
        x = self.field.coerce(x)
        a, b = x.coords()
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError("cannot reduce a non-integral element")
        if self.field.degree == 1:
            return self.field.element(int(a) % self.cols[0][0], 0)
        A, B = self.cols[0][0], self.cols[0][1]
        D = self.cols[1][1]
        a, b = int(a), int(b)
        q = a // A
        return self.field.element(a - q * A, (b - q * B) % D)

    def __mul__(self, other):
        if isinstance(other, Ideal):
            cols = []
            xs = self.basis_elements()
            ys = other.basis_elements()
            for x in xs:
                for y in ys:
                    cols.append(coord_vector(x * y))
            return Ideal(self.field, cols)
        return NotImplemented

    def __add__(self, other):
        return Ideal(self.field, [list(c) for c in self.cols + other.cols])

    def intersect(self, other):
        cols = intmat.lattice_intersection(
            [list(c) for c in self.cols], [list(c) for c in other.cols]
        )
        return Ideal(self.field, cols)

    def conjugate(self):
        cols = [coord_vector(x.conjugate()) for x in self.basis_elements()]
        return Ideal(self.field, cols)

    def divide_exact(self, P):
        """The ideal self * P^(-1), which must again be integral.

        P^(-1) is conj(P)/Nm(P) in degree 2 and (1/Nm(P)) in degree 1.
        """
        if self.field.degree == 1:
            prod = self
        else:
            prod = self * P.conjugate()
        np = P.norm()
        cols = []
        for c in prod.cols:
            if any(t % np for t in c):
                raise ValueError("ideal %s does not divide %s" % (P.label(), self.label()))
            cols.append([t // np for t in c])
        return Ideal(self.field, cols)

    def valuation(self, P):
        v = 0
        I = self
        while P.contains_ideal(I):
            I = I.divide_exact(P)
            v += 1
        return v

    def is_coprime(self, other):
        return (self + other).norm() == 1

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.field is other.field and self.cols == other.cols

    def __hash__(self):
        return hash((id(self.field), self.cols))

    def __repr__(self):
        return "Ideal(%s, norm %d)" % (self.label(), self._norm)


class PrimeIdeal(Ideal):
    """A prime ideal remembering its rational prime, residue data, and label."""

    __slots__ = ("p", "res_degree", "ram_index", "root")

    def __init__(self, field, cols, p, res_degree, ram_index, root):
        Ideal.__init__(self, field, cols)
        self.p = p
        self.res_degree = res_degree
        self.ram_index = ram_index
        self.root = root  # smallest a >= 0 with omega = a mod the prime, or None

    def prime_label(self):
        if self.root is not None and self.ram_index == 1 and self.field.degree == 2:
            return "%d.%d" % (self.norm(), self.root)
        return str(self.norm())

    def prime_sort_key(self):
        return (self.norm(), -1 if self.root is None else self.root, self.ram_index)

    def is_split(self):
        return self.field.degree == 2 and self.res_degree == 1 and self.ram_index == 1

    def __repr__(self):
        return "PrimeIdeal(%s)" % self.prime_label()


def _min_poly_root_mod_p(F, p):
    """Roots mod p of the minimal polynomial of omega; exhaustive, p is small."""
    roots = []
    if F.half_basis:
        c = int(F._omega_sq_const)
        for r in range(p):
            if (r * r - r - c) % p == 0:
                roots.append(r)
    else:
        m = F.radicand
        for r in range(p):
            if (r * r - m) % p == 0:
                roots.append(r)
    return roots


def factor_rational_prime(F, p):
    """Prime ideals above p with ramification exponents, sorted by label."""
    if F.degree == 1:
        P = PrimeIdeal(F, [[p]], p, 1, 1, None)
        return [(P, 1)]
    roots = _min_poly_root_mod_p(F, p)
    ramified = F.disc % p == 0
    if ramified:
        # double root; the unique prime above p has norm p
        r = roots[0]
        P = PrimeIdeal(F, _two_gen_cols(F, p, r), p, 1, 2, r)
        return [(P, 2)]
    if not roots:
        P = PrimeIdeal(F, [[p, 0], [0, p]], p, 2, 1, None)
        return [(P, 1)]
    out = []
    for r in sorted(roots):
        P = PrimeIdeal(F, _two_gen_cols(F, p, r), p, 1, 1, r)
        out.append((P, 1))
    return out


def _two_gen_cols(F, p, r):
    # lattice generated by p and omega - r
    cols = []
    for g in (F.element(p, 0), F.element(-r, 1)):
        for b in (F.one(), F.omega()):
            cols.append(coord_vector(g * b))
    return cols


def primes_of_norm_up_to(F, bound):
    """All prime ideals of norm <= bound, sorted by (norm, root)."""
    out = []
    for p in sympy.primerange(2, bound + 1):
        for P, _ in factor_rational_prime(F, p):
            if P.norm() <= bound:
                out.append(P)
    out.sort(key=lambda P: P.prime_sort_key())
    return out


def factor_ideal(N):
    """Factor an integral ideal into (PrimeIdeal, exponent) pairs.

    The factorization is re-multiplied and compared against the input.
    """
    F = N.field
    n = N.norm()
    if n == 0:
        raise ValueError("zero ideal")
    if n == 1:
        return []
    out = []
    for p in sorted(sympy.factorint(n)):
        for P, _ in factor_rational_prime(F, p):
            v = N.valuation(P)
            if v:
                out.append((P, v))
    check = Ideal.unit_ideal(F)
    for P, e in out:
        for _ in range(e):
            check = check * P
    if check != N:
        raise ArithmeticError("factorization of %s failed re-multiplication" % N.label())
    out.sort(key=lambda t: t[0].prime_sort_key())
    return out


def ideals_of_norm(F, m):
    """All integral ideals of norm m, sorted by Hermite form."""
    if m < 1:
        raise ValueError("norm must be positive")
    acc = [Ideal.unit_ideal(F)]
    for p, a in sorted(sympy.factorint(m).items()):
        primes = factor_rational_prime(F, p)
        options = []
        if F.degree == 1:
            options = [_power(primes[0][0], a)]
        elif len(primes) == 2:
            P1, P2 = primes[0][0], primes[1][0]
            options = [_power(P1, i) * _power(P2, a - i) for i in range(a + 1)]
        else:
            P, e = primes[0]
            if e == 2:  # ramified, norm p
                options = [_power(P, a)]
            elif a % 2 == 0:  # inert, norm p^2
                options = [_power(P, a // 2)]
            else:
                return []
        acc = [I * J for I in acc for J in options]
    acc.sort(key=lambda I: I.sort_key())
    return acc


def _power(I, k):
    out = Ideal.unit_ideal(I.field)
    for _ in range(k):
        out = out * I
    return out


def ideal_power(I, k):
    return _power(I, k)


def divisor_ideals(N):
    """All ideal divisors of N, sorted by (norm, Hermite form)."""
    fac = factor_ideal(N)
    out = [Ideal.unit_ideal(N.field)]
    for P, e in fac:
        out = [I * _power(P, k) for I in out for k in range(e + 1)]
    out.sort(key=lambda I: I.sort_key())
    return out


def conjugate_prime(P):
    """The Galois conjugate of a prime ideal, with its own label data."""
    F = P.field
    if F.degree == 1 or P.root is None or P.ram_index == 2:
        return P
    for Q, _ in factor_rational_prime(F, P.p):
        if Q.cols == P.conjugate().cols:
            return Q
    raise ArithmeticError("conjugate prime not found for %s" % P.prime_label())


# ---------------------------------------------------------------------------
# residue rings


class ResidueRing:
    """The quotient of the ring of integers by an integral ideal."""

    def __init__(self, modulus):
        self.modulus = modulus
        self.field = modulus.field
        self.size = modulus.norm()

    def reduce(self, x):
        return self.modulus.reduce(x)

    def elements(self):
        """All residues in canonical coordinate order."""
        F = self.field
        if F.degree == 1:
            A = self.modulus.cols[0][0]
            return [F.element(x, 0) for x in range(A)]
        A = self.modulus.cols[0][0]
        D = self.modulus.cols[1][1]
        return [F.element(x, y) for x in range(A) for y in range(D)]

    def is_unit(self, x):
        if self.size == 1:
            return True  # zero ring: 0 = 1 is a unit
        x = self.field.coerce(x)
        if x.is_zero():
            return False
        return (Ideal.principal(self.field, x) + self.modulus).norm() == 1

    def inverse(self, x):
        """y with x*y = 1 modulo the ideal; raises for non-units."""
        F = self.field
        if self.size == 1:
            return F.zero()
        x = F.coerce(x)
        cols = [coord_vector(x)] if F.degree == 1 else [
            coord_vector(x), coord_vector(x * F.omega())
        ]
        cols = cols + [list(c) for c in self.modulus.cols]
        mat = intmat.from_columns(cols)
        target = [1] if F.degree == 1 else [1, 0]
        sol = intmat.solve_int(mat, target)
        if sol is None:
            raise ZeroDivisionError("%r is not a unit modulo %s" % (x, self.modulus.label()))
        y = element_from_coords(F, sol[: F.degree])
        return self.reduce(y)

    def maximal_ideal_transversal(self, P):
        """Residues lying in P, in canonical order (modulus must be a power of P)."""
        return [x for x in self.elements() if P.contains(x)]


def idempotent_pair(I, J):
    """(u, v) with u in I, v in J, u + v = 1; the ideals must be coprime."""
    F = I.field
    cols = [list(c) for c in I.cols] + [list(c) for c in J.cols]
    mat = intmat.from_columns(cols)
    target = coord_vector(F.one())
    sol = intmat.solve_int(mat, target)
    if sol is None:
        raise ValueError("ideals %s, %s are not coprime" % (I.label(), J.label()))
    n = F.degree
    u = F.zero()
    for k in range(n):
        u = u + element_from_coords(F, I.cols[k]) * F.element(sol[k], 0)
    v = F.one() - u
    return u, v


def crt_idempotents(moduli):
    """Elements e_i = 1 mod moduli[i] and = 0 mod the others."""
    F = moduli[0].field
    out = []
    for i, I in enumerate(moduli):
        rest = Ideal.unit_ideal(F)
        for j, J in enumerate(moduli):
            if j != i:
                rest = rest * J
        u, v = idempotent_pair(I, rest)
        # u + v = 1 with u in I, v in rest: v is 1 mod I, 0 mod the others
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# totally positive generators


def any_generator(I):
    """Some generator of a (necessarily principal) ideal; deterministic."""
    F = I.field
    if F.degree == 1:
        return F.element(I.cols[0][0], 0)
    basis = I.basis_elements()
    gram = [[(x * y).trace() for y in basis] for x in basis]
    gram = [[int(t) for t in row] for row in gram]
    n = I.norm()
    cap = n * int(F.totally_positive_unit().trace())
    from .lattice import short_vectors

    for t in range(2 * n, cap + 1):
        for v in short_vectors(gram, t):
            x = F.zero()
            for k in range(len(basis)):
                if v[k]:
                    x = x + basis[k] * F.element(v[k], 0)
            nx = x.norm()
            if nx == n or nx == -n:
                return x
    raise ArithmeticError("no generator found for %s; ideal may not be principal" % I.label())


def totally_positive_generator(I):
    """The canonical totally positive generator of an integral ideal.

    Sign pattern is fixed first (multiply by 1, -1, 1/eps or -1/eps according
    to the embedding signs), then the trace is minimized over the even powers
    of the fundamental unit; ties broken by lexicographically smallest
    coordinates.  Requires narrow class number 1, true for all supported fields.
    """
    F = I.field
    g = any_generator(I)
    if F.degree == 1:
        return g if g.norm() > 0 else -g
    eps = F.fundamental_unit()
    s0, s1 = g.sign_at(0), g.sign_at(1)
    if s0 > 0 and s1 > 0:
        pass
    elif s0 < 0 and s1 < 0:
        g = -g
    elif s0 > 0 and s1 < 0:
        g = g / eps
    else:
        g = -(g / eps)
    if not g.is_totally_positive():
        raise ArithmeticError("sign normalization failed for %s" % I.label())
    e2 = F.totally_positive_unit()
    while (g * e2).trace() < g.trace():
        g = g * e2
    while (g / e2).trace() < g.trace():
        g = g / e2
    best = g
    for cand in (g * e2, g / e2):
        if cand.trace() == best.trace() and cand.coords() < best.coords():
            best = cand
    if not best.is_integral():
        raise ArithmeticError("generator of %s left the ring" % I.label())
    return best
