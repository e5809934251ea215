"""Totally definite quaternion algebras: orders, ideals, classes, splittings.

Elements are written t + x*i + y*j + z*k with i^2 = a, j^2 = b, k = ij.
Lattices of full rank are stored as canonical integer column spans with one
global denominator, so equality of lattices is a data comparison.  All class
set machinery (unit groups, theta fingerprints, neighbor enumeration,
isomorphism testing) reduces to exact short-vector enumeration.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from . import intmat
from .field import FieldElement
from .ideals import (
    Ideal,
    PrimeIdeal,
    ResidueRing,
    coord_vector,
    crt_idempotents,
    element_from_coords,
    factor_ideal,
    factor_rational_prime,
    ideal_power,
    primes_of_norm_up_to,
    totally_positive_generator,
)
from .lattice import short_vectors


class QuatError(ArithmeticError):
    pass


class WrongRamification(QuatError):
    pass


class NonIntegralBasis(QuatError):
    pass


class NotAnOrder(QuatError):
    pass


class NotMaximal(QuatError):
    pass


class QuaternionAlgebra:
    """B = (a, b / F) with i^2 = a, j^2 = b, ij = -ji = k."""

    def __init__(self, field, a, b):
        self.field = field
        self.a = field.coerce(a)
        self.b = field.coerce(b)
        if self.a.is_zero() or self.b.is_zero():
            raise QuatError("defining pair must be nonzero")

    def __repr__(self):
        return "QuaternionAlgebra(%s; %s, %s)" % (self.field.label, self.a, self.b)

    def element(self, t, x=0, y=0, z=0):
        F = self.field
        return QuatElement(self, F.coerce(t), F.coerce(x), F.coerce(y), F.coerce(z))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def basis_units(self):
        return (
            self.element(1, 0, 0, 0),
            self.element(0, 1, 0, 0),
            self.element(0, 0, 1, 0),
            self.element(0, 0, 0, 1),
        )

    def is_totally_definite(self):
        places = range(max(1, self.field.degree))
        return all(
            hilbert_symbol(self.a, self.b, ("real", v)) == -1 for v in places)

    def finite_ramified_primes(self):
        """Sorted prime ideals where the algebra ramifies."""
        F = self.field
        bad = Ideal.principal(F, self.a * self.b * F.element(2))
        out = []
        for P, _ in factor_ideal(bad):
            if hilbert_symbol(self.a, self.b, P) == -1:
                out.append(P)
        out.sort(key=lambda P: P.prime_sort_key())
        return out

    def discriminant_ideal(self):
        D = Ideal.unit_ideal(self.field)
        for P in self.finite_ramified_primes():
            D = D * P
        return D


class QuatElement:
    __slots__ = ("algebra", "t", "x", "y", "z")

    def __init__(self, algebra, t, x, y, z):
        self.algebra = algebra
        self.t = t
        self.x = x
        self.y = y
        self.z = z

    def coords(self):
        return (self.t, self.x, self.y, self.z)

    def __repr__(self):
        return "Quat(%s, %s, %s, %s)" % (self.t, self.x, self.y, self.z)

    def __eq__(self, other):
        return (
            isinstance(other, QuatElement)
            and self.coords() == other.coords()
            and self.algebra is other.algebra
        )

    def __hash__(self):
        return hash((self.t, self.x, self.y, self.z))

    def __add__(self, other):
        return QuatElement(
            self.algebra, self.t + other.t, self.x + other.x,
            self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return QuatElement(
            self.algebra, self.t - other.t, self.x - other.x,
            self.y - other.y, self.z - other.z)

    def __neg__(self):
        return QuatElement(self.algebra, -self.t, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, QuatElement):
            a = self.algebra.a
            b = self.algebra.b
            t1, x1, y1, z1 = self.coords()
            t2, x2, y2, z2 = other.coords()
            ab = a * b
            return QuatElement(
                self.algebra,
                t1 * t2 + a * x1 * x2 + b * y1 * y2 - ab * z1 * z2,
                t1 * x2 + x1 * t2 - b * (y1 * z2 - z1 * y2),
                t1 * y2 + y1 * t2 + a * (x1 * z2 - z1 * x2),
                t1 * z2 + z1 * t2 + (x1 * y2 - y1 * x2),
            )
        w = self.algebra.field.coerce(other)
        return QuatElement(self.algebra, self.t * w, self.x * w, self.y * w, self.z * w)

    def __rmul__(self, other):
        # scalar from the field commutes
        return self.__mul__(other)

    def scale(self, w):
        return self.__mul__(w)

    def conjugate(self):
        return QuatElement(self.algebra, self.t, -self.x, -self.y, -self.z)

    def trd(self):
        return self.t + self.t

    def nrd(self):
        a = self.algebra.a
        b = self.algebra.b
        return (self.t * self.t - a * self.x * self.x - b * self.y * self.y
                + a * b * self.z * self.z)

    def is_zero(self):
        return (self.t.is_zero() and self.x.is_zero() and self.y.is_zero()
                and self.z.is_zero())

    def inverse(self):
        n = self.nrd()
        if n.is_zero():
            raise ZeroDivisionError("zero divisor in quaternion algebra")
        c = self.conjugate()
        return QuatElement(c.algebra, c.t / n, c.x / n, c.y / n, c.z / n)

    def is_integral(self):
        return self.trd().is_integral() and self.nrd().is_integral()


# ---------------------------------------------------------------------------
# coordinates: a quaternion element <-> a vector of 4n rationals


def quat_to_vector(alpha):
    out = []
    degree = alpha.algebra.field.degree
    for c in alpha.coords():
        a, b = c.coords()
        out.append(a)
        if degree == 2:
            out.append(b)
    return out


def vector_to_quat(algebra, vec):
    F = algebra.field
    n = F.degree
    comps = []
    for k in range(4):
        if n == 1:
            comps.append(F.element(vec[k]))
        else:
            comps.append(F.element(vec[2 * k], vec[2 * k + 1]))
    return QuatElement(algebra, *comps)


def _lcm(a, b):
    return a * b // gcd(a, b)


class QuatLattice:
    """Full-rank Z-lattice in B, canonical HNF columns over a denominator."""

    __slots__ = ("algebra", "den", "cols")

    def __init__(self, algebra, den, cols, _canonical=False):
        self.algebra = algebra
        if not _canonical:
            cols = intmat.hnf_basis([list(c) for c in cols])
            rank = 4 * algebra.field.degree
            if len(cols) != rank:
                raise QuatError("lattice rank %d, expected %d" % (len(cols), rank))
            g = den
            for c in cols:
                for t in c:
                    g = gcd(g, t)
            if g > 1:
                den //= g
                cols = [[t // g for t in c] for c in cols]
        self.den = den
        self.cols = tuple(tuple(c) for c in cols)

    @staticmethod
    def from_elements(algebra, elems):
        vecs = [quat_to_vector(e) for e in elems]
        den = 1
        for v in vecs:
            for c in v:
                den = _lcm(den, c.denominator)
        cols = [[int(c * den) for c in v] for v in vecs]
        return QuatLattice(algebra, den, cols)

    def basis(self):
        d = Fraction(1, self.den)
        return [vector_to_quat(self.algebra, [c * d for c in col]) for col in self.cols]

    def __eq__(self, other):
        return (
            isinstance(other, QuatLattice)
            and self.den == other.den
            and self.cols == other.cols
        )

    def __hash__(self):
        return hash((self.den, self.cols))

    def contains(self, alpha):
        v = quat_to_vector(alpha)
        scaled = []
        for c in v:
            s = c * self.den
            if s.denominator != 1:
                return False
            scaled.append(int(s))
        return intmat.lattice_contains([list(c) for c in self.cols], scaled)

    def contains_lattice(self, other):
        return all(self.contains(x) for x in other.basis())

    def multiply(self, other):
        """Lattice generated by all products of basis elements."""
        prods = []
        for x in self.basis():
            for y in other.basis():
                prods.append(x * y)
        return QuatLattice.from_elements(self.algebra, prods)

    def add(self, other):
        if self.den == other.den:
            return QuatLattice(
                self.algebra, self.den,
                [list(c) for c in self.cols] + [list(c) for c in other.cols])
        return QuatLattice.from_elements(self.algebra, self.basis() + other.basis())

    def intersect(self, other):
        d = _lcm(self.den, other.den)
        sa = d // self.den
        sb = d // other.den
        ca = [[t * sa for t in c] for c in self.cols]
        cb = [[t * sb for t in c] for c in other.cols]
        cols = intmat.lattice_intersection(ca, cb)
        return QuatLattice(self.algebra, d, cols)

    def scale_field(self, w):
        """The lattice w * L for a field scalar w."""
        return QuatLattice.from_elements(
            self.algebra, [x * w for x in self.basis()])

    def multiply_element_right(self, alpha):
        return QuatLattice.from_elements(
            self.algebra, [x * alpha for x in self.basis()])

    def multiply_element_left(self, alpha):
        return QuatLattice.from_elements(
            self.algebra, [alpha * x for x in self.basis()])

    def conjugate(self):
        return QuatLattice.from_elements(
            self.algebra, [x.conjugate() for x in self.basis()])

    def index_in(self, other):
        """[other : self] as a positive rational."""
        a = intmat.det([list(r) for r in intmat.from_columns(
            [list(c) for c in self.cols])])
        b = intmat.det([list(r) for r in intmat.from_columns(
            [list(c) for c in other.cols])])
        rank = len(self.cols)
        q = Fraction(abs(a), abs(b)) * Fraction(other.den, self.den) ** rank
        return q

    # -- forms -------------------------------------------------------------

    def norm_form_gram(self, weight=None):
        """Gram of the bilinear form Tr(trd(x * conj(y)) / weight) on the basis.

        Diagonal entries equal 2 * Tr(nrd(basis_i) / weight); enumerating the
        form at value 2t lists the vectors with Tr(nrd / weight) = t.
        """
        bas = self.basis()
        F = self.algebra.field
        gram = []
        for x in bas:
            row = []
            for y in bas:
                v = (x * y.conjugate()).trd()
                if weight is not None:
                    v = v / weight
                row.append(v.trace())
            gram.append(row)
        return gram

    def nrd_ideal(self):
        """The ideal generated by reduced norms of lattice elements."""
        bas = self.basis()
        gens = [x.nrd() for x in bas]
        for i in range(len(bas)):
            for j in range(i + 1, len(bas)):
                gens.append((bas[i] * bas[j].conjugate()).trd())
        den = 1
        for g in gens:
            a, b = g.coords()
            den = _lcm(den, _lcm(a.denominator, b.denominator))
        F = self.algebra.field
        scaled = [g * F.element(den) for g in gens]
        num = Ideal.from_generators(F, [g for g in scaled if not g.is_zero()])
        if den == 1:
            return num
        return FractionalScale(num, den)


class FractionalScale:
    """A fractional ideal num/den; only what the norm bookkeeping needs."""

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def generator_tp(self):
        return totally_positive_generator(self.num) / self.num.field.element(self.den)


def nrd_ideal_integral(lattice):
    """nrd ideal of a lattice known to be integral; returns an Ideal."""
    out = lattice.nrd_ideal()
    if isinstance(out, FractionalScale):
        raise QuatError("lattice has non-integral reduced norms")
    return out


# ---------------------------------------------------------------------------
# Hilbert symbols


def _legendre_in_residue_field(u, P):
    """+1 if the unit u is a square modulo the odd prime P, else -1."""
    R = ResidueRing(P)
    q = P.norm()
    # u^((q-1)/2) mod P is 1 or -1
    e = (q - 1) // 2
    acc = P.field.one()
    base = R.reduce(u)
    while e:
        if e & 1:
            acc = R.reduce(acc * base)
        base = R.reduce(base * base)
        e >>= 1
    if acc == P.field.one():
        return 1
    if R.reduce(acc + P.field.one()).is_zero():
        return -1
    raise QuatError("element %r is not a unit modulo %s" % (u, P.prime_label()))


def _uniformizer(P):
    for x in P.basis_elements():
        if not ideal_power(P, 2).contains(x):
            return x
    raise QuatError("no uniformizer found for %s" % P.prime_label())


def _clear_square_denominator(x):
    """x * d^2 with d clearing denominators; same square class."""
    a, b = x.coords()
    d = _lcm(a.denominator, b.denominator)
    return x * x.field.element(d * d) if d > 1 else x


def hilbert_symbol(a, b, v):
    """The local Hilbert symbol (a, b) at a place v.

    v is either a PrimeIdeal or a tuple ("real", k) naming the k-th real
    embedding.  Returns +1 when a*x^2 + b*y^2 = z^2 has a nontrivial local
    solution, else -1.
    """
    F = a.field if isinstance(a, FieldElement) else b.field
    a = F.coerce(a)
    b = F.coerce(b)
    if a.is_zero() or b.is_zero():
        raise QuatError("Hilbert symbol needs nonzero entries")
    if isinstance(v, tuple) and v[0] == "real":
        place = v[1] if F.degree == 2 else 0
        if F.degree == 1:
            return -1 if (a.a < 0 and b.a < 0) else 1
        return -1 if (a.sign_at(place) < 0 and b.sign_at(place) < 0) else 1
    P = v
    a = _clear_square_denominator(a)
    b = _clear_square_denominator(b)
    if P.p == 2:
        return _even_hilbert_symbol(a, b, P)
    return _tame_hilbert_symbol(a, b, P)


def _tame_hilbert_symbol(a, b, P):
    Ia = Ideal.principal(P.field, a)
    Ib = Ideal.principal(P.field, b)
    alpha = Ia.valuation(P)
    beta = Ib.valuation(P)
    pi = _uniformizer(P)
    u = a
    for _ in range(alpha):
        u = u / pi
    w = b
    for _ in range(beta):
        w = w / pi
    q = P.norm()
    sign = 1
    if alpha % 2 and beta % 2 and (q - 1) // 2 % 2:
        sign = -1
    if beta % 2:
        sign *= _legendre_unit_value(u, P)
    if alpha % 2:
        sign *= _legendre_unit_value(w, P)
    return sign


def _legendre_unit_value(u, P):
    # u may have denominators coprime to P; shift into the ring first
    u = _clear_square_denominator(u)
    return _legendre_in_residue_field(u, P)


def _even_hilbert_symbol(a, b, P):
    """Solubility of a x^2 + b y^2 = z^2 over the completion at a prime above 2.

    Bounded-precision digit search: primitive solutions modulo P^k are grown
    one digit at a time; k = 2 e(P|2) + 3 decides the symbol for the inputs
    used here (entries of valuation at most 2).
    """
    F = P.field
    e = P.ram_index if F.degree == 2 else 1
    prec = 2 * e + 3
    va = Ideal.principal(F, a).valuation(P)
    vb = Ideal.principal(F, b).valuation(P)
    prec += max(0, va) + max(0, vb)
    powers = [Ideal.unit_ideal(F)]
    for k in range(prec):
        powers.append(powers[-1] * P)
    digits = ResidueRing(P).elements()
    pi = _uniformizer(P)
    pi_pow = [F.one()]
    for k in range(prec):
        pi_pow.append(pi_pow[-1] * pi)

    def value(x, y, z):
        return a * x * x + b * y * y - z * z

    def extend(x, y, z, level, free):
        # free lists which coordinates still take new digits
        if level == prec:
            return True
        target = powers[level + 1]
        for d0 in digits if free[0] else (F.zero(),):
            nx = x + d0 * pi_pow[level] if free[0] else x
            for d1 in digits if free[1] else (F.zero(),):
                ny = y + d1 * pi_pow[level] if free[1] else y
                for d2 in digits if free[2] else (F.zero(),):
                    nz = z + d2 * pi_pow[level] if free[2] else z
                    if target.contains(value(nx, ny, nz)):
                        if extend(nx, ny, nz, level + 1, free):
                            return True
        return False

    one = F.one()
    zero = F.zero()
    # primitive classes, scaled so the first unit coordinate is exactly 1;
    # coordinates before it stay in the maximal ideal but keep higher digits
    seeds = []
    for ystart in digits:
        for zstart in digits:
            seeds.append(((one, ystart, zstart), (False, True, True)))
    for zstart in digits:
        seeds.append(((zero, one, zstart), (True, False, True)))
    seeds.append(((zero, zero, one), (True, True, False)))
    for (x, y, z), free in seeds:
        if powers[1].contains(value(x, y, z)):
            if extend(x, y, z, 1, free):
                return 1
    return -1


# ---------------------------------------------------------------------------
# orders


def _reduce_vec(hnf_cols, v):
    """Canonical representative of v modulo a full-rank HNF column lattice."""
    r = list(v)
    for j, c in enumerate(hnf_cols):
        q = r[j] // c[j]
        if q:
            for t in range(j, len(r)):
                r[t] -= q * c[t]
    return r


def zeta_minus_one(field):
    """zeta_F(-1) for a real quadratic field, by the finite sigma sum."""
    from sympy import divisor_sigma

    D = field.disc
    total = 0
    bound = 1
    while bound * bound < D:
        bound += 1
    for b in range(-bound, bound + 1):
        r = D - b * b
        if r <= 0 or r % 4:
            continue
        total += int(divisor_sigma(r // 4, 1))
    return Fraction(total, 60)


def eichler_mass(field, disc_ideal):
    """Mass of the maximal orders with the given ramified discriminant."""
    if field.degree == 1:
        m = Fraction(1, 12)
        for P, _ in factor_ideal(disc_ideal):
            m *= P.norm() - 1
        return m
    m = zeta_minus_one(field) / 2
    for P, _ in factor_ideal(disc_ideal):
        m *= P.norm() - 1
    return m


class QuatOrder:
    """An order in a quaternion algebra, held as a unimodular-checked lattice."""

    def __init__(self, lattice, check=True):
        self.lattice = lattice
        self.algebra = lattice.algebra
        if check:
            if not lattice.contains(self.algebra.one()):
                raise NotAnOrder("1 is not in the lattice")
            bas = lattice.basis()
            for x in bas:
                if not x.is_integral():
                    raise NonIntegralBasis("basis element %r" % (x,))
            if self.algebra.field.degree == 2:
                w = self.algebra.field.omega()
                for x in bas:
                    if not lattice.contains(x * w):
                        raise NotAnOrder("lattice is not a module over the "
                                         "ring of integers")
            for x in bas:
                for y in bas:
                    if not lattice.contains(x * y):
                        raise NotAnOrder("not closed under multiplication")
        self._gram = None
        self._units = None
        self._theta = {}

    def __eq__(self, other):
        return isinstance(other, QuatOrder) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def basis(self):
        return self.lattice.basis()

    def gram(self):
        if self._gram is None:
            self._gram = self.lattice.norm_form_gram()
        return self._gram

    def discriminant_squared(self):
        """The ideal generated by 4x4 trace-pairing minors of the basis."""
        bas = self.lattice.basis()
        F = self.algebra.field
        n4 = len(bas)
        G = [[(x * y).trd() for y in bas] for x in bas]
        from itertools import combinations

        gens = []
        subsets = list(combinations(range(n4), 4))
        for S in subsets:
            for T in subsets:
                if S > T:
                    continue
                d = _det4_field(F, [[G[i][j] for j in T] for i in S])
                if not d.is_zero():
                    gens.append(d)
        den = 1
        for g in gens:
            a, b = g.coords()
            den = _lcm(den, _lcm(a.denominator, b.denominator))
        if den != 1:
            gens = [g * F.element(den) for g in gens]
        I = Ideal.from_generators(F, gens)
        if den != 1:
            raise QuatError("order has fractional trace pairings")
        return I

    def reduced_discriminant(self):
        D2 = self.discriminant_squared()
        out = Ideal.unit_ideal(self.algebra.field)
        for P, e in factor_ideal(D2):
            if e % 2:
                raise QuatError("discriminant ideal is not a square")
            out = out * ideal_power(P, e // 2)
        return out

    def is_maximal(self):
        D = self.algebra.discriminant_ideal()
        return self.discriminant_squared() == D * D

    def unit_norm_one(self):
        """Units of reduced norm 1, one representative per {x, -x} pair."""
        if self._units is not None:
            return self._units
        n = max(1, self.algebra.field.degree)
        vecs = short_vectors(self.gram(), 2 * n)
        units = []
        for v in vecs:
            x = self._from_coords(v)
            if x.nrd() == self.algebra.field.one():
                units.append(x)
        canon = set()
        for u in units:
            canon.add(_sign_canonical(u))
        for u in units:
            for v in units:
                if _sign_canonical(u * v) not in canon:
                    raise QuatError("unit list is not closed under products")
        self._units = units
        return units

    def _from_coords(self, v):
        d = Fraction(1, self.lattice.den)
        vec = [0] * len(v)
        for j, c in enumerate(v):
            if c:
                for t in range(len(v)):
                    vec[t] += c * self.lattice.cols[j][t]
        return vector_to_quat(self.algebra, [x * d for x in vec])

    def theta_fingerprint(self, count=16):
        key = count
        if key not in self._theta:
            from .lattice import count_at_targets

            targets = [2 * t for t in range(count)]
            self._theta[key] = tuple(count_at_targets(self.gram(), targets))
        return self._theta[key]


def _sign_canonical(x):
    v = quat_to_vector(x)
    for c in v:
        if c > 0:
            return tuple(v)
        if c < 0:
            return tuple(-t for t in v)
    return tuple(v)


def _det4_field(F, m):
    """Determinant of a small matrix of field elements, cofactor expansion."""
    n = len(m)
    if n == 1:
        return m[0][0]
    out = F.zero()
    sign = 1
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det4_field(F, sub)
        out = out + term if sign > 0 else out - term
        sign = -sign
    return out


# ---------------------------------------------------------------------------
# right ideals over a maximal order


class RightIdeal:
    """A right ideal over a fixed maximal order, with cached reduction data."""

    def __init__(self, order, lattice, check=True):
        self.order = order
        self.lattice = lattice
        self.algebra = lattice.algebra
        if check:
            obas = order.basis()
            for x in lattice.basis():
                for m in obas:
                    if not lattice.contains(x * m):
                        raise QuatError("lattice is not right-stable")
        self._nrd = None
        self._nrd_gen = None
        self._left_order = None

    def __eq__(self, other):
        return isinstance(other, RightIdeal) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def nrd(self):
        if self._nrd is None:
            out = self.lattice.nrd_ideal()
            if isinstance(out, FractionalScale):
                raise QuatError("right ideal representative is not integral")
            self._nrd = out
        return self._nrd

    def nrd_generator(self):
        """Canonical totally positive generator of the reduced norm ideal."""
        if self._nrd_gen is None:
            self._nrd_gen = totally_positive_generator(self.nrd())
        return self._nrd_gen

    def inverse_lattice(self):
        g = self.nrd_generator()
        F = self.algebra.field
        return self.lattice.conjugate().scale_field(F.one() / g)

    def left_order(self):
        if self._left_order is None:
            lat = self.lattice.multiply(self.inverse_lattice())
            self._left_order = QuatOrder(lat, check=False)
        return self._left_order

    def small_elements(self, target):
        """Elements with Tr(nrd / nrd-generator) equal to target, sorted."""
        g = self.nrd_generator()
        gram = self.lattice.norm_form_gram(weight=g)
        vecs = short_vectors(gram, 2 * target)
        bas = self.lattice.basis()
        out = []
        for v in vecs:
            x = self.algebra.zero()
            for c, b in zip(v, bas):
                if c:
                    x = x + b * c
            out.append(x)
        return out

    def reduced_in_class(self):
        """A small integral ideal in the same left-multiplication class."""
        n = max(1, self.algebra.field.degree)
        t = n
        while True:
            elems = self.small_elements(t)
            if elems:
                x = elems[0]
                break
            t += 1
            if t > 64 * n:
                raise QuatError("no short representative found")
        g = self.nrd_generator()
        alpha = x.conjugate() * (self.algebra.field.one() / g)
        return RightIdeal(self.order, self.lattice.multiply_element_left(alpha),
                          check=False)

    def element_with_nrd_coprime(self, N):
        """An element whose nrd, divided by the nrd ideal, is coprime to N."""
        nu = self.nrd()
        n = max(1, self.algebra.field.degree)
        F = self.algebra.field
        for t in range(n, 256 * n):
            for x in self.small_elements(t):
                # (nrd x) = nu * c; c is coprime to N iff (nrd x) + nu*N = nu
                if Ideal.principal(F, x.nrd()) + nu * N == nu:
                    return x
        raise QuatError("no norm-coprime element found")


def isomorphism_witness(J, K):
    """alpha with alpha*J = K for right ideals over one order, or None."""
    F = J.algebra.field
    n = max(1, F.degree)
    C = K.lattice.multiply(J.inverse_lattice())
    gK = K.nrd_generator()
    gJ = J.nrd_generator()
    gamma = gK / gJ
    gram = C.norm_form_gram(weight=gamma)
    vecs = short_vectors(gram, 2 * n)
    bas = C.basis()
    for v in vecs:
        x = C.algebra.zero()
        for c, b in zip(v, bas):
            if c:
                x = x + b * c
        if x.nrd() == gamma:
            return x
    return None


class IdealClassSet:
    """Right ideal classes of a maximal order via neighbor search."""

    def __init__(self, order, reps, units, neighbor_prime):
        self.order = order
        self.reps = reps
        self.units = units
        self.neighbor_prime = neighbor_prime

    def __len__(self):
        return len(self.reps)

    def weights(self):
        return [len(u) for u in self.units]

    def mass(self):
        return sum(Fraction(1, w) for w in self.weights())


def smallest_splitting_prime(algebra, avoid=None):
    """Smallest prime (by label order) not dividing the algebra discriminant."""
    F = algebra.field
    D = algebra.discriminant_ideal()
    bound = 2
    while True:
        cands = [P for P in primes_of_norm_up_to(F, bound)
                 if D.valuation(P) == 0
                 and (avoid is None or avoid.valuation(P) == 0)]
        if cands:
            cands.sort(key=lambda P: P.prime_sort_key())
            return cands[0]
        bound *= 2


def right_ideal_classes(order, neighbor_prime=None):
    """All right ideal classes, found by a breadth-first neighbor walk.

    The Eichler mass of the result is checked against the closed formula, so
    an incomplete walk raises instead of returning a wrong class list.
    """
    B = order.algebra
    F = B.field
    if not order.is_maximal():
        raise NotMaximal("class enumeration needs a maximal order")
    q = neighbor_prime or smallest_splitting_prime(B)
    qnorm = q.norm()
    spl = SplittingMap(order, q)
    from .p1 import build_p1

    directions = build_p1(q).reps

    # short fingerprints: just enough to skip most failing isomorphism tests
    theta_len = 4
    classes = [RightIdeal(order, order.lattice, check=False)]
    left_orders = [order]
    thetas = [order.theta_fingerprint(theta_len)]
    queue = [0]
    while queue:
        idx = queue.pop(0)
        I = classes[idx]
        xi = I.element_with_nrd_coprime(q)
        for u in directions:
            J = _neighbor(order, I, xi, spl, q, u)
            found = False
            thJ = None
            for t, K in enumerate(classes):
                if thJ is None:
                    thJ = J.left_order().theta_fingerprint(theta_len)
                if thetas[t] != thJ:
                    continue
                if isomorphism_witness(J, K) is not None:
                    found = True
                    break
            if not found:
                Jr = J.reduced_in_class()
                classes.append(Jr)
                left_orders.append(Jr.left_order())
                thetas.append(left_orders[-1].theta_fingerprint(theta_len))
                queue.append(len(classes) - 1)
    units = [O.unit_norm_one() for O in left_orders]
    got = sum(Fraction(1, len(u)) for u in units)
    want = eichler_mass(F, B.discriminant_ideal())
    if got != want:
        raise QuatError(
            "class walk mass %s does not match Eichler mass %s" % (got, want))
    return IdealClassSet(order, classes, units, q)


def _neighbor(order, I, xi, spl, q, direction):
    """The neighbor {v in I : u . theta(xi^-1 v) = 0 mod q} for a direction u."""
    B = order.algebra
    F = B.field
    xinv = xi.inverse()
    bas = I.lattice.basis()
    u0, u1 = direction
    rows = []
    mods = []
    # each basis vector contributes the row  u . M(xi^-1 b): two residue entries
    entries = []
    for b in bas:
        M = spl.matrix_of(xinv * b)
        e0 = u0 * M[0][0] + u1 * M[1][0]
        e1 = u0 * M[0][1] + u1 * M[1][1]
        entries.append((e0, e1))
    if F.degree == 1:
        A_, B_, D_ = q.hnf_tuple()[0], 0, 1
    else:
        A_, B_, D_ = q.hnf_tuple()
    AD = A_ * D_
    for pos in range(2):
        if F.degree == 1:
            row = [int(entries[t][pos].coords()[0]) % AD for t in range(len(bas))]
            rows.append(row)
            mods.append(AD)
        else:
            # membership in the prime lattice as two congruences mod A*D
            rowa = []
            rowb = []
            for t in range(len(bas)):
                xa, xb = entries[t][pos].coords()
                rowa.append((int(xa) * D_) % AD)
                rowb.append((int(xb) * A_ - int(xa) * B_) % AD)
            rows.append(rowa)
            mods.append(AD)
            rows.append(rowb)
            mods.append(AD)
    n4 = len(bas)
    diag = []
    for r in range(len(rows)):
        col = [0] * len(rows)
        col[r] = mods[r]
        diag.append(col)
    ker = intmat.preimage_lattice(rows, diag, n4)
    cols = []
    for kv in ker:
        col = [0] * n4
        for j, c in enumerate(kv):
            if c:
                for t in range(n4):
                    col[t] += c * I.lattice.cols[j][t]
        cols.append(col)
    lat = QuatLattice(B, I.lattice.den, cols)
    J = RightIdeal(order, lat, check=False)
    if not (J.nrd() == I.nrd() * q):
        raise QuatError("neighbor has wrong reduced norm")
    return J


# ---------------------------------------------------------------------------
# residue splittings: order mod N  ->  2x2 matrices over Z_F/N


def _invert_fraction_matrix(m):
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j))
         for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            raise QuatError("basis matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat2_identity(F):
    return ((F.one(), F.zero()), (F.zero(), F.one()))


def mat2_zero(F):
    z = F.zero()
    return ((z, z), (z, z))


def mat2_mul(R, m, n):
    return (
        (R.reduce(m[0][0] * n[0][0] + m[0][1] * n[1][0]),
         R.reduce(m[0][0] * n[0][1] + m[0][1] * n[1][1])),
        (R.reduce(m[1][0] * n[0][0] + m[1][1] * n[1][0]),
         R.reduce(m[1][0] * n[0][1] + m[1][1] * n[1][1])),
    )


def mat2_det(R, m):
    return R.reduce(m[0][0] * m[1][1] - m[0][1] * m[1][0])


def mat2_scale(R, m, c):
    return (
        (R.reduce(m[0][0] * c), R.reduce(m[0][1] * c)),
        (R.reduce(m[1][0] * c), R.reduce(m[1][1] * c)),
    )


def mat2_add(R, m, n):
    return (
        (R.reduce(m[0][0] + n[0][0]), R.reduce(m[0][1] + n[0][1])),
        (R.reduce(m[1][0] + n[1][0]), R.reduce(m[1][1] + n[1][1])),
    )


class _LocalSplitting:
    """Splitting of an order modulo one prime power coprime to the disc."""

    def __init__(self, order, P, e):
        B = order.algebra
        F = B.field
        self.prime = P
        self.exponent = e
        Pe = ideal_power(P, e)
        self.level = Pe
        self.ring = ResidueRing(Pe)
        obas = order.basis()
        n4 = len(obas)
        # sublattice Pe*O in order-basis coordinates
        peo = []
        for g in Pe.basis_elements():
            for b in obas:
                x = b * g
                peo.append(_order_coords_int(order, x))
        self._peo = intmat.hnf_basis(peo)
        self._order = order
        s, r1, r2 = self._split_element(order, P, Pe, obas)
        w = self.ring.inverse(r1 - r2)
        E = (s - B.one() * r2) * w
        E = self._reduce_elem(E)
        if not self._same_mod(E * E, E):
            raise QuatError("idempotent construction failed")
        one = B.one()
        # rank-1: E is neither 0 nor 1 modulo P
        P1O = []
        for g in P.basis_elements():
            for b in obas:
                P1O.append(_order_coords_int(order, b * g))
        P1O = intmat.hnf_basis(P1O)
        cE = _order_coords_int(order, E)
        if not any(_reduce_vec(P1O, cE)):
            raise QuatError("idempotent is zero mod P")
        if not any(_reduce_vec(P1O, [a - b for a, b in
                                     zip(cE, _order_coords_int(order, one))])):
            raise QuatError("idempotent is scalar mod P")
        # left module V = (O/Pe) E, with a free basis (E, z E)
        vcols = [_order_coords_int(order, b * E) for b in obas]
        V = intmat.hnf_basis([list(c) for c in vcols] + [list(c) for c in self._peo])
        v2 = None
        for z in _sweep_elements(order):
            cand = self._reduce_elem(z * E)
            if self._spans(order, F, E, cand, V):
                v2 = cand
                break
        if v2 is None:
            raise QuatError("no module basis found for the splitting")
        self.v1 = E
        self.v2 = v2
        self._solve_cols = self._basis_solver(order, F)
        self.basis_matrices = [self._matrix_of_integral(b) for b in obas]
        self._verify(order, obas)

    def _split_element(self, order, P, Pe, obas):
        F = order.algebra.field
        RP = ResidueRing(P)
        trans = RP.elements()
        count = 0
        for cand in _sweep_elements(order):
            count += 1
            if count > 300000:
                break
            t = cand.trd()
            n = cand.nrd()
            roots = []
            for r in trans:
                if P.contains(r * r - t * r + n):
                    roots.append(r)
            if len(roots) == 2:
                # Newton-lift the first root to the full precision
                r = roots[0]
                steps = 1
                while (1 << steps) < self.exponent:
                    steps += 1
                for _ in range(steps + 1):
                    fr = r * r - t * r + n
                    fpr = r + r - t
                    r = self.ring.reduce(r - fr * self.ring.inverse(fpr))
                if not Pe.contains(r * r - t * r + n):
                    raise QuatError("root lifting failed")
                return cand, r, self.ring.reduce(t - r)
        raise QuatError("no split-charpoly element found mod %s" % P.prime_label())

    def _reduce_elem(self, x):
        c = _order_coords_int(self._order, x)
        c = _reduce_vec(self._peo, c)
        return _order_elem(self._order, c)

    def _same_mod(self, x, y):
        c = _order_coords_int(self._order, x - y)
        return not any(_reduce_vec(self._peo, c))

    def _spans(self, order, F, v1, v2, V):
        gens = [v1, v2]
        if F.degree == 2:
            w = F.omega()
            gens += [v1 * w, v2 * w]
        cols = [_order_coords_int(order, g) for g in gens]
        span = intmat.hnf_basis([list(c) for c in cols] +
                                [list(c) for c in self._peo])
        return all(intmat.lattice_contains(span, list(c)) for c in V)

    def _basis_solver(self, order, F):
        gens = [self.v1, self.v2]
        if F.degree == 2:
            w = F.omega()
            gens = [self.v1, self.v1 * w, self.v2, self.v2 * w]
        cols = [_order_coords_int(order, g) for g in gens]
        return [list(c) for c in cols] + [list(c) for c in self._peo]

    def _module_coords(self, x):
        """x in V written as alpha v1 + beta v2 with residue coefficients."""
        F = self._order.algebra.field
        target = _order_coords_int(self._order, x)
        sol = intmat.solve_int(intmat.from_columns(self._solve_cols), target)
        if sol is None:
            raise QuatError("element is outside the split module")
        if F.degree == 1:
            alpha = F.element(sol[0])
            beta = F.element(sol[1])
        else:
            alpha = F.element(sol[0]) + F.omega() * sol[1]
            beta = F.element(sol[2]) + F.omega() * sol[3]
        return self.ring.reduce(alpha), self.ring.reduce(beta)

    def _matrix_of_integral(self, b):
        a1, b1 = self._module_coords(b * self.v1)
        a2, b2 = self._module_coords(b * self.v2)
        return ((a1, a2), (b1, b2))

    def _verify(self, order, obas):
        R = self.ring
        F = order.algebra.field
        n4 = len(obas)
        inv = _order_basis_inverse(order)
        one_coords = intmat.mat_vec(inv, [Fraction(c) for c in
                                          quat_to_vector(order.algebra.one())])
        acc = mat2_zero(F)
        for k in range(n4):
            c = one_coords[k]
            if c:
                if c.denominator != 1:
                    raise QuatError("1 has fractional order coordinates")
                acc = mat2_add(R, acc, mat2_scale(R, self.basis_matrices[k],
                                                  F.element(int(c))))
        ident = tuple(tuple(R.reduce(x) for x in row) for row in mat2_identity(F))
        if acc != ident:
            raise QuatError("splitting does not send 1 to the identity")
        for s in range(n4):
            for t in range(n4):
                prod = obas[s] * obas[t]
                M = self._matrix_of_rational(order, prod)
                if M != mat2_mul(R, self.basis_matrices[s],
                                 self.basis_matrices[t]):
                    raise QuatError("splitting is not multiplicative")
        for s in range(n4):
            M = self.basis_matrices[s]
            if mat2_det(R, M) != R.reduce(obas[s].nrd()):
                raise QuatError("splitting determinant mismatch")
            if R.reduce(M[0][0] + M[1][1]) != R.reduce(obas[s].trd()):
                raise QuatError("splitting trace mismatch")

    def _matrix_of_rational(self, order, x):
        inv = _order_basis_inverse(order)
        co = intmat.mat_vec(inv, [Fraction(c) for c in quat_to_vector(x)])
        F = order.algebra.field
        R = self.ring
        acc = mat2_zero(F)
        for k, c in enumerate(co):
            if c:
                if c.denominator != 1:
                    raise QuatError("integral element expected")
                acc = mat2_add(R, acc, mat2_scale(R, self.basis_matrices[k],
                                                  F.element(int(c))))
        return acc


_ORDER_INV_CACHE = {}


def _order_basis_inverse(order):
    key = (order.lattice.den, order.lattice.cols)
    got = _ORDER_INV_CACHE.get(key)
    if got is None:
        mat = [[Fraction(c, order.lattice.den) for c in col]
               for col in order.lattice.cols]
        got = _invert_fraction_matrix(intmat.transpose(mat))
        _ORDER_INV_CACHE[key] = got
    return got


def _order_coords_int(order, x):
    inv = _order_basis_inverse(order)
    co = intmat.mat_vec(inv, [Fraction(c) for c in quat_to_vector(x)])
    out = []
    for c in co:
        if c.denominator != 1:
            raise QuatError("element has fractional order coordinates")
        out.append(int(c))
    return out


def _order_elem(order, coords):
    bas = order.basis()
    x = order.algebra.zero()
    for c, b in zip(coords, bas):
        if c:
            x = x + b * c
    return x


def _sweep_elements(order):
    """Deterministic stream of small order elements for search loops."""
    from itertools import count, product

    bas = order.basis()
    n4 = len(bas)
    for bound in count(1):
        for tup in product(range(bound + 1), repeat=n4):
            if max(tup) != bound:
                continue
            x = order.algebra.zero()
            for c, b in zip(tup, bas):
                if c:
                    x = x + b * c
            yield x


class SplittingMap:
    """Ring map from an order onto 2x2 residue matrices at a coprime level."""

    def __init__(self, order, level):
        if isinstance(level, PrimeIdeal) or isinstance(level, Ideal):
            pass
        else:
            raise QuatError("level must be an ideal")
        self.order = order
        self.algebra = order.algebra
        F = self.algebra.field
        self.level = level if not isinstance(level, PrimeIdeal) else \
            Ideal(F, level.cols, _trusted=True)
        self.ring = ResidueRing(self.level)
        D = self.algebra.discriminant_ideal()
        self.factors = factor_ideal(self.level)
        for P, _ in self.factors:
            if D.valuation(P) != 0:
                raise QuatError(
                    "level shares the prime %s with the algebra discriminant"
                    % P.prime_label())
        self.locals = [_LocalSplitting(order, P, e) for P, e in self.factors]
        if len(self.locals) > 1:
            self.idems = crt_idempotents([loc.level for loc in self.locals])
        else:
            self.idems = [F.one()]

    def matrix_of(self, x):
        """The image of a level-integral element as a reduced 2x2 matrix."""
        F = self.algebra.field
        R = self.ring
        if not self.locals:
            return mat2_zero(F)
        inv = _order_basis_inverse(self.order)
        co = intmat.mat_vec(inv, [Fraction(c) for c in quat_to_vector(x)])
        den = 1
        for c in co:
            den = _lcm(den, c.denominator)
        ints = [int(c * den) for c in co]
        acc = mat2_zero(F)
        for loc, e in zip(self.locals, self.idems):
            local = mat2_zero(F)
            for k, c in enumerate(ints):
                if c:
                    local = mat2_add(loc.ring, local,
                                     mat2_scale(loc.ring, loc.basis_matrices[k],
                                                F.element(c)))
            acc = mat2_add(R, acc, mat2_scale(R, local, e))
        if den != 1:
            acc = mat2_scale(R, acc, self.ring.inverse(F.element(den)))
        return acc


def two_sided_radical(order, P):
    """The maximal two-sided ideal above a prime dividing the discriminant."""
    # depends only on the order and the prime, and the coset search below is
    # costly, so repeated calls are served from a cache on the order
    cache = getattr(order, "_radical_cache", None)
    if cache is None:
        cache = {}
        order._radical_cache = cache
    if P.label() in cache:
        return cache[P.label()]
    B = order.algebra
    F = B.field
    if B.discriminant_ideal().valuation(P) != 1:
        raise QuatError("radical needs a prime dividing the discriminant once")
    obas = order.basis()
    PO = []
    for g in P.basis_elements():
        for b in obas:
            PO.append(_order_coords_int(order, b * g))
    PO = intmat.hnf_basis(PO)
    diag = [PO[j][j] for j in range(len(PO))]
    from itertools import product as iproduct

    gens = [list(c) for c in PO]
    for tup in iproduct(*[range(d) for d in diag]):
        if not any(tup):
            continue
        x = _order_elem(order, list(tup))
        if P.contains(x.nrd()):
            gens.append(list(tup))
    ker = intmat.hnf_basis(gens)
    # back to ambient coordinates
    cols = []
    for kv in ker:
        col = [0] * len(kv)
        for j, c in enumerate(kv):
            if c:
                for t in range(len(kv)):
                    col[t] += c * order.lattice.cols[j][t]
        cols.append(col)
    J = QuatLattice(B, order.lattice.den, cols)
    plat = QuatLattice.from_elements(
        B, [b * g for g in P.basis_elements() for b in obas])
    if not (J.multiply(J) == plat):
        raise QuatError("radical square is not P * O")
    # canonicalization may have reduced J.den, so compare over a common scale
    num = quat_lattice_index(order.lattice, J)
    if num != P.norm() ** 2:
        raise QuatError("radical has wrong index")
    cache[P.label()] = J
    return J


def quat_lattice_index(sup, sub):
    """[sup : sub] for full-rank lattices over possibly different denominators."""
    L = _lcm(sup.den, sub.den)
    a = [[t * (L // sup.den) for t in c] for c in sup.cols]
    b = [[t * (L // sub.den) for t in c] for c in sub.cols]
    return intmat.lattice_index(a, b)


# ---------------------------------------------------------------------------
# shipped order configs


def _parse_coord_token(F, token):
    if F.degree == 1:
        return F.element(Fraction(token))
    a, b = token.split(",")
    return F.element(Fraction(a), Fraction(b))


def load_order_config(path):
    """Load a maximal order config, re-verifying every claim it makes.

    Raises WrongRamification, NonIntegralBasis, NotAnOrder, or NotMaximal
    with a message naming the failed check.
    """
    from .field import make_field, parse_config_text

    with open(path, "r", encoding="ascii") as fh:
        cfg = parse_config_text(fh.read())
    for key in ("field_d", "a", "b", "disc_label", "basis_count"):
        if key not in cfg:
            raise QuatError("order config %s is missing %r" % (path, key))
    F = make_field(int(cfg["field_d"]))
    a = _parse_coord_token(F, cfg["a"])
    b = _parse_coord_token(F, cfg["b"])
    B = QuaternionAlgebra(F, a, b)
    if not B.is_totally_definite():
        raise WrongRamification("algebra in %s is not totally definite" % path)
    D = B.discriminant_ideal()
    if D.label() != cfg["disc_label"]:
        raise WrongRamification(
            "declared discriminant %s, computed %s"
            % (cfg["disc_label"], D.label()))
    count = int(cfg["basis_count"])
    if count != 4 * F.degree:
        raise QuatError("basis_count %d does not match the field degree" % count)
    elems = []
    for t in range(count):
        tokens = cfg["basis_%d" % t].split()
        if len(tokens) != 4:
            raise QuatError("basis_%d needs 4 coordinates" % t)
        elems.append(QuatElement(B, *[_parse_coord_token(F, tk)
                                      for tk in tokens]))
    lattice = QuatLattice.from_elements(B, elems)
    order = QuatOrder(lattice, check=True)
    if order.discriminant_squared() != D * D:
        raise NotMaximal(
            "order in %s has reduced discriminant %s, algebra has %s"
            % (path, order.reduced_discriminant().label(), D.label()))
    return order


def shipped_order_dir():
    import os

    return os.path.join(os.path.dirname(os.path.abspath(__file__)),
                        "data", "orders")


def shipped_order_names():
    import os

    return sorted(f[:-4] for f in os.listdir(shipped_order_dir())
                  if f.endswith(".cfg"))


def load_shipped_order(name):
    import os

    if not name.endswith(".cfg"):
        name += ".cfg"
    return load_order_config(os.path.join(shipped_order_dir(), name))
