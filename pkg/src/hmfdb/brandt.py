"""Spaces of functions on ideal classes with level structure.

A basis element is a pair (ideal class, unit orbit on the projective line
modulo the level).  Hecke operators at good primes are assembled from norm
controlled elements between class representatives; a slower pair-by-pair
construction of the same operators is kept as an independent cross check.
Involutions at primes dividing the level or the algebra discriminant act on
pairs (ideal, kernel sublattice) and are re-identified against the fixed
class representatives after each step.

All transports into 2x2 residue matrices go through a single splitting of
the base order modulo the level, composed with conjugation by per-class
elements of norm coprime to the level.  This keeps every map exact: there is
no floating point anywhere in this module.
"""

from fractions import Fraction

from . import intmat
from . import heckelinalg as hl
from .ideals import (Ideal, PrimeIdeal, factor_ideal, ideal_power,
                     primes_of_norm_up_to, totally_positive_generator,
                     element_from_coords)
from .lattice import short_vectors
from .p1 import P1Error, build_p1
from .quatalg import (QuatError, QuatLattice, QuatOrder, RightIdeal,
                      SplittingMap, isomorphism_witness, quat_lattice_index,
                      quat_to_vector, right_ideal_classes, two_sided_radical)


class BrandtError(QuatError):
    pass


def good_primes(field, avoid, count):
    """First primes coprime to the given ideal, in label order."""
    out = []
    bound = 2
    while len(out) < count:
        cands = [P for P in primes_of_norm_up_to(field, bound)
                 if avoid.valuation(P) == 0]
        cands.sort(key=lambda P: P.prime_sort_key())
        out = cands[:count]
        bound *= 2
    return out


def _coprime_representative(ideal, N):
    """A right ideal in the same class whose reduced norm is coprime to N."""
    nu = ideal.nrd()
    if nu.is_coprime(N):
        return ideal, None
    x = ideal.element_with_nrd_coprime(N)
    g = ideal.nrd_generator()
    alpha = x.conjugate() * (ideal.algebra.field.one() / g)
    moved = RightIdeal(ideal.order,
                       ideal.lattice.multiply_element_left(alpha),
                       check=False)
    if not moved.nrd().is_coprime(N):
        raise BrandtError("norm of the moved representative is not coprime")
    return moved, alpha


def _membership_rows(values, N):
    """Congruence rows expressing that field elements lie in the ideal N.

    values is a list of columns; each column is a list of field elements, one
    per unknown integer coordinate.  Returns (rows, moduli) over the unknowns.
    """
    F = N.field
    if F.degree == 1:
        A = int(N.hnf_tuple()[0])
        rows = []
        mods = []
        for col in values:
            rows.append([int(v.coords()[0]) % A for v in col])
            mods.append(A)
        return rows, mods
    A, B, D = N.hnf_tuple()
    AD = int(A) * int(D)
    rows = []
    mods = []
    for col in values:
        rowa = []
        rowb = []
        for v in col:
            xa, xb = v.coords()
            rowa.append((int(xa) * int(D)) % AD)
            rowb.append((int(xb) * int(A) - int(xa) * int(B)) % AD)
        rows.append(rowa)
        mods.append(AD)
        rows.append(rowb)
        mods.append(AD)
    return rows, mods


def _kernel_sublattice(base, rows, mods):
    """Sublattice of the base where the congruence rows all vanish."""
    n4 = len(base.cols)
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
                    col[t] += c * base.cols[j][t]
        cols.append(col)
    return QuatLattice(base.algebra, base.den, cols)


class BrandtModule:
    """Functions on pairs (ideal class, projective orbit) at a fixed level."""

    def __init__(self, order, level, classes=None):
        if not isinstance(order, QuatOrder):
            raise BrandtError("module needs a maximal order")
        self.order = order
        self.algebra = order.algebra
        F = self.algebra.field
        self.field = F
        if not isinstance(level, Ideal):
            raise BrandtError("level must be an integral ideal")
        self.level = level
        self.disc = self.algebra.discriminant_ideal()
        if not level.is_coprime(self.disc):
            raise BrandtError("level shares a prime with the discriminant")
        cls = classes or right_ideal_classes(order)
        self._class_set = cls
        self._trivial_level = (level == Ideal.unit_ideal(F))

        # class representatives with norm prime to the level, with their
        # conjugated unit groups
        self.reps = []
        self.units = []
        for rep, us in zip(cls.reps, cls.units):
            moved, alpha = _coprime_representative(rep, level)
            if alpha is not None:
                ainv = alpha.inverse()
                us = [alpha * u * ainv for u in us]
                for u in us:
                    if u.nrd() != F.one():
                        raise BrandtError("conjugated unit lost its norm")
            self.reps.append(moved)
            self.units.append(us)
        self.class_count = len(self.reps)
        # coprime switching changes reps and units per level, so cached norm
        # elements are keyed by these fingerprints rather than by class index
        self._rep_keys = [(rep.lattice.den, rep.lattice.cols)
                          for rep in self.reps]
        self._unit_keys = [tuple(sorted(tuple(quat_to_vector(u)) for u in us))
                           for us in self.units]

        if self._trivial_level:
            self.p1 = None
            self.splitting = None
            self._xi = [None] * self.class_count
            self.basis = [(i, (0,), 0, len(self.units[i]))
                          for i in range(self.class_count)]
            self._orbit_lookup = [{0: i} for i in range(self.class_count)]
        else:
            self.p1 = build_p1(level)
            self.splitting = SplittingMap(order, level)
            self._xi = [rep.element_with_nrd_coprime(level)
                        for rep in self.reps]
            self.basis = []
            self._orbit_lookup = []
            for i in range(self.class_count):
                perms = [self.p1.gl2_action(self._unit_matrix(i, u))
                         for u in self.units[i]]
                seen = {}
                orbits = []
                for pos in range(self.p1.size):
                    if pos in seen:
                        continue
                    orbit = sorted({perm[pos] for perm in perms} | {pos})
                    for q in orbit:
                        seen[q] = len(orbits)
                    orbits.append(tuple(orbit))
                lookup = {}
                for orbit in orbits:
                    if len(self.units[i]) % len(orbit):
                        raise BrandtError("orbit size does not divide the unit order")
                    w = len(self.units[i]) // len(orbit)
                    idx = len(self.basis)
                    self.basis.append((i, orbit, orbit[0], w))
                    for q in orbit:
                        lookup[q] = idx
                self._orbit_lookup.append(lookup)
        self.dimension = len(self.basis)
        self._hecke_cache = {}

    # -- transports --------------------------------------------------------

    def _transport_matrix(self, j, alpha, i):
        """Residue matrix of xi_j^-1 * alpha * xi_i."""
        x = self._xi[j].inverse() * alpha * self._xi[i]
        return self.splitting.matrix_of(x)

    def _unit_matrix(self, i, u):
        x = self._xi[i].inverse() * u * self._xi[i]
        return self.splitting.matrix_of(x)

    def _theta_matrices(self, i, elements):
        xi_inv = self._xi[i].inverse()
        return [self.splitting.matrix_of(xi_inv * v) for v in elements]

    def weights(self):
        return [b[3] for b in self.basis]

    def _act_position(self, pos, mat):
        a, b = self.p1.reps[pos]
        na = a * mat[0][0] + b * mat[1][0]
        nb = a * mat[0][1] + b * mat[1][1]
        return self.p1.normalize(na, nb)

    # -- pair lattices -----------------------------------------------------

    def _pair_lattice(self, i, pos):
        """The kernel sublattice of the class representative at a point."""
        I = self.reps[i]
        bas = I.lattice.basis()
        mats = self._theta_matrices(i, bas)
        a, b = self.p1.reps[pos]
        cols = []
        for c in range(2):
            col = [a * M[0][c] + b * M[1][c] for M in mats]
            cols.append(col)
        rows, mods = _membership_rows(cols, self.level)
        lat = _kernel_sublattice(I.lattice, rows, mods)
        # the kernel of a unimodular row is free of rank 2 over the residue
        # ring, so its index is the square of the level norm
        if quat_lattice_index(I.lattice, lat) != self.level.norm() ** 2:
            raise BrandtError("kernel sublattice has the wrong index")
        return lat

    def _extract_point(self, t, sub):
        """The projective point whose kernel sublattice inside class t is sub."""
        F = self.field
        bas = sub.basis()
        mats = self._theta_matrices(t, bas)
        if F.degree == 1:
            unknowns = [(F.one(), F.zero()), (F.zero(), F.one())]
        else:
            w = F.omega()
            unknowns = [(F.one(), F.zero()), (w, F.zero()),
                        (F.zero(), F.one()), (F.zero(), w)]
        cols = []
        for M in mats:
            for c in range(2):
                col = [u0 * M[0][c] + u1 * M[1][c] for u0, u1 in unknowns]
                cols.append(col)
        rows, mods = _membership_rows(cols, self.level)
        nk = len(unknowns)
        diag = []
        for r in range(len(rows)):
            col = [0] * len(rows)
            col[r] = mods[r]
            diag.append(col)
        ker = intmat.preimage_lattice(rows, diag, nk)
        combos = [list(v) for v in ker]
        for a in range(len(ker)):
            for b in range(a + 1, len(ker)):
                combos.append([x + y for x, y in zip(ker[a], ker[b])])
        for a in range(len(ker)):
            for b in range(len(ker)):
                if a != b:
                    combos.append([x + 2 * y for x, y in zip(ker[a], ker[b])])
        for vec in combos:
            if F.degree == 1:
                x0 = F.element(vec[0])
                x1 = F.element(vec[1])
            else:
                x0 = element_from_coords(F, (vec[0], vec[1]))
                x1 = element_from_coords(F, (vec[2], vec[3]))
            try:
                pos = self.p1.normalize(x0, x1)
            except P1Error:
                continue
            if self._pair_lattice(t, pos) == sub:
                return pos
        raise BrandtError("no projective point reproduces the sublattice")

    def _identify_class(self, J):
        """Index and witness beta with beta * J = representative."""
        for t in range(self.class_count):
            beta = isomorphism_witness(J, self.reps[t])
            if beta is not None:
                return t, beta
        raise BrandtError("ideal matches no known class")

    # -- Hecke operators ---------------------------------------------------

    def _check_hecke_prime(self, P):
        if not isinstance(P, PrimeIdeal):
            raise BrandtError("Hecke operators are indexed by primes")
        if self.disc.valuation(P) != 0 or self.level.valuation(P) != 0:
            raise BrandtError(
                "prime %s divides the level or the discriminant" % P.prime_label())

    def _norm_elements(self, i, j, P):
        """Class representatives of norm-controlled elements from i to j.

        Elements alpha with alpha * I_i inside I_j of prime colength, one per
        orbit under right multiplication by the units of class i, with exact
        reduced norm equal to the chosen generator.

        The search depends only on the two representatives, the unit group of
        the source class, and the prime, so results are shared across levels
        through a cache on the underlying class set.
        """
        cache = getattr(self._class_set, "_norm_element_cache", None)
        if cache is None:
            cache = {}
            self._class_set._norm_element_cache = cache
        cache_key = (P.label(), self._rep_keys[i], self._rep_keys[j],
                     self._unit_keys[i])
        if cache_key in cache:
            return list(cache[cache_key])
        gp = totally_positive_generator(Ideal(self.field, P.cols, _trusted=True))
        gi = self.reps[i].nrd_generator()
        gj = self.reps[j].nrd_generator()
        gamma = gp * gj / gi
        C = self.reps[j].lattice.multiply(self.reps[i].inverse_lattice())
        n = max(1, self.field.degree)
        gram = C.norm_form_gram(weight=gamma)
        vecs = short_vectors(gram, 2 * n)
        bas = C.basis()
        found = {}
        for v in vecs:
            x = self.algebra.zero()
            for c, bb in zip(v, bas):
                if c:
                    x = x + bb * c
            if x.nrd() != gamma:
                continue
            key = None
            for u in self.units[i]:
                m = x * u
                for s in (m, m.scale(-1)):
                    k = tuple(quat_to_vector(s))
                    if key is None or k < key:
                        key = k
            if key not in found:
                found[key] = x
        cache[cache_key] = tuple(found.values())
        return list(found.values())

    def hecke_matrix(self, P):
        """Matrix of the Hecke operator at a prime not dividing level or disc."""
        key = P.label()
        if key in self._hecke_cache:
            return self._hecke_cache[key]
        self._check_hecke_prime(P)
        T = [[0] * self.dimension for _ in range(self.dimension)]
        for j in range(self.class_count):
            total = 0
            moves = []
            for i in range(self.class_count):
                alphas = self._norm_elements(i, j, P)
                total += len(alphas)
                moves.append(alphas)
            if total != P.norm() + 1:
                raise BrandtError(
                    "found %d norm elements at %s, expected %d"
                    % (total, P.prime_label(), P.norm() + 1))
            if self._trivial_level:
                row = self._orbit_lookup[j][0]
                for i in range(self.class_count):
                    T[row][self._orbit_lookup[i][0]] += len(moves[i])
                continue
            mats = [[self._transport_matrix(j, alpha, i) for alpha in moves[i]]
                    for i in range(self.class_count)]
            for (ci, orbit, pos, w) in [b for b in self.basis if b[0] == j]:
                row = self._orbit_lookup[j][pos]
                for i in range(self.class_count):
                    for M in mats[i]:
                        npos = self._act_position(pos, M)
                        T[row][self._orbit_lookup[i][npos]] += 1
        self._hecke_cache[key] = T
        return T

    def hecke_matrix_by_pairs(self, P):
        """The same Hecke operator built neighbor by neighbor.

        Independent of the norm-element method: sublattices come from kernel
        directions, classes are re-identified by isomorphism search, and the
        moved level structure is re-extracted from its lattice.  Meant as a
        cross check on small spaces.
        """
        self._check_hecke_prime(P)
        spl = SplittingMap(self.order, Ideal(self.field, P.cols, _trusted=True))
        from .quatalg import _neighbor

        directions = build_p1(P).reps
        T = [[0] * self.dimension for _ in range(self.dimension)]
        for j in range(self.class_count):
            I = self.reps[j]
            xi = I.element_with_nrd_coprime(P)
            subs = []
            for u in directions:
                K = _neighbor(self.order, I, xi, spl, P, u)
                t, beta = self._identify_class(K)
                subs.append((K, t, beta))
            for (ci, orbit, pos, w) in [b for b in self.basis if b[0] == j]:
                row = self._orbit_lookup[j][pos]
                if self._trivial_level:
                    for K, t, beta in subs:
                        T[row][self._orbit_lookup[t][0]] += 1
                    continue
                R = self._pair_lattice(j, pos)
                for K, t, beta in subs:
                    moved = R.intersect(K.lattice).multiply_element_left(beta)
                    npos = self._extract_point(t, moved)
                    T[row][self._orbit_lookup[t][npos]] += 1
        return T

    # -- involutions -------------------------------------------------------

    def atkin_lehner(self, P):
        """Involution matrix at a prime dividing the level or discriminant."""
        if not isinstance(P, PrimeIdeal):
            raise BrandtError("involutions are indexed by primes")
        in_disc = self.disc.valuation(P) != 0
        e = self.level.valuation(P)
        if in_disc and e:
            raise BrandtError("prime cannot divide both level and discriminant")
        if not in_disc and not e:
            raise BrandtError(
                "involution prime must divide the level or the discriminant")
        W = [[0] * self.dimension for _ in range(self.dimension)]
        if in_disc:
            radical = two_sided_radical(self.order, P)
        else:
            g = totally_positive_generator(
                ideal_power(Ideal(self.field, P.cols, _trusted=True), e))
        for idx, (i, orbit, pos, w) in enumerate(self.basis):
            I = self.reps[i]
            if self._trivial_level:
                R = None
            else:
                R = self._pair_lattice(i, pos)
            if in_disc:
                new_lat = I.lattice.multiply(radical)
                new_R = R.multiply(radical) if R is not None else None
            else:
                scaled = I.lattice.scale_field(g)
                new_lat = R.add(scaled)
                new_R = R.intersect(scaled)
            J = RightIdeal(self.order, new_lat, check=False)
            t, beta = self._identify_class(J)
            if self._trivial_level:
                target = self._orbit_lookup[t][0]
            else:
                moved = new_R.multiply_element_left(beta)
                npos = self._extract_point(t, moved)
                target = self._orbit_lookup[t][npos]
            if self.basis[target][3] != w:
                raise BrandtError("involution does not preserve weights")
            W[target][idx] = 1
        for row in W:
            if sum(row) != 1:
                raise BrandtError("involution image is not a permutation")
        sq = hl.mat_mul(W, W)
        if not hl.mat_eq(sq, hl.identity_matrix(self.dimension)):
            raise BrandtError("involution does not square to the identity")
        return W

    # -- Eisenstein and cusp parts ----------------------------------------

    def eisenstein_and_cusp(self, max_primes=6):
        """Echelonized Eisenstein space and its stable cusp complement."""
        avoid = self.level * self.disc
        primes = good_primes(self.field, avoid, max_primes)
        space = hl.full_space(self.dimension)
        used = 0
        stable = 0
        for P in primes:
            T = self.hecke_matrix(P)
            shifted = [[Fraction(T[r][c]) - Fraction(int(r == c)) * (P.norm() + 1)
                        for c in range(self.dimension)]
                       for r in range(self.dimension)]
            nxt = hl.space_intersect(space, hl.operator_kernel(shifted))
            used += 1
            stable = stable + 1 if len(nxt) == len(space) else 0
            space = nxt
            if used >= 3 and stable >= 1:
                break
        ones = tuple(Fraction(1) for _ in range(self.dimension))
        if self.dimension and not hl.space_contains(space, ones):
            raise BrandtError("constant function missing from the stable space")
        diag = [Fraction(1, b[3]) for b in self.basis]
        cusp = hl.orthogonal_complement(space, diag, self.dimension)
        if len(space) + len(cusp) != self.dimension:
            raise BrandtError("stable space and complement do not fill the space")
        return space, cusp

    def cusp_space(self):
        return self.eisenstein_and_cusp()[1]

    def hecke_on_cusp(self, P, cusp=None):
        if cusp is None:
            cusp = self.cusp_space()
        T = self.hecke_matrix(P)
        mat = [[Fraction(x) for x in row] for row in T]
        return hl.restrict_operator(mat, cusp)
