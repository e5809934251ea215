"""Per-level computation chain and whole-database orchestration.

One level runs: module construction, Hecke operators on the cusp part,
old space recovery through characteristic polynomial kernels against lower
levels, decomposition of the new part into irreducible constituents, exact
eigensystems over each Hecke field, and involution signs.  Levels must be
processed in norm-increasing order so that every proper divisor of a level
is available when that level runs; build_database owns that schedule.

All results are exact; timings are the only floats and never enter records.
"""

import time
from fractions import Fraction

from . import heckelinalg as hl
from .brandt import BrandtModule
from .ideals import (divisor_ideals, factor_ideal, ideals_of_norm,
                     primes_of_norm_up_to)
from .quatalg import QuatError, load_shipped_order, right_ideal_classes


class PipelineError(QuatError):
    pass


def eigen_prime_table(field, avoid, bound):
    """Primes of norm at most bound, coprime to avoid, in label order."""
    out = [P for P in primes_of_norm_up_to(field, bound)
           if avoid.valuation(P) == 0]
    out.sort(key=lambda P: P.prime_sort_key())
    return out


class Constituent:
    """One irreducible block of the new space with its exact eigensystem."""

    __slots__ = ("poly", "dim", "eigenvalues", "al_signs")

    def __init__(self, poly, dim, eigenvalues, al_signs):
        self.poly = poly
        self.dim = dim
        self.eigenvalues = eigenvalues
        self.al_signs = al_signs


class LevelData:
    """Everything computed for one level of one algebra."""

    __slots__ = ("level", "label", "dim", "eis_dim", "cusp", "cusp_dim",
                 "hecke", "al", "old_dim", "new", "new_dim", "constituents",
                 "timings", "prime_labels")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw.get(k))


def _cusp_gram(module, cusp):
    """Gram matrix of the stabilizer-weighted pairing on the cusp basis."""
    diag = [Fraction(1, b[3]) for b in module.basis]
    r = len(cusp)
    return [[sum(cusp[a][x] * cusp[b][x] * diag[x]
                 for x in range(module.dimension))
             for b in range(r)] for a in range(r)]


def _old_space_at_prime(ops, lower_ops, expected, labels):
    """Old subspace from one level divisor, by the kernel stopping rule.

    Intersects kernels of charpoly(T_q on the lower space)(T_q here) over
    successive primes until the dimension reaches the expected value; going
    below it, or exhausting the primes above it, is a hard error.
    """
    dim = len(next(iter(ops.values())))
    space = hl.full_space(dim)
    for label in labels:
        if label not in ops or label not in lower_ops:
            continue
        chi = hl.charpoly(lower_ops[label])
        applied = hl.poly_eval_matrix(chi, ops[label])
        space = hl.space_intersect(space, hl.operator_kernel(applied))
        if len(space) == expected:
            return space
        if len(space) < expected:
            raise PipelineError(
                "old space fell to dimension %d, expected %d"
                % (len(space), expected))
    raise PipelineError(
        "old space stabilized at dimension %d above the expected %d"
        % (len(space), expected))


def build_level(order, classes, level, prime_bound, lower):
    """Full computation for one level; lower maps divisor labels to LevelData."""
    timings = {}
    t0 = time.monotonic()
    F = order.algebra.field
    disc = order.algebra.discriminant_ideal()
    if not disc.is_coprime(level):
        raise PipelineError("level must be coprime to the algebra discriminant")
    module = BrandtModule(order, level, classes=classes)
    timings["module"] = time.monotonic() - t0

    t0 = time.monotonic()
    eis, cusp = module.eisenstein_and_cusp()
    cusp_dim = len(cusp)
    table = eigen_prime_table(F, disc * level, prime_bound)
    hecke = {}
    for P in table:
        mat = [[Fraction(x) for x in row] for row in module.hecke_matrix(P)]
        hecke[P.prime_label()] = hl.restrict_operator(mat, cusp) if cusp else []
    al = {}
    for P, e in factor_ideal(disc * level):
        mat = [[Fraction(x) for x in row] for row in module.atkin_lehner(P)]
        if disc.valuation(P):
            # the radical swap acts by the negative of the involution
            # eigenvalue at ramified primes
            mat = hl.mat_scale(mat, Fraction(-1))
        al[P.prime_label()] = hl.restrict_operator(mat, cusp) if cusp else []
    timings["operators"] = time.monotonic() - t0

    t0 = time.monotonic()
    labels = [P.prime_label() for P in table]
    old_total = []
    if cusp_dim:
        for P, e in factor_ideal(level):
            down1 = level.divide_exact(P)
            low1 = lower.get(down1.label())
            if low1 is None:
                raise PipelineError(
                    "missing lower level %s; schedule levels by norm" % down1.label())
            expected = 2 * low1.cusp_dim
            if e >= 2:
                down2 = down1.divide_exact(P)
                low2 = lower.get(down2.label())
                if low2 is None:
                    raise PipelineError(
                        "missing lower level %s; schedule levels by norm"
                        % down2.label())
                expected -= low2.cusp_dim
            if expected == 0:
                continue
            piece = _old_space_at_prime(hecke, low1.hecke, expected, labels)
            old_total = hl.space_sum(old_total, piece)
    old_dim = len(old_total)
    if old_total:
        gram = _cusp_gram(module, cusp)
        rows = [hl.mat_vec(gram, list(v)) for v in old_total]
        new = hl.operator_kernel(rows)
    else:
        new = hl.full_space(cusp_dim)
    new_dim = len(new)
    timings["oldnew"] = time.monotonic() - t0

    t0 = time.monotonic()
    constituents = []
    if new_dim:
        ops_new = {lab: hl.restrict_operator(hecke[lab], new) for lab in labels}
        al_new = {lab: hl.restrict_operator(al[lab], new) for lab in al}
        t, f, combo = hl.splitting_element([ops_new[lab] for lab in labels],
                                           new_dim)
        for g, basis in hl.simple_pieces(t, f):
            if any(c.denominator != 1 for c in g):
                raise PipelineError("constituent polynomial is not integral")
            t_piece = hl.restrict_operator(t, basis)
            op_pieces = [hl.restrict_operator(ops_new[lab], basis)
                         for lab in labels]
            eig = hl.cyclic_eigensystem(t_piece, op_pieces, g)
            eigenvalues = dict(zip(labels, eig))
            al_signs = {}
            for lab in sorted(al_new):
                w_piece = hl.restrict_operator(al_new[lab], basis)
                d = len(basis)
                sign = w_piece[0][0]
                if not hl.mat_eq(w_piece, hl.mat_scale(hl.identity_matrix(d),
                                                       sign)):
                    raise PipelineError("involution is not scalar on a constituent")
                if sign not in (1, -1):
                    raise PipelineError("involution sign is not a unit")
                al_signs[lab] = int(sign)
            constituents.append(Constituent(tuple(int(c) for c in g),
                                            len(basis), eigenvalues, al_signs))
    timings["decompose"] = time.monotonic() - t0

    return LevelData(level=level, label=level.label(), dim=module.dimension,
                     eis_dim=len(eis), cusp=cusp, cusp_dim=cusp_dim,
                     hecke=hecke, al=al, old_dim=old_dim, new=new,
                     new_dim=new_dim, constituents=constituents,
                     timings=timings, prime_labels=labels)


def build_database(order, min_norm, max_norm, prime_bound, progress=None):
    """All levels of norm up to max_norm, in dependency order.

    Levels below min_norm are still computed (the old/new chain needs them)
    but only levels inside [min_norm, max_norm] are returned for emission.
    """
    F = order.algebra.field
    disc = order.algebra.discriminant_ideal()
    classes = right_ideal_classes(order)
    lower = {}
    emitted = []
    for m in range(1, max_norm + 1):
        ideals = sorted(ideals_of_norm(F, m), key=lambda N: N.sort_key())
        for N in ideals:
            if not disc.is_coprime(N):
                continue
            data = build_level(order, classes, N, prime_bound, lower)
            lower[data.label] = data
            if m >= min_norm:
                emitted.append(data)
            if progress is not None:
                progress(data)
    return emitted


def _label_sort_key(label):
    parts = label.split(".")
    return (int(parts[0]), int(parts[1]) if len(parts) > 1 else -1)


def constituent_fingerprint(constituent, labels):
    """Basis-independent invariant of one eigensystem.

    For each prime the characteristic polynomial of the eigenvalue as an
    element of the Hecke field; two constituents related by any power-basis
    change or Galois action on coordinates produce the same fingerprint.
    """
    g = tuple(Fraction(t) for t in constituent.poly)
    d = len(g) - 1
    rows = []
    for lab in sorted(labels, key=_label_sort_key):
        coeffs = [Fraction(0)] * d
        for i, v in enumerate(constituent.eigenvalues[lab]):
            coeffs[i] = Fraction(v)
        chi = hl.charpoly(hl.multiplication_matrix(g, tuple(coeffs)))
        rows.append((lab, tuple(chi)))
    return (constituent.dim, tuple(rows))


def crosscheck_doubly_new(n, p, q, prime_bound):
    """The doubly-new data of one rational level from both algebra choices.

    The same space is computed once with the algebra ramified at p and level
    n/p, once ramified at q and level n/q; the multisets of constituent
    fingerprints must agree.  Returns (side_p, side_q, agree).
    """
    if p == q:
        raise PipelineError("the two discriminant primes must differ")
    for t in (p, q):
        if n % t:
            raise PipelineError("prime %d does not divide the level %d" % (t, n))
        if (n // t) % t == 0:
            raise PipelineError("prime %d must divide the level exactly once" % t)
    sides = {}
    for d_prime in (p, q):
        try:
            order = load_shipped_order("q_disc%d" % d_prime)
        except (OSError, QuatError):
            raise PipelineError(
                "configuration missing for discriminant %d" % d_prime)
        m = n // d_prime
        prints = []
        for data in build_database(order, m, m, prime_bound):
            for c in data.constituents:
                prints.append(constituent_fingerprint(c, data.prime_labels))
        sides[d_prime] = sorted(prints)
    return sides[p], sides[q], sides[p] == sides[q]


def spot_check(order, classes, data, constituent_index, prime_label):
    """Recompute one level from scratch and compare one stored eigenvalue.

    The rebuild uses the same prime bound so the constituent ordering, which
    depends on the splitting element over the full operator table, matches.
    """
    bound = max((int(lab.split(".")[0]) for lab in data.prime_labels),
                default=2)
    lower = {}
    for N in sorted(divisor_ideals(data.level), key=lambda N: N.sort_key()):
        if N == data.level:
            continue
        lower[N.label()] = build_level(order, classes, N, bound, lower)
    redo = build_level(order, classes, data.level, bound, lower)
    want = data.constituents[constituent_index]
    got = redo.constituents[constituent_index]
    if got.poly != want.poly:
        return False
    return got.eigenvalues[prime_label] == want.eigenvalues[prime_label]
