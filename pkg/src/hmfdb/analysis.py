"""Verdicts and L-series data layered on stored eigensystems.

Everything here consumes finished records: complex-multiplication and
base-change detection are verdicts with evidence counters, never proofs;
L-series coefficients follow the standard Euler-product recursions with the
documented convention that the coefficient at a prime exactly dividing the
true level is minus the stored involution sign.
"""

from fractions import Fraction

from . import heckelinalg as hl
from .field import make_field
from .ideals import Ideal, conjugate_prime, factor_ideal, ideals_of_norm, \
    primes_of_norm_up_to


class AnalysisError(Exception):
    pass


_FIELDS_BY_LABEL = {"1.1.1.1": 0, "2.2.5.1": 5, "2.2.8.1": 8,
                    "2.2.13.1": 13, "2.2.17.1": 17}


def field_from_label(label):
    if label not in _FIELDS_BY_LABEL:
        raise AnalysisError("unknown field label %s" % label)
    return make_field(_FIELDS_BY_LABEL[label])


def ideal_from_label(field, label):
    """Rebuild an integral ideal from its norm-and-Hermite-form label."""
    try:
        parts = [int(t) for t in label.split(".")]
    except ValueError:
        raise AnalysisError("malformed ideal label %s" % label)
    if field.degree == 1:
        if len(parts) != 2:
            raise AnalysisError("malformed ideal label %s" % label)
        norm, a = parts
        ideal = Ideal(field, [[a]])
    else:
        if len(parts) != 4:
            raise AnalysisError("malformed ideal label %s" % label)
        norm, a, b, d = parts
        ideal = Ideal(field, [[a, b], [0, d]])
    if ideal.norm() != norm:
        raise AnalysisError("ideal label %s has inconsistent norm" % label)
    return ideal


class NewformRecord:
    """One constituent of a new space, with flags and provenance."""

    __slots__ = ("field_label", "disc_label", "level_label", "index", "dim",
                 "poly", "prime_labels", "eigenvalues", "al_signs", "cm",
                 "bc", "version", "prime_bound")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw[k])

    def sort_key(self):
        level = tuple(int(t) for t in self.level_label.split("."))
        return (self.field_label, level[0], level[1:], self.index)

    def __eq__(self, other):
        return isinstance(other, NewformRecord) and all(
            getattr(self, k) == getattr(other, k) for k in self.__slots__)

    def __repr__(self):
        return "NewformRecord(%s disc %s level %s #%d dim %d)" % (
            self.field_label, self.disc_label, self.level_label, self.index,
            self.dim)


def _squarefree_part(n):
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e % 2:
            out *= d
        d += 1
    return sign * out * n


def fundamental_discriminant(c):
    """Fundamental discriminant of the quadratic field with radicand c."""
    sf = _squarefree_part(c)
    if sf in (0, 1):
        raise AnalysisError("radicand %d does not define a quadratic field" % c)
    return sf if sf % 4 == 1 else 4 * sf


def _square_class_rep(field, c):
    """Canonical radicand of the square class of a rational number in F.

    In a real quadratic field of radicand m the rational square classes c
    and c*m coincide, so the representative with the smaller absolute
    squarefree part wins.
    """
    num = c.numerator * c.denominator if isinstance(c, Fraction) else int(c)
    sf = _squarefree_part(num)
    if field.degree == 2:
        alt = _squarefree_part(num * field.radicand)
        if abs(alt) < abs(sf):
            sf = alt
    return sf


def _rational_value(vec):
    """The rational value of a coordinate vector, or None if not rational."""
    if any(vec[1:]):
        return None
    return vec[0] if vec else Fraction(0)


def detect_cm(record):
    """Square-class verdict for complex multiplication.

    Returns (verdict, fundamental discriminant or None, evidence count).
    Verdicts: "notcm" when two nonzero Frobenius discriminants fall in
    different square classes or a nonzero eigenvalue appears at a prime
    inert in the candidate quadratic extension; ("cm-candidate", class,
    count of verified vanishing eigenvalues at inert primes) when every
    discriminant agrees; "untested" when the square-class test cannot run.
    Never a proof in either direction beyond the "notcm" disproof.
    """
    if len(record.prime_labels) < 10:
        raise AnalysisError("complex multiplication test needs at least 10 "
                            "eigenvalues, have %d" % len(record.prime_labels))
    if record.dim != 1:
        return ("untested", None, 0)
    F = field_from_label(record.field_label)
    values = {}
    classes = set()
    for lab in record.prime_labels:
        a = _rational_value(record.eigenvalues[lab])
        if a is None:
            return ("untested", None, 0)
        q = int(lab.split(".")[0])
        values[lab] = (a, q)
        if a:
            classes.add(_square_class_rep(F, a * a - 4 * q))
    if not classes:
        return ("untested", None, 0)
    if len(classes) > 1:
        return ("notcm", None, 0)
    c = classes.pop()
    primes = {P.prime_label(): P
              for P in primes_of_norm_up_to(F, record.prime_bound)}
    evidence = 0
    for lab, (a, q) in values.items():
        P = primes.get(lab)
        if P is None:
            continue
        p = P.p
        if p == 2 or c % p == 0:
            continue
        if P.res_degree == 2:
            # a rational radicand is always a square in the quadratic
            # residue field, so the prime splits in the candidate extension
            continue
        if pow(c % p, (p - 1) // 2, p) == p - 1:
            if a:
                return ("notcm", None, 0)
            evidence += 1
    return ("cm-candidate", fundamental_discriminant(c), evidence)


def detect_base_change(record, rational_records=None):
    """Conjugation test plus heuristic matching against rational forms.

    Stage one checks that the true level is conjugation-stable and that
    conjugate primes carry equal eigenvalues; any failure is a definitive
    "no".  Stage two, heuristic by nature, searches the supplied rational
    records for one whose eigenvalues induce this record's through the
    split/inert relations.  Returns (verdict, matched record or None,
    evidence count) with verdict in {"no", "candidate", "matched"}.
    """
    F = field_from_label(record.field_label)
    if F.degree != 2:
        raise AnalysisError("base-change detection needs a quadratic field")
    D = ideal_from_label(F, record.disc_label)
    M = ideal_from_label(F, record.level_label)
    if D.conjugate() != D or M.conjugate() != M:
        return ("no", None, 0)
    primes = {P.prime_label(): P
              for P in primes_of_norm_up_to(F, record.prime_bound)}
    checked = 0
    for lab in record.prime_labels:
        P = primes.get(lab)
        if P is None:
            raise AnalysisError("prime %s is not in the regenerated table" % lab)
        sigma_lab = conjugate_prime(P).prime_label()
        if sigma_lab == lab:
            continue
        if record.eigenvalues[lab] != record.eigenvalues[sigma_lab]:
            return ("no", None, 0)
        checked += 1
    if rational_records is None:
        return ("candidate", None, checked)
    for cand in rational_records:
        if cand.field_label != "1.1.1.1" or cand.dim != 1:
            continue
        evidence = 0
        ok = True
        for lab in record.prime_labels:
            P = primes[lab]
            if P.ram_index == 2:
                continue
            rat_lab = str(P.p)
            if rat_lab not in cand.eigenvalues:
                continue
            ap_g = _rational_value(cand.eigenvalues[rat_lab])
            if ap_g is None:
                ok = False
                break
            if P.res_degree == 1:
                want = ap_g
            else:
                want = ap_g * ap_g - 2 * P.p
            have = _rational_value(record.eigenvalues[lab])
            if have is None or have != want:
                ok = False
                break
            evidence += 1
        if ok and evidence:
            return ("matched", cand, evidence)
    return ("candidate", None, checked)


class LFunctionData:
    """Conductor, gamma exponent, and exact Dirichlet coefficients."""

    __slots__ = ("conductor", "gamma_exponent", "coefficients",
                 "ideal_coefficients", "omitted")

    def __init__(self, conductor, gamma_exponent, coefficients,
                 ideal_coefficients, omitted):
        self.conductor = conductor
        self.gamma_exponent = gamma_exponent
        self.coefficients = coefficients
        self.ideal_coefficients = ideal_coefficients
        self.omitted = omitted


def lfunction_coefficients(record, bound):
    """Exact Dirichlet data for one record up to a norm bound.

    Coefficients are coordinate vectors over the power basis of the Hecke
    field.  Norms touched by a prime whose square divides the true level
    are omitted and listed in the result.  Ideals of equal norm contribute
    additively to the norm-indexed coefficient.
    """
    F = field_from_label(record.field_label)
    D = ideal_from_label(F, record.disc_label)
    M = ideal_from_label(F, record.level_label)
    N = D * M
    g = tuple(Fraction(c) for c in record.poly)
    d = len(g) - 1

    def pad(vec):
        out = [Fraction(0)] * d
        for i, c in enumerate(vec):
            out[i] = Fraction(c)
        return tuple(out)

    def mul(u, v):
        return pad(hl.poly_mod(hl.poly_mul(list(u), list(v)), list(g)))

    one = pad((1,))
    prime_powers = {}
    blocked = set()
    for P in primes_of_norm_up_to(F, bound):
        q = P.norm()
        e = N.valuation(P)
        if e == 0:
            lab = P.prime_label()
            if lab not in record.eigenvalues:
                raise AnalysisError(
                    "missing eigenvalue at %s below the bound" % lab)
            ap = pad(record.eigenvalues[lab])
        elif e == 1:
            lab = P.prime_label()
            if lab not in record.al_signs:
                raise AnalysisError("missing involution sign at %s" % lab)
            ap = pad((-record.al_signs[lab],))
        else:
            blocked.add(P.label())
            continue
        powers = {0: one, 1: ap}
        k = 2
        while q ** k <= bound:
            if e == 0:
                prev = mul(ap, powers[k - 1])
                back = powers[k - 2]
                powers[k] = tuple(prev[i] - q * back[i] for i in range(d))
            else:
                powers[k] = mul(ap, powers[k - 1])
            k += 1
        prime_powers[P.label()] = powers
    coefficients = {}
    ideal_coefficients = {}
    omitted = []
    for m in range(1, bound + 1):
        total = tuple(Fraction(0) for _ in range(d))
        usable = True
        for A in ideals_of_norm(F, m):
            value = one
            skip = False
            for P, k in factor_ideal(A):
                if P.label() in blocked:
                    skip = True
                    break
                value = mul(value, prime_powers[P.label()][k])
            if skip:
                usable = False
                break
            ideal_coefficients[A.label()] = value
            total = tuple(total[i] + value[i] for i in range(d))
        if usable:
            coefficients[m] = total
        else:
            omitted.append(m)
    return LFunctionData(F.disc ** 2 * N.norm(), F.degree, coefficients,
                         ideal_coefficients, tuple(omitted))


def ramanujan_holds(record):
    """Exact check that every eigenvalue embedding meets the size bound.

    For each stored a and prime norm q the element 4q - a^2 must be totally
    nonnegative; over a totally real Hecke field that holds exactly when the
    characteristic polynomial of its multiplication matrix has coefficients
    of alternating sign.
    """
    g = [Fraction(c) for c in record.poly]
    d = len(g) - 1
    for lab in record.prime_labels:
        q = int(lab.split(".")[0])
        a = [Fraction(c) for c in record.eigenvalues[lab]]
        beta = hl.poly_sub([Fraction(4 * q)], hl.poly_mod(hl.poly_mul(a, a), g))
        coeffs = [Fraction(0)] * d
        for i, c in enumerate(hl.poly_trim(beta)):
            coeffs[i] = c
        mat = hl.multiplication_matrix(tuple(g), tuple(coeffs))
        chi = hl.charpoly(mat)
        for i, c in enumerate(chi):
            if (-1) ** (d - i) * c < 0:
                return False
    return True


def hecke_field_stats(records):
    """Histogram rows and a text summary for quadratic Hecke fields.

    Rows are (field label, fundamental discriminant of E, count) sorted by
    field then discriminant; the summary reports, per base field, the count
    split into real and imaginary quadratic E and the extreme discriminants.
    """
    counts = {}
    for r in records:
        if r.dim != 2:
            continue
        a0, a1 = r.poly[0], r.poly[1]
        disc_e = fundamental_discriminant(a1 * a1 - 4 * a0)
        key = (r.field_label, disc_e)
        counts[key] = counts.get(key, 0) + 1
    rows = [(f, d, counts[(f, d)]) for (f, d) in sorted(counts)]
    lines = []
    for field in sorted({f for f, _ in counts}):
        discs = sorted(d for (f, d) in counts if f == field)
        real = [d for d in discs if d > 0]
        imag = [d for d in discs if d < 0]
        n_real = sum(counts[(field, d)] for d in real)
        n_imag = sum(counts[(field, d)] for d in imag)
        line = "field %s: %d real quadratic" % (field, n_real)
        if real:
            line += " (max disc %d)" % max(real)
        line += ", %d imaginary quadratic" % n_imag
        if imag:
            line += " (min disc %d)" % min(imag)
        lines.append(line)
    return rows, lines


def cm_flag_token(verdict, klass, evidence):
    if verdict == "cm-candidate":
        return "%d:%d" % (klass, evidence)
    return verdict


def bc_flag_token(verdict, evidence):
    if verdict == "no":
        return "no"
    if verdict == "candidate":
        return "cand:%d" % evidence
    return "match:%d" % evidence


def records_from_level(field, disc_label, data, version, prime_bound,
                       rational_records=None):
    """NewformRecords with analysis flags for one computed level."""
    out = []
    for idx, c in enumerate(data.constituents):
        rec = NewformRecord(
            field_label=field.label, disc_label=disc_label,
            level_label=data.label, index=idx, dim=c.dim,
            poly=tuple(int(t) for t in c.poly),
            prime_labels=tuple(data.prime_labels),
            eigenvalues={lab: tuple(c.eigenvalues[lab])
                         for lab in data.prime_labels},
            al_signs=dict(c.al_signs), cm="untested", bc="na",
            version=version, prime_bound=prime_bound)
        try:
            rec.cm = cm_flag_token(*detect_cm(rec))
        except AnalysisError:
            rec.cm = "untested"
        if field.degree == 2:
            verdict, _, evidence = detect_base_change(rec, rational_records)
            rec.bc = bc_flag_token(verdict, evidence)
        out.append(rec)
    return out
