"""Exact arithmetic in Q and in supported real quadratic fields.

Elements are stored as rational coordinate pairs over the integral basis
{1, omega}, with omega = sqrt(m) when the discriminant is 4m and
omega = (1+sqrt(d))/2 when the discriminant d is 1 mod 4.  Embedding signs are
decided by exact integer comparisons; no floating point is used anywhere.

Supported fields are an allowlist: Q itself and the real quadratic fields of
discriminant 5, 8, 13, 17, all of narrow class number one with a fundamental
unit of norm -1.  That last fact is load-bearing: it makes every totally
positive unit a square, which the quaternionic layers rely on.
"""

from __future__ import annotations

from fractions import Fraction

# discriminant label -> radicand of the defining square root
_SUPPORTED = {5: 5, 8: 2, 13: 13, 17: 17}

_UNIT_COORDS = {5: (0, 1), 8: (1, 1), 13: (1, 1), 17: (3, 2)}


class FieldError(ValueError):
    pass


class FieldElement:
    """An element a + b*omega of a BaseField, with rational a, b."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field, a, b=0):
        self.field = field
        self.a = Fraction(a)
        self.b = Fraction(b) if field.degree == 2 else Fraction(0)

    def __repr__(self):
        if self.field.degree == 1:
            return "FieldElement(%s)" % (self.a,)
        return "FieldElement(%s + %s*w)" % (self.a, self.b)

    def __str__(self):
        if self.field.degree == 1 or self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "%s*w" % (self.b,)
        return "%s+%s*w" % (self.a, self.b)

    def __eq__(self, other):
        other = self.field.coerce(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __mul__(self, other):
        other = self.field.coerce(other)
        F = self.field
        a, b, c, d = self.a, self.b, other.a, other.b
        if F.degree == 1:
            return FieldElement(F, a * c)
        if F.half_basis:
            # omega^2 = omega + cc
            cc = F._omega_sq_const
            return FieldElement(F, a * c + b * d * cc, a * d + b * c + b * d)
        return FieldElement(F, a * c + b * d * F.radicand, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.field.coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        if self.field.degree == 1:
            return FieldElement(self.field, self.a / n)
        return self * other.conjugate() * FieldElement(self.field, Fraction(1, 1) / n)

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, k):
        if k < 0:
            return (self.field.one() / self) ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        F = self.field
        if F.degree == 1:
            return self
        if F.half_basis:
            return FieldElement(F, self.a + self.b, -self.b)
        return FieldElement(F, self.a, -self.b)

    def trace(self):
        if self.field.degree == 1:
            return self.a
        return 2 * self.a + self.b * self.field._trace_omega

    def norm(self):
        if self.field.degree == 1:
            return self.a
        F = self.field
        if F.half_basis:
            return self.a * self.a + self.a * self.b - self.b * self.b * F._omega_sq_const
        return self.a * self.a - self.b * self.b * F.radicand

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def is_rational(self):
        return self.b == 0

    def is_integral(self):
        return self.a.denominator == 1 and self.b.denominator == 1

    def coords(self):
        return (self.a, self.b)

    def sign_at(self, place):
        """Exact sign (-1, 0, 1) of the element under the given real embedding.

        place 0 sends omega to the positive root, place 1 to the conjugate.
        """
        F = self.field
        if F.degree == 1:
            if place != 0:
                raise FieldError("Q has a single real place")
            a = self.a
            return (a > 0) - (a < 0)
        if place not in (0, 1):
            raise FieldError("real quadratic fields have places 0 and 1")
        # write the embedded value as (p + q*sqrt(m))/2-free rational combo
        if F.half_basis:
            p = 2 * self.a + self.b
            q = self.b
            m = F.radicand
        else:
            p, q, m = self.a, self.b, F.radicand
        if place == 1:
            q = -q
        return _sign_p_plus_q_sqrt(p, q, m)

    def is_totally_positive(self):
        if self.field.degree == 1:
            return self.a > 0
        return self.sign_at(0) > 0 and self.sign_at(1) > 0

    def compare_at(self, other, place):
        """Exact comparison of two elements under one embedding."""
        return (self - other).sign_at(place)


def _sign_p_plus_q_sqrt(p, q, m):
    # sign of p + q*sqrt(m) for rational p, q and squarefree m > 1
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return 1 if q > 0 else -1
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    lhs = p * p
    rhs = m * q * q
    if p > 0:  # q < 0: positive iff p^2 > m q^2
        if lhs == rhs:
            return 0
        return 1 if lhs > rhs else -1
    # p < 0, q > 0: positive iff m q^2 > p^2
    if lhs == rhs:
        return 0
    return 1 if rhs > lhs else -1


class BaseField:
    """Q (degree 1) or a supported real quadratic field (degree 2)."""

    def __init__(self, disc_label):
        if disc_label == 0:
            self.degree = 1
            self.disc = 1
            self.radicand = 0
            self.half_basis = False
            self.label = "1.1.1.1"
        else:
            if disc_label not in _SUPPORTED:
                raise FieldError(
                    "unsupported field discriminant %r: allowlist is %s "
                    "(narrow class number one enforced by configuration)"
                    % (disc_label, sorted(_SUPPORTED)))
            self.degree = 2
            self.disc = disc_label
            self.radicand = _SUPPORTED[disc_label]
            self.half_basis = disc_label % 4 == 1
            self.label = "2.2.%d.1" % disc_label
        if self.half_basis:
            self._omega_sq_const = Fraction(self.disc - 1, 4)
            self._trace_omega = 1
        else:
            self._omega_sq_const = None
            self._trace_omega = 0
        self._eps = None
        if self.degree == 2:
            ea, eb = _UNIT_COORDS[self.disc]
            self._eps = FieldElement(self, ea, eb)
            _verify_fundamental_unit(self)

    def __repr__(self):
        return "BaseField(%s)" % self.label

    def __eq__(self, other):
        return isinstance(other, BaseField) and other.disc == self.disc and \
            other.degree == self.degree

    def __hash__(self):
        return hash((self.degree, self.disc))

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldError("element of a different field")
            return x
        return FieldElement(self, x)

    def element(self, a, b=0):
        return FieldElement(self, a, b)

    def zero(self):
        return FieldElement(self, 0)

    def one(self):
        return FieldElement(self, 1)

    def omega(self):
        if self.degree == 1:
            raise FieldError("Q has no omega generator")
        return FieldElement(self, 0, 1)

    def fundamental_unit(self):
        if self.degree == 1:
            raise FieldError("Q has no fundamental unit")
        return self._eps

    def totally_positive_unit(self):
        """Generator of the totally positive units modulo squares context: eps^2."""
        e = self.fundamental_unit()
        return e * e

    def omega_min_poly(self):
        """(c0, c1) with omega^2 + c1*omega + c0 = 0, integer coefficients."""
        if self.half_basis:
            return (-int(self._omega_sq_const), -1)
        return (-self.radicand, 0)

    def is_square(self, x):
        """Exact squareness test in the field."""
        x = self.coerce(x)
        if x.is_zero():
            return True
        if self.degree == 1:
            return x.a > 0 and _is_rational_square(x.a)
        found = self.sqrt(x)
        return found is not None

    def sqrt(self, x):
        """A square root of x in the field, or None."""
        x = self.coerce(x)
        if x.is_zero():
            return self.zero()
        a, b = x.a, x.b
        if self.degree == 1:
            if a < 0 or not _is_rational_square(a):
                return None
            return self.element(_rational_sqrt(a))
        nrm = x.norm()
        if nrm < 0 or not _is_rational_square(nrm):
            return None
        r = _rational_sqrt(nrm)
        cands = []
        if not self.half_basis:
            m = self.radicand
            if b == 0:
                if a > 0 and _is_rational_square(a):
                    cands.append((_rational_sqrt(a), Fraction(0)))
                am = a / m
                if am > 0 and _is_rational_square(am):
                    cands.append((Fraction(0), _rational_sqrt(am)))
            else:
                for rr in (r, -r):
                    q2 = (a + rr) / (2 * m)
                    if q2 > 0 and _is_rational_square(q2):
                        q = _rational_sqrt(q2)
                        cands.append((b / (2 * q), q))
        else:
            d = self.disc
            for rr in (r, -r):
                u = 2 * a + b + 2 * rr  # candidate for t^2, t = 2p + q
                if u == 0:
                    q2 = (4 * a + 2 * b) / d
                    if q2 > 0 and _is_rational_square(q2):
                        q = _rational_sqrt(q2)
                        cands.append((-q / 2, q))
                    continue
                if u > 0 and _is_rational_square(u):
                    t = _rational_sqrt(u)
                    q = b / t
                    cands.append(((t - q) / 2, q))
                    q = -b / t
                    cands.append(((-t - q) / 2, q))
        for p, q in cands:
            s = self.element(p, q)
            if s * s == x:
                return s
        return None

    def square_class_equal(self, x, y):
        """Whether nonzero x, y agree in F^x / (F^x)^2."""
        x = self.coerce(x)
        y = self.coerce(y)
        if x.is_zero() or y.is_zero():
            raise FieldError("square classes are defined for nonzero elements")
        return self.is_square(x * y)

    def unit_square_class(self, u):
        """Representative among {1, eps, -1, -eps} of a unit's square class."""
        u = self.coerce(u)
        reps = [self.one(), self.fundamental_unit(),
                -self.one(), -self.fundamental_unit()]
        for r in reps:
            if self.is_square(u * r):
                # u ~ r^{-1} ~ r modulo squares
                return r
        raise FieldError("unit does not reduce to a standard square class")

    def integral_elements_in_box(self, bound):
        """All integral elements with coordinates in [-bound, bound]."""
        out = []
        if self.degree == 1:
            for a in range(-bound, bound + 1):
                out.append(self.element(a))
            return out
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                out.append(self.element(a, b))
        return out


def _is_rational_square(q):
    q = Fraction(q)
    if q < 0:
        return False
    return _isqrt_exact(q.numerator) is not None and _isqrt_exact(q.denominator) is not None


def _rational_sqrt(q):
    q = Fraction(q)
    return Fraction(_isqrt_exact(q.numerator), _isqrt_exact(q.denominator))


def _isqrt_exact(n):
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


def _verify_fundamental_unit(F, height=10):
    """Check the configured unit has norm -1 and is minimal above 1.

    Brute-force sweep over coordinates up to the height bound; any unit
    strictly between 1 and eps in the first embedding is a configuration bug.
    """
    eps = F._eps
    n = eps.norm()
    if n not in (1, -1):
        raise FieldError("configured fundamental unit has norm %s" % (n,))
    one = F.one()
    if not eps.compare_at(one, 0) > 0:
        raise FieldError("configured fundamental unit is not > 1 at the first embedding")
    for a in range(-height, height + 1):
        for b in range(-height, height + 1):
            u = F.element(a, b)
            if u.norm() not in (1, -1):
                continue
            if u.compare_at(one, 0) > 0 and u.compare_at(eps, 0) < 0:
                raise FieldError(
                    "configured unit is not fundamental: %r is smaller" % (u,))


_FIELD_CACHE = {}


def make_field(d):
    """Base field constructor: d = 0 for Q, else an allowlisted discriminant."""
    if d not in _FIELD_CACHE:
        _FIELD_CACHE[d] = BaseField(d)
    return _FIELD_CACHE[d]


def parse_config_text(text):
    """key = value pairs, one per line; # comments and blank lines skipped."""
    out = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("line %d: expected key = value, got %r" % (ln, raw))
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def load_field_config(path):
    """Build a field from a config file, re-verifying every claim in it."""
    with open(path, "r", encoding="ascii") as fh:
        cfg = parse_config_text(fh.read())
    for key in ("d", "allowlisted", "unit_a", "unit_b"):
        if key not in cfg:
            raise FieldError("field config %s: missing key %r" % (path, key))
    if cfg["allowlisted"].lower() != "true":
        raise FieldError("field config %s is not marked allowlisted" % path)
    d = int(cfg["d"])
    F = make_field(d)
    ua, ub = Fraction(cfg["unit_a"]), Fraction(cfg["unit_b"])
    if F.degree == 1:
        if (ua, ub) != (1, 0):
            raise FieldError("field config %s: the unit over Q must be 1" % path)
    elif F.fundamental_unit().coords() != (ua, ub):
        raise FieldError(
            "field config %s: unit coordinates (%s, %s) fail re-verification" % (path, ua, ub))
    return F
