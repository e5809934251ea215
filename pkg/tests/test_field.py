"""Exact arithmetic in the supported base fields."""

from fractions import Fraction

import pytest

from hmfdb.field import FieldError, make_field


def test_rational_field_attributes():
    F = make_field(0)
    assert (F.label, F.degree, F.disc) == ("1.1.1.1", 1, 1)


@pytest.mark.parametrize("d", [5, 8, 13, 17])
def test_quadratic_field_attributes(d):
    F = make_field(d)
    assert F.degree == 2
    assert F.disc == d
    assert F.label == "2.2.%d.1" % d


def test_unsupported_discriminant_is_refused():
    with pytest.raises(FieldError):
        make_field(7)
    with pytest.raises(FieldError):
        make_field(12)


def test_generator_satisfies_its_minimal_polynomial():
    for d in (5, 8, 13, 17):
        F = make_field(d)
        w = F.omega()
        c0, c1 = F.omega_min_poly()
        assert (w * w + w * c1 + F.element(c0)).is_zero()


def test_element_arithmetic_golden_ratio():
    F = make_field(5)
    w = F.omega()
    x = F.element(1, 2)
    # (1 + 2w)^2 = 5 + 8w since w^2 = w + 1
    assert x * x == F.element(5, 8)
    assert x - x == F.zero()
    assert x * (1 / x) == F.one()
    assert x ** 3 == x * x * x


def test_conjugate_trace_norm():
    for d in (5, 8, 13, 17):
        F = make_field(d)
        x = F.element(3, -2)
        assert x + x.conjugate() == F.element(x.trace())
        assert x * x.conjugate() == F.element(x.norm())
        assert x.conjugate().conjugate() == x


def test_coerce_and_integrality():
    F = make_field(8)
    assert F.coerce(7) == F.element(7)
    half = F.coerce(Fraction(1, 2))
    assert not half.is_integral()
    assert F.element(1, 1).is_integral()
    assert F.coerce(F.one()) == F.one()


@pytest.mark.parametrize("d,coords", [
    (5, (0, 1)),
    (8, (1, 1)),
    (13, (1, 1)),
    (17, (3, 2)),
])
def test_fundamental_unit_is_frozen(d, coords):
    """Unit coordinates pinned against an independent pari computation."""
    F = make_field(d)
    u = F.fundamental_unit()
    assert u.coords() == (Fraction(coords[0]), Fraction(coords[1]))
    assert u.norm() in (1, -1)
    assert u.is_integral() and (1 / u).is_integral()


def test_totally_positive_unit():
    for d in (5, 8, 13, 17):
        F = make_field(d)
        v = F.totally_positive_unit()
        assert v.is_totally_positive()
        assert v.norm() == 1
        assert (1 / v).is_integral()


def test_square_roots():
    F = make_field(5)
    r = F.sqrt(F.element(5))
    assert r * r == F.element(5)
    assert F.is_square(F.element(5))
    assert not F.is_square(F.element(2))
    assert F.sqrt(F.element(2)) is None
    F8 = make_field(8)
    s = F8.sqrt(F8.element(2))
    assert s * s == F8.element(2)


def test_signs_at_real_places():
    F = make_field(5)
    w = F.omega()
    # w is the golden ratio at one place and 1 minus it at the other
    assert w.sign_at(0) != w.sign_at(1)
    assert not w.is_totally_positive()
    assert (w * w).is_totally_positive()
    assert not (w * w.conjugate()).is_totally_positive()  # norm is -1


def test_square_class_equality():
    F = make_field(5)
    a = F.element(2)
    assert F.square_class_equal(a, a * F.element(9))
    assert not F.square_class_equal(F.one(), a)
