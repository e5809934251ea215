#!/usr/bin/env python3
"""Derive the shipped maximal order bases, offline.

Starts from a standard small order in each configured algebra and saturates
at the primes where the reduced discriminant exceeds the algebra
discriminant, then writes the verified basis to a config file.  The package
never derives orders at runtime; it only re-verifies these files.
"""

import itertools
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), "src"))

from hmfdb.field import make_field  # noqa: E402
from hmfdb.ideals import factor_ideal  # noqa: E402
from hmfdb.quatalg import (  # noqa: E402
    NotAnOrder,
    NonIntegralBasis,
    QuatError,
    QuatLattice,
    QuatOrder,
    QuaternionAlgebra,
)

OUT_DIR = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), "src", "hmfdb", "data", "orders")


def order_closure(B, gens, cap=8, max_den=None):
    lat = QuatLattice.from_elements(B, gens)
    while cap:
        if max_den is not None and lat.den > max_den:
            raise RuntimeError("closure denominators grow; not an order")
        bas = lat.basis()
        extra = []
        for x in bas:
            for y in bas:
                p = x * y
                if not lat.contains(p):
                    extra.append(p)
        if not extra:
            return lat
        lat = QuatLattice.from_elements(B, bas + extra)
        cap -= 1
    raise RuntimeError("multiplicative closure did not stabilize")


def try_enlarge(O, p):
    """Search for a strictly larger order at the rational prime p."""
    B = O.algebra
    bas = O.basis()
    n4 = len(bas)
    inv_p = Fraction(1, p)
    for tup in itertools.product(range(p), repeat=n4):
        if not any(tup):
            continue
        x = B.zero()
        for c, b in zip(tup, bas):
            if c:
                x = x + b * c
        x = x.scale(inv_p)
        if not x.is_integral() or O.lattice.contains(x):
            continue
        try:
            lat = order_closure(B, bas + [x], max_den=4 * O.lattice.den)
            cand = QuatOrder(lat)
        except (QuatError, NotAnOrder, NonIntegralBasis, RuntimeError):
            continue
        return cand
    return None


def maximalize(B, gens):
    O = QuatOrder(order_closure(B, gens))
    D = B.discriminant_ideal()
    target = D * D
    while O.discriminant_squared() != target:
        progressed = False
        for P, e in factor_ideal(O.discriminant_squared()):
            if e <= 2 * D.valuation(P):
                continue
            bigger = try_enlarge(O, P.p)
            if bigger is not None:
                O = bigger
                progressed = True
                break
        if not progressed:
            raise RuntimeError("saturation stalled above the target disc")
    return O


def fraction_token(fr):
    fr = Fraction(fr)
    return "%d/%d" % (fr.numerator, fr.denominator) if fr.denominator != 1 \
        else str(fr.numerator)


def coord_token(field, x):
    a, b = x.coords()
    if field.degree == 1:
        return fraction_token(a)
    return "%s,%s" % (fraction_token(a), fraction_token(b))


def write_config(path, field_d, a, b, order):
    F = order.algebra.field
    lines = [
        "# maximal quaternion order basis; every claim re-verified on load",
        "field_d = %d" % field_d,
        "a = %s" % coord_token(F, order.algebra.a),
        "b = %s" % coord_token(F, order.algebra.b),
        "disc_label = %s" % order.algebra.discriminant_ideal().label(),
    ]
    bas = order.basis()
    lines.append("basis_count = %d" % len(bas))
    for t, x in enumerate(bas):
        lines.append("basis_%d = %s" % (
            t, " ".join(coord_token(F, c) for c in x.coords())))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    print("wrote %s  (disc %s, units %d)" % (
        os.path.basename(path), order.algebra.discriminant_ideal().label(),
        len(order.unit_norm_one())))


def standard_start(B):
    one, i, j, k = B.basis_units()
    F = B.field
    gens = [one, i, j, k]
    h = (one + i + j + k).scale(Fraction(1, 2))
    if h.is_integral():
        gens.append(h)
    hij = (i + j).scale(Fraction(1, 2))
    hok = (one + k).scale(Fraction(1, 2))
    if hij.is_integral() and hok.is_integral():
        gens += [hij, hok]
    if F.degree == 2:
        w = F.omega()
        gens = gens + [g * w for g in gens]
    return gens


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    jobs = [
        ("q_disc2.cfg", 0, -1, -1),
        ("q_disc3.cfg", 0, -1, -3),
        ("q_disc5.cfg", 0, -2, -5),
        ("q_disc7.cfg", 0, -1, -7),
        ("q_disc11.cfg", 0, -1, -11),
        ("q_disc13.cfg", 0, -2, -13),
        ("d5_disc1.cfg", 5, (-1, 0), (-1, 0)),
        ("d8_disc1.cfg", 8, (-1, 0), (-1, 0)),
        ("d13_disc1.cfg", 13, (-1, 0), (-1, 0)),
        ("d17_disc1.cfg", 17, (-1, 0), (-3, 1)),
    ]
    for name, d, a, b in jobs:
        F = make_field(d)
        av = F.element(*a) if isinstance(a, tuple) else F.element(a)
        bv = F.element(*b) if isinstance(b, tuple) else F.element(b)
        B = QuaternionAlgebra(F, av, bv)
        if not B.is_totally_definite():
            raise RuntimeError("%s: algebra is not totally definite" % name)
        O = maximalize(B, standard_start(B))
        write_config(os.path.join(OUT_DIR, name), d, a, b, O)


if __name__ == "__main__":
    main()
