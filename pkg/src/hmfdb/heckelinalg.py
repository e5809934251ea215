"""Exact linear algebra for commuting integer and rational matrices.

Everything here is dense and exact: vectors are tuples of Fractions, matrices
are lists of rows.  Characteristic polynomials run multimodularly (Hessenberg
recurrence mod word-size primes, CRT, rigorous coefficient bound) so that the
cost stays polynomial even when entries are large.  Polynomial factorization
is delegated to sympy and then re-verified by exact multiplication, so a
factorization bug upstream turns into a loud failure here.

Polynomials are coefficient lists, low degree first, over Fraction.
"""

from fractions import Fraction
from math import isqrt

import sympy

from . import intmat


class LinalgError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# matrices


def mat_dim(a):
    return len(a), (len(a[0]) if a else 0)


def identity_matrix(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zero_matrix(n, m):
    return [[Fraction(0)] * m for _ in range(n)]


def mat_mul(a, b):
    n, k = mat_dim(a)
    k2, m = mat_dim(b)
    if k != k2:
        raise LinalgError("inner dimensions %d and %d differ" % (k, k2))
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            s = Fraction(0)
            for t in range(k):
                if ai[t]:
                    s += ai[t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    c = Fraction(c)
    return [[x * c for x in row] for row in a]


def transpose(a):
    n, m = mat_dim(a)
    return [[a[i][j] for i in range(n)] for j in range(m)]


def mat_vec(a, v):
    return [sum((row[t] * v[t] for t in range(len(v)) if v[t]), Fraction(0))
            for row in a]


def is_zero_matrix(a):
    return all(not x for row in a for x in row)


def rref(a):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    mat = [[Fraction(x) for x in row] for row in a]
    n, m = mat_dim(mat)
    pivots = []
    r = 0
    for col in range(m):
        piv = None
        for i in range(r, n):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][col]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(n):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return mat, pivots


def rank(a):
    return len(rref(a)[1])


def kernel_basis(a):
    """Canonical echelonized basis of {v : a v = 0} (column vectors)."""
    n, m = mat_dim(a)
    red, pivots = rref(a)
    free = [c for c in range(m) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        out.append(tuple(v))
    return out


def solve_matrix(a, b):
    """X with a X = b, exact; raises LinalgError when inconsistent.

    When the solution is underdetermined the free coordinates are set to 0,
    which keeps the output deterministic.
    """
    n, m = mat_dim(a)
    nb, k = mat_dim(b)
    if n != nb:
        raise LinalgError("left and right sides have different heights")
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    red, pivots = rref(aug)
    for row in red:
        if not any(row[:m]) and any(row[m:]):
            raise LinalgError("inconsistent linear system")
    x = zero_matrix(m, k)
    for r, pc in enumerate(pivots):
        if pc >= m:
            raise LinalgError("inconsistent linear system")
        for j in range(k):
            x[pc][j] = red[r][m + j]
    return x


def invert_matrix(a):
    n, m = mat_dim(a)
    if n != m:
        raise LinalgError("only square matrices invert")
    x = solve_matrix(a, identity_matrix(n))
    if not mat_eq(mat_mul(a, x), identity_matrix(n)):
        raise LinalgError("matrix is singular")
    return x


def mat_eq(a, b):
    return all(all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


# ---------------------------------------------------------------------------
# characteristic polynomials, multimodular


def _charpoly_mod(mat, p):
    """Charpoly of an integer matrix modulo a prime, via Hessenberg form."""
    n = len(mat)
    h = [[x % p for x in row] for row in mat]
    for col in range(n - 2):
        piv = None
        for r in range(col + 1, n):
            if h[r][col]:
                piv = r
                break
        if piv is None:
            continue
        if piv != col + 1:
            h[col + 1], h[piv] = h[piv], h[col + 1]
            for r in range(n):
                h[r][col + 1], h[r][piv] = h[r][piv], h[r][col + 1]
        inv = pow(h[col + 1][col], p - 2, p)
        for r in range(col + 2, n):
            f = h[r][col] * inv % p
            if not f:
                continue
            hr = h[r]
            hc = h[col + 1]
            for c in range(n):
                hr[c] = (hr[c] - f * hc[c]) % p
            for rr in range(n):
                h[rr][col + 1] = (h[rr][col + 1] + f * h[rr][r]) % p
    # expand det(xI - H) along last columns of the leading minors
    polys = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [0] * (m + 1)
        for idx, c in enumerate(prev):
            cur[idx + 1] = c
        a = h[m - 1][m - 1]
        for idx, c in enumerate(prev):
            cur[idx] = (cur[idx] - a * c) % p
        prod = 1
        for k in range(1, m):
            prod = prod * h[m - k][m - k - 1] % p
            if not prod:
                break
            coeff = h[m - 1 - k][m - 1] * prod % p
            if coeff:
                lower = polys[m - 1 - k]
                for idx, c in enumerate(lower):
                    cur[idx] = (cur[idx] - coeff * c) % p
        polys.append([c % p for c in cur])
    return polys[n]


def _crt_pair(r1, m1, r2, m2):
    g, s, _ = _xgcd(m1, m2)
    if g != 1:
        raise LinalgError("moduli are not coprime")
    m = m1 * m2
    return (r1 + (r2 - r1) * s % m2 * m1) % m, m


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


_MODULAR_PRIMES = []


def _modular_primes(count):
    while len(_MODULAR_PRIMES) < count:
        prev = _MODULAR_PRIMES[-1] if _MODULAR_PRIMES else (1 << 31)
        _MODULAR_PRIMES.append(int(sympy.prevprime(prev)))
    return _MODULAR_PRIMES[:count]


def charpoly_int(mat):
    """Charpoly of a square integer matrix, low-to-high coefficients, monic."""
    n = len(mat)
    if n == 0:
        return [Fraction(1)]
    sumsq = max(sum(x * x for x in row) for row in mat)
    # every coefficient is a sum of binom(n, k) principal minors, each at
    # most (max row norm)^k in absolute value
    bound = (isqrt(sumsq) + 2) ** n
    residues = None
    modulus = 1
    k = 0
    while modulus <= 2 * bound:
        k += 1
        p = _modular_primes(k)[-1]
        cp = _charpoly_mod(mat, p)
        if residues is None:
            residues = cp
            modulus = p
        else:
            merged = []
            for r1, r2 in zip(residues, cp):
                r, m = _crt_pair(r1, modulus, r2, p)
                merged.append(r)
            residues = merged
            modulus *= p
    out = []
    for r in residues:
        if r > modulus // 2:
            r -= modulus
        out.append(Fraction(r))
    # Cayley-Hamilton spot check on a fixed pseudo-random vector
    v = [Fraction((i * 2654435761 + 97) % 1009 + 1) for i in range(n)]
    acc = [Fraction(0)] * n
    for c in reversed(out):
        acc = [sum(mat[i][t] * acc[t] for t in range(n)) + c * v[i]
               for i in range(n)]
    if any(acc):
        raise LinalgError("characteristic polynomial fails Cayley-Hamilton")
    return out


def charpoly(mat):
    """Charpoly of a square Fraction matrix, exact, monic, low-to-high."""
    n = len(mat)
    if n == 0:
        return [Fraction(1)]
    im, den = intmat.frac_mat_to_int(mat)
    b = charpoly_int(im)
    # the integer matrix is den * mat, so rescale each root by 1/den
    return [b[k] * Fraction(1, den) ** (n - k) for k in range(n + 1)]


# ---------------------------------------------------------------------------
# polynomials over Fraction, low degree first


def poly_trim(f):
    f = [Fraction(c) for c in f]
    while len(f) > 1 and not f[-1]:
        f.pop()
    return f


def poly_deg(f):
    f = poly_trim(f)
    if f == [Fraction(0)]:
        return -1
    return len(f) - 1


def poly_add(f, g):
    n = max(len(f), len(g))
    out = [Fraction(0)] * n
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return poly_trim(out)


def poly_sub(f, g):
    return poly_add(f, [-Fraction(c) for c in g])


def poly_mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] += a * b
    return poly_trim(out)


def poly_scale(f, c):
    c = Fraction(c)
    return poly_trim([x * c for x in f])


def poly_divmod(f, g):
    f = poly_trim(f)
    g = poly_trim(g)
    if poly_deg(g) < 0:
        raise LinalgError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(f) - len(g) + 1)
    r = list(f)
    lg = g[-1]
    while poly_deg(r) >= poly_deg(g):
        shift = poly_deg(r) - poly_deg(g)
        c = r[-1] / lg
        q[shift] += c
        for i, gc in enumerate(g):
            r[i + shift] -= c * gc
        r = poly_trim(r)
    return poly_trim(q), r


def poly_mod(f, g):
    return poly_divmod(f, g)[1]


def poly_gcd(f, g):
    a, b = poly_trim(f), poly_trim(g)
    while poly_deg(b) >= 0:
        a, b = b, poly_mod(a, b)
    if poly_deg(a) >= 0:
        a = poly_scale(a, Fraction(1) / a[-1])
    return a


def poly_derivative(f):
    return poly_trim([Fraction(i) * c for i, c in enumerate(f)][1:] or [0])


def poly_is_squarefree(f):
    return poly_deg(poly_gcd(f, poly_derivative(f))) == 0


def poly_eval(f, x):
    x = Fraction(x)
    out = Fraction(0)
    for c in reversed(poly_trim(f)):
        out = out * x + c
    return out


def poly_eval_matrix(f, a):
    n = len(a)
    out = zero_matrix(n, n)
    for c in reversed(poly_trim(f)):
        out = mat_mul(out, a)
        if c:
            for i in range(n):
                out[i][i] += c
    return out


def factor_poly(f):
    """Monic irreducible factors of f over Q with multiplicities.

    Returns a deterministically sorted list of (coeff tuple, multiplicity).
    The sympy factorization is re-verified by exact multiplication.
    """
    f = poly_trim(f)
    if poly_deg(f) < 1:
        raise LinalgError("factoring needs positive degree")
    x = sympy.Symbol("x")
    expr = sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * x ** i
                       for i, c in enumerate(f)])
    const, parts = sympy.factor_list(expr, x)
    const = Fraction(int(sympy.nsimplify(const).p), int(sympy.nsimplify(const).q)) \
        if not isinstance(const, sympy.Integer) else Fraction(int(const))
    out = []
    for part, mult in parts:
        coeffs = [Fraction(c.p, c.q) for c in
                  reversed(sympy.Poly(part, x).all_coeffs())]
        lead = coeffs[-1]
        const *= lead ** mult
        coeffs = [c / lead for c in coeffs]
        out.append((tuple(coeffs), int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    check = [const]
    for coeffs, mult in out:
        for _ in range(mult):
            check = poly_mul(check, list(coeffs))
    if poly_trim(check) != f:
        raise LinalgError("polynomial factorization failed re-verification")
    return out


# ---------------------------------------------------------------------------
# subspaces: lists of echelonized row vectors over Fraction


def echelon_space(vectors):
    """Canonical basis (rref rows) of the span of the given vectors."""
    if not vectors:
        return []
    red, pivots = rref([list(v) for v in vectors])
    return [tuple(red[r]) for r in range(len(pivots))]


def space_dim(space):
    return len(space)


def space_contains(space, v):
    if not space:
        return all(not x for x in v)
    red, pivots = rref([list(u) for u in space])
    w = [Fraction(x) for x in v]
    for r, pc in enumerate(pivots):
        if w[pc]:
            f = w[pc]
            w = [x - f * y for x, y in zip(w, red[r])]
    return all(not x for x in w)


def space_sum(u, v):
    return echelon_space(list(u) + list(v))


def space_intersect(u, v):
    """Intersection of two spans inside the same ambient space."""
    if not u or not v:
        return []
    n = len(u[0])
    cols = [list(x) for x in u] + [[-c for c in y] for y in v]
    a = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
    out = []
    for k in kernel_basis(a):
        vec = [Fraction(0)] * n
        for j, c in enumerate(k[:len(u)]):
            if c:
                for t in range(n):
                    vec[t] += c * u[j][t]
        out.append(tuple(vec))
    return echelon_space(out)


def full_space(n):
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


def operator_kernel(a):
    """Kernel of a matrix as an echelonized space of row vectors."""
    return echelon_space([tuple(v) for v in kernel_basis(a)])


def restrict_operator(mat, basis):
    """Matrix of the operator on the span of basis, in that basis.

    Raises when the span is not stable, which is the loud failure mode for a
    self-adjointness or commutation bug upstream.
    """
    if not basis:
        return []
    n = len(basis[0])
    cols = transpose([list(b) for b in basis])
    images = mat_mul(mat, cols)
    try:
        return solve_matrix(cols, images)
    except LinalgError:
        raise LinalgError("operator does not stabilize the subspace")


def orthogonal_complement(space, diag, ambient_dim):
    """Vectors v with sum_x v_x u_x diag_x = 0 for all u in the space."""
    if not space:
        return full_space(ambient_dim)
    rows = [[u[t] * diag[t] for t in range(ambient_dim)] for u in space]
    return operator_kernel(rows)


# ---------------------------------------------------------------------------
# splitting a commuting family into simple pieces


def splitting_element(ops, dim):
    """A combination of the operators with squarefree charpoly on Q^dim.

    Walks a deterministic sequence of small integer combinations and returns
    (matrix, charpoly, coefficient tuple) for the first that separates.
    """
    if dim == 0:
        return zero_matrix(0, 0), [Fraction(1)], ()
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            if not mat_eq(mat_mul(ops[a], ops[b]), mat_mul(ops[b], ops[a])):
                raise LinalgError("operators %d and %d do not commute" % (a, b))
    combos = [tuple(int(i == j) for j in range(len(ops))) for i in range(len(ops))]
    for width in range(2, len(ops) + 1):
        for hi in range(1, 4):
            combo = [0] * len(ops)
            for j in range(width):
                combo[j] = 1 + (hi * j) % (hi + 1)
            combos.append(tuple(combo))
    seen = set()
    for combo in combos:
        if combo in seen or not any(combo):
            continue
        seen.add(combo)
        t = zero_matrix(dim, dim)
        for c, op in zip(combo, ops):
            if c:
                t = mat_add(t, mat_scale(op, c))
        f = charpoly(t)
        if poly_is_squarefree(f):
            return t, f, combo
    raise LinalgError("no squarefree combination of the given operators")


def simple_pieces(t, f):
    """Kernels of the irreducible factors of f evaluated at t.

    f must be the squarefree charpoly of t; returns (factor, space) pairs in
    the deterministic factor order.
    """
    out = []
    total = 0
    for coeffs, mult in factor_poly(f):
        if mult != 1:
            raise LinalgError("charpoly is not squarefree")
        ker = operator_kernel(poly_eval_matrix(list(coeffs), t))
        if len(ker) != len(coeffs) - 1:
            raise LinalgError("factor kernel has the wrong dimension")
        out.append((list(coeffs), ker))
        total += len(ker)
    if total != len(t):
        raise LinalgError("pieces do not fill the space")
    return out


def cyclic_eigensystem(t_piece, op_pieces, modpoly):
    """Eigenvalue coordinates of commuting operators on a simple piece.

    t_piece acts with irreducible charpoly modpoly, so the piece is a rank one
    module over Q[x]/(modpoly) and every operator is a polynomial in t_piece.
    Returns, for each operator, the coefficient tuple of its eigenvalue in the
    power basis of the class of x.  Each identity is verified on the whole
    piece before being returned.
    """
    d = len(t_piece)
    if d != poly_deg(modpoly):
        raise LinalgError("piece dimension does not match the minimal polynomial")
    v = [Fraction(int(i == 0)) for i in range(d)]
    cols = []
    w = v
    for _ in range(d):
        cols.append(list(w))
        w = mat_vec(t_piece, w)
    k = transpose(cols)
    kinv = invert_matrix(k)
    out = []
    for op in op_pieces:
        img = mat_vec(op, v)
        coords = [sum(kinv[i][t] * img[t] for t in range(d)) for i in range(d)]
        rebuilt = poly_eval_matrix(coords, t_piece)
        if not mat_eq(rebuilt, op):
            raise LinalgError("operator is not a polynomial in the splitting element")
        out.append(tuple(coords))
    return out


def multiplication_matrix(modpoly, coeffs):
    """Matrix of multiplication by an element of Q[x]/(modpoly), power basis."""
    d = poly_deg(modpoly)
    cols = []
    for j in range(d):
        xj = [Fraction(0)] * (j + 1)
        xj[j] = Fraction(1)
        prod = poly_mod(poly_mul(list(coeffs), xj), modpoly)
        col = [Fraction(0)] * d
        for i, c in enumerate(prod):
            col[i] = c
        cols.append(col)
    return transpose(cols)
