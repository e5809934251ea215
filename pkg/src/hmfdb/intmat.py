"""Exact integer matrix utilities: Hermite forms, kernels, lattice arithmetic.

Matrices are lists of rows of Python ints.  Lattices are column spans.  All
routines are deterministic: pivot choices depend only on entry positions and
values, never on hashing or randomness.
"""

from __future__ import annotations

from fractions import Fraction


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    m, k = len(a), len(b)
    n = len(b[0]) if b else 0
    out = zeros(m, n)
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(n):
                    oi[j] += x * bt[j]
    return out

def mat_vec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def columns(a):
    return [[a[i][j] for i in range(len(a))] for j in range(len(a[0]) if a else 0)]


def from_columns(cols):
    if not cols:
        return []
    return [[c[i] for c in cols] for i in range(len(cols[0]))]


def hnf(a):
    """Column Hermite normal form of an integer matrix.

    Returns (h, u) with h = a*u, u unimodular, h lower-staircase by columns:
    zero columns are dropped, pivots are positive, entries right of a pivot in
    its row are reduced into [0, pivot).
    """
    m = len(a)
    n = len(a[0]) if a else 0
    h = [list(row) for row in a]
    u = identity(n)

    def col_op(j, k, x):
        # column j += x * column k, in both h and u
        for i in range(m):
            h[i][j] += x * h[i][k]
        for i in range(n):
            u[i][j] += x * u[i][k]

    def col_swap(j, k):
        for i in range(m):
            h[i][j], h[i][k] = h[i][k], h[i][j]
        for i in range(n):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    def col_neg(j):
        for i in range(m):
            h[i][j] = -h[i][j]
        for i in range(n):
            u[i][j] = -u[i][j]

    row = 0
    col = 0
    while row < m and col < n:
        # gcd out the row across columns col..n-1
        piv = None
        for j in range(col, n):
            if h[row][j]:
                piv = j
                break
        if piv is None:
            row += 1
            continue
        col_swap(col, piv)
        for j in range(col + 1, n):
            while h[row][j]:
                q = h[row][j] // h[row][col]
                col_op(j, col, -q)
                if h[row][j]:
                    col_swap(col, j)
        if h[row][col] < 0:
            col_neg(col)
        for j in range(col):
            q = h[row][j] // h[row][col]
            if q:
                col_op(j, col, -q)
        row += 1
        col += 1
    keep = [j for j in range(n) if any(h[i][j] for i in range(m))]
    hh = [[h[i][j] for j in keep] for i in range(m)]
    uu = [[u[i][j] for j in keep] for i in range(n)]
    return hh, uu


def hnf_basis(cols):
    """HNF basis of the lattice spanned by the given columns."""
    if not cols:
        return []
    h, _ = hnf(from_columns(cols))
    return columns(h) if h and h[0] else []


def kernel_int(a):
    """Basis (list of columns) of the integer kernel {x : a x = 0}."""
    m = len(a)
    n = len(a[0]) if a else 0
    if n == 0:
        return []
    # column-reduce as in hnf; kernel = columns of u whose h-column vanishes
    h = [list(row) for row in a]
    u = identity(n)
    row = 0
    col = 0

    def col_op(j, k, x):
        for i in range(m):
            h[i][j] += x * h[i][k]
        for i in range(n):
            u[i][j] += x * u[i][k]

    def col_swap(j, k):
        for i in range(m):
            h[i][j], h[i][k] = h[i][k], h[i][j]
        for i in range(n):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    while row < m and col < n:
        piv = None
        for j in range(col, n):
            if h[row][j]:
                piv = j
                break
        if piv is None:
            row += 1
            continue
        col_swap(col, piv)
        for j in range(col + 1, n):
            while h[row][j]:
                q = h[row][j] // h[row][col]
                col_op(j, col, -q)
                if h[row][j]:
                    col_swap(col, j)
        row += 1
        col += 1
    out = []
    for j in range(n):
        if not any(h[i][j] for i in range(m)):
            out.append([u[i][j] for i in range(n)])
    return out


def det(a):
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = None
            for i in range(k + 1, n):
                if m[i][k]:
                    piv = i
                    break
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_int(a, b):
    """One integer solution x of a x = b, or None if none exists."""
    m = len(a)
    n = len(a[0]) if a else 0
    h = [list(row) for row in a]
    u = identity(n)
    row = 0
    col = 0

    def col_op(j, k, x):
        for i in range(m):
            h[i][j] += x * h[i][k]
        for i in range(n):
            u[i][j] += x * u[i][k]

    def col_swap(j, k):
        for i in range(m):
            h[i][j], h[i][k] = h[i][k], h[i][j]
        for i in range(n):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    pivots = []
    while row < m and col < n:
        piv = None
        for j in range(col, n):
            if h[row][j]:
                piv = j
                break
        if piv is None:
            row += 1
            continue
        col_swap(col, piv)
        for j in range(col + 1, n):
            while h[row][j]:
                q = h[row][j] // h[row][col]
                col_op(j, col, -q)
                if h[row][j]:
                    col_swap(col, j)
        if h[row][col] < 0:
            for i in range(m):
                h[i][col] = -h[i][col]
            for i in range(n):
                u[i][col] = -u[i][col]
        pivots.append((row, col))
        row += 1
        col += 1
    # back-substitute through the staircase
    y = [0] * n
    r = list(b)
    for prow, pcol in pivots:
        # everything above prow in column pcol is zero except prior pivots
        val = r[prow]
        if val % h[prow][pcol]:
            return None
        q = val // h[prow][pcol]
        y[pcol] = q
        for i in range(m):
            r[i] -= q * h[i][pcol]
    if any(r):
        return None
    return mat_vec(u, y)


def lattice_sum(cols_a, cols_b):
    return hnf_basis(list(cols_a) + list(cols_b))


def lattice_intersection(cols_a, cols_b):
    """Basis of span(cols_a) ∩ span(cols_b)."""
    if not cols_a or not cols_b:
        return []
    stacked = from_columns([list(c) for c in cols_a] + [[-x for x in c] for c in cols_b])
    ker = kernel_int(stacked)
    na = len(cols_a)
    vecs = []
    for k in ker:
        v = [0] * len(cols_a[0])
        for j in range(na):
            if k[j]:
                for i in range(len(v)):
                    v[i] += k[j] * cols_a[j][i]
        vecs.append(v)
    return hnf_basis(vecs)


def lattice_contains(hnf_cols, v):
    """Whether v lies in the lattice with the given HNF column basis."""
    return lattice_solve(hnf_cols, v) is not None


def lattice_solve(hnf_cols, v):
    """Coordinates of v in an HNF column basis, or None."""
    if not hnf_cols:
        return None if any(v) else []
    m = len(hnf_cols[0])
    r = list(v)
    coords = [0] * len(hnf_cols)
    # staircase: find pivot row of each column
    piv_rows = []
    for c in hnf_cols:
        for i in range(m):
            if c[i]:
                piv_rows.append(i)
                break
    for j, c in enumerate(hnf_cols):
        i = piv_rows[j]
        if r[i] % c[i]:
            return None
        q = r[i] // c[i]
        coords[j] = q
        if q:
            for t in range(m):
                r[t] -= q * c[t]
    if any(r):
        return None
    return coords


def lattice_index(cols_sup, cols_sub):
    """Index [sup : sub] of one full-rank lattice in another."""
    da = abs(det(from_columns(cols_sup)))
    db = abs(det(from_columns(cols_sub)))
    if da == 0 or db % da:
        raise ValueError("not a finite-index sublattice")
    return db // da


def preimage_lattice(a, cols_mod, n_keep):
    """Basis of {x in Z^n_keep : a x in span(cols_mod)}.

    a maps Z^n_keep into Z^m; cols_mod is a lattice in Z^m.
    """
    m = len(a)
    stacked = [list(a[i]) + [-c[i] for c in cols_mod] for i in range(m)]
    ker = kernel_int(stacked)
    vecs = [k[:n_keep] for k in ker]
    return hnf_basis(vecs)


def frac_mat_to_int(a):
    """Clear denominators: returns (integer matrix, lcm denominator)."""
    den = 1
    for row in a:
        for x in row:
            f = Fraction(x)
            den = den * f.denominator // _gcd(den, f.denominator)
    out = [[int(Fraction(x) * den) for x in row] for row in a]
    return out, den


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)
