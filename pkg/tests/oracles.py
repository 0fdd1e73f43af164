"""Independent brute-force oracles used to freeze expected test values.

Deliberately naive and separate from the package under test: plain
Fraction Gauss elimination, hand-assembled constraint systems.  Anything
asserted against package output was first computed here (or by hand).
"""

from fractions import Fraction


def frac_rows(rows):
    return [[Fraction(x) for x in r] for r in rows]


def gauss_rank(rows):
    """Row reduce a list of Fraction rows, returning the rank."""
    m = [r[:] for r in frac_rows(rows)]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        rank += 1
    return rank


def nullity(rows):
    cols = len(rows[0])
    return cols - gauss_rank(rows)


def gauss_solve(rows, rhs):
    """Solve A x = b; returns one solution or None if inconsistent."""
    m = [r[:] + [b] for r, b in zip(frac_rows(rows), [Fraction(x) for x in rhs])]
    cols = len(rows[0])
    rank = 0
    pivots = []
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        pivots.append(c)
        rank += 1
    for i in range(rank, len(m)):
        if m[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = m[r][cols] / m[r][c]
    return x


def gauss_nullspace(rows):
    """Basis of {x : A x = 0} by plain elimination (independent route)."""
    m = [r[:] for r in frac_rows(rows)]
    cols = len(m[0]) if m else 0
    rank = 0
    pivots = []
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        pivots.append(c)
        rank += 1
    pivot_set = set(pivots)
    out = []
    for fc in range(cols):
        if fc in pivot_set:
            continue
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc] / m[r][pc]
        out.append(v)
    return out


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b)))
             for j in range(len(b[0]))] for i in range(len(a))]


def multiplication_matrix(table, n):
    """The multiplication map A⊗A → A of an n-dim algebra as an n × n² matrix.

    ``table[i][j]`` is the coordinate list of e_i e_j.
    """
    cols = []
    for i in range(n):
        for j in range(n):
            cols.append([Fraction(x) for x in table[i][j]])
    return [[cols[c][r] for c in range(n * n)] for r in range(n)]


def leibniz_solution_dim(table, n):
    """dim of {u : K^n→K^n linear, u(e_i e_j) = u(e_i)e_j + e_i u(e_j)}.

    Hand assembly: unknowns u[r][c] flattened row-major; one constraint row
    per (i, j, output coordinate).
    """
    def mul_coords(x, y):
        out = [Fraction(0)] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                for k in range(n):
                    out[k] += x[i] * y[j] * Fraction(table[i][j][k])
        return out

    def basis(i):
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        return v

    rows = []
    for i in range(n):
        for j in range(n):
            prod_ij = [Fraction(table[i][j][k]) for k in range(n)]
            for out_k in range(n):
                row = [Fraction(0)] * (n * n)
                # u(e_i e_j) term
                for m in range(n):
                    if prod_ij[m] != 0:
                        row[out_k * n + m] += prod_ij[m]
                # -u(e_i) e_j term: (u(e_i) e_j)_k = sum_m u[m][i] (e_m e_j)_k
                for m in range(n):
                    row[m * n + i] -= Fraction(table[m][j][out_k])
                # -e_i u(e_j) term
                for m in range(n):
                    row[m * n + j] -= Fraction(table[i][m][out_k])
                rows.append(row)
    return nullity(rows)


def center_dim(table, n):
    """dim of {z : z e_i = e_i z for all i} by direct constraint assembly."""
    rows = []
    for i in range(n):
        for k in range(n):
            row = [Fraction(table[j][i][k]) - Fraction(table[i][j][k])
                   for j in range(n)]
            rows.append(row)
    return nullity(rows)


def random_rational(rng, span=6):
    num = rng.randrange(-span, span + 1)
    den = rng.randrange(1, 4)
    return Fraction(num, den)
