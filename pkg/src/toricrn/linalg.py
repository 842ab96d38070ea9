"""Exact rational linear algebra on small dense matrices.

Everything here works on lists of rows with Fraction (or int) entries.
Matrices in this package are tiny (vertex/edge counts of desk-scale
networks), so clarity wins over asymptotics.
"""

from fractions import Fraction
from math import gcd


def _lcm(a, b):
    return a * b // gcd(a, b)


def rank(rows):
    """Exact rank via Bareiss fraction-free elimination.

    Rows are scaled to integers first; intermediate entries stay integral,
    which keeps the arithmetic predictable for rational inputs.
    """
    m = []
    for row in rows:
        den = 1
        for x in row:
            den = _lcm(den, Fraction(x).denominator)
        m.append([int(Fraction(x) * den) for x in row])
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(col + 1, ncols):
                m[i][j] = (m[r][col] * m[i][j] - m[i][col] * m[r][j]) // prev
            m[i][col] = 0
        prev = m[r][col]
        r += 1
        if r == nrows:
            break
    return r


def rref(rows, ncols=None):
    """Reduced row echelon form over Fraction.

    Returns (matrix, pivot_columns). The input is not modified.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m, pivots


def nullspace(rows, ncols):
    """Rational basis of {v : A v = 0}, one vector per free column of A."""
    m, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(tuple(v))
    return basis


def make_primitive(vec):
    """Scale a rational vector to a primitive integer vector, first nonzero > 0."""
    den = 1
    for x in vec:
        den = _lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def integer_kernel_basis(rows, ncols):
    """Primitive integer kernel basis (canonical: RREF free columns, sign-fixed)."""
    return [make_primitive(v) for v in nullspace(rows, ncols)]


def solve(rows, rhs):
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug, ncols)
    for row in m:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][ncols]
    return x


def lstsq(rows, rhs):
    """Float least-squares solution of A x ~ b via normal equations.

    Small well-conditioned systems only (witness solving in log space).
    """
    nr = len(rows)
    nc = len(rows[0])
    ata = [[sum(rows[i][a] * rows[i][b] for i in range(nr)) for b in range(nc)] for a in range(nc)]
    atb = [sum(rows[i][a] * rhs[i] for i in range(nr)) for a in range(nc)]
    # Gaussian elimination with partial pivoting on the (tiny) normal system.
    for col in range(nc):
        piv = max(range(col, nc), key=lambda i: abs(ata[i][col]))
        if abs(ata[piv][col]) < 1e-300:
            raise ValueError("singular normal equations")
        ata[col], ata[piv] = ata[piv], ata[col]
        atb[col], atb[piv] = atb[piv], atb[col]
        for i in range(col + 1, nc):
            f = ata[i][col] / ata[col][col]
            for j in range(col, nc):
                ata[i][j] -= f * ata[col][j]
            atb[i] -= f * atb[col]
    x = [0.0] * nc
    for i in range(nc - 1, -1, -1):
        s = atb[i] - sum(ata[i][j] * x[j] for j in range(i + 1, nc))
        x[i] = s / ata[i][i]
    return x
