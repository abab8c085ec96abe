"""Small dense exact linear algebra over Fraction.

The matrices here are at most ~7x7, so plain Gaussian elimination is fine.
"""

from fractions import Fraction


def _to_rows(a):
    return [[Fraction(x) for x in row] for row in a]


def det(a):
    m = _to_rows(a)
    n = len(m)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign * result


def int_det(a):
    d = det(a)
    assert d.denominator == 1
    return int(d)


def rank(a):
    m = _to_rows(a)
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col] / m[r][col]
                for c in range(col, ncols):
                    m[i][c] -= f * m[r][c]
        r += 1
        if r == len(m):
            break
    return r


def solve(a, b):
    """Solve the square system ``a x = b``; None if ``a`` is singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / p
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def inverse(a):
    n = len(a)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        x = solve(a, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matvec(a, x):
    return tuple(sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), 0)


def affine_rank(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])
