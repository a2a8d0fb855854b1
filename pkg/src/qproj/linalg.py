"""Exact dense linear algebra over :class:`~qproj.scalars.Scalar`.

Matrices are lists of row lists.  Pivoting is always "first nonzero entry
from the top", so results are reproducible.
"""

from .scalars import ONE, ZERO, Scalar


def zeros(rows, cols):
    return [[ZERO] * cols for _ in range(rows)]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [ZERO] * cols
        for k in range(inner):
            x = row[k]
            if not x:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    acc[j] = acc[j] + x * bk[j]
        out.append(acc)
    return out


def transpose(a, cols=None):
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def fraction_free_solve(a, b):
    """Solve ``a x = b`` by fraction-free (Bareiss) Gauss-Jordan elimination.

    Returns ``(det, x)``; ``x`` is None when ``a`` is singular.  Every division
    in the sweep is exact, so intermediate entries stay minors of ``[a | b]``.
    """
    n = len(a)
    m = len(b[0]) if b else 0
    work = [list(a[i]) + list(b[i]) for i in range(n)]
    sign = 1
    prev = ONE
    for k in range(n):
        p = next((r for r in range(k, n) if work[r][k]), None)
        if p is None:
            return ZERO, None
        if p != k:
            work[k], work[p] = work[p], work[k]
            sign = -sign
        pivot_row = work[k]
        pk = pivot_row[k]
        for i in range(n):
            if i == k:
                continue
            row = work[i]
            rik = row[k]
            for j in range(n + m):
                if j == k:
                    continue
                val = pk * row[j]
                if rik and pivot_row[j]:
                    val = val - rik * pivot_row[j]
                row[j] = val / prev if not prev.is_one() else val
            row[k] = ZERO
        prev = pk
    det = prev if sign > 0 else -prev
    inv_pivot = prev.inverse()
    x = [[work[i][n + j] * inv_pivot for j in range(m)] for i in range(n)]
    return det, x


def determinant(a):
    if not a:
        return ONE
    det, _ = fraction_free_solve(a, [[] for _ in a])
    return det


def inverse(a):
    det, x = fraction_free_solve(a, identity(len(a)))
    return x


def rref(rows, ncols):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(work)) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        inv = work[r][c].inverse()
        work[r] = [x * inv if x else x for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y if y else x for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank(rows, ncols=None):
    if not rows:
        return 0
    return len(rref(rows, ncols if ncols is not None else len(rows[0]))[1])


def nullspace(a, ncols):
    """Basis of {x : a x = 0} as a list of column vectors (plain lists)."""
    red, pivots = rref(a, ncols) if a else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def column_space(cols, dim):
    """Independent subset (in order) of the given column vectors."""
    chosen = []
    rows = []
    for v in cols:
        trial = rows + [list(v)]
        if rank(trial, dim) > len(rows):
            rows = trial
            chosen.append(list(v))
    return chosen


def scalar_matrix(rows):
    return [[x if isinstance(x, Scalar) else Scalar(x) for x in row] for row in rows]
