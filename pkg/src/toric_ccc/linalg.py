"""Dense exact linear algebra over the rationals.

Matrices are lists of rows, entries are :class:`fractions.Fraction` (ints are
accepted on input).  Everything here is small: ambient dimension is at most 4
and complexes have at most a few hundred generators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

Vector = tuple
Matrix = list


def sign_of_parity(k: int) -> int:
    """(-1)^k as an int, also for negative k."""
    return -1 if k % 2 else 1


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def vec(xs: Iterable) -> tuple:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return [list(vec(r)) for r in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            x = row[k]
            if x:
                brow = b[k]
                for j in range(cols):
                    y = brow[j]
                    if y:
                        orow[j] += x * y
    return out


def matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(map(frac, r)) for r in a]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int) -> Matrix:
    """Basis (as rows) of {x : a x = 0}, one vector per free column."""
    red, pivots = rref(a, ncols) if a else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence, ncols: int) -> tuple | None:
    """One solution of a x = b (free variables set to zero), or None."""
    aug = [list(r) + [frac(bi)] for r, bi in zip(a, b)]
    red, pivots = rref(aug, ncols + 1) if aug else ([], [])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(map(frac, row)) + ident for row, ident in zip(a, identity(n))]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(a: Matrix) -> Fraction:
    n = len(a)
    rows = [list(map(frac, r)) for r in a]
    d = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            d = -d
        p = rows[c][c]
        d *= p
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


# -- subspaces, stored as rref row bases ------------------------------------


def span(vectors: Iterable[Sequence], n: int) -> tuple:
    rows = [list(map(frac, v)) for v in vectors]
    if not rows:
        return ()
    red, _ = rref(rows, n)
    return tuple(tuple(r) for r in red)


def subspace_sum(u: tuple, v: tuple, n: int) -> tuple:
    return span(list(u) + list(v), n)


def subspace_intersection(u: tuple, v: tuple, n: int) -> tuple:
    if not u or not v:
        return ()
    # x = sum a_i u_i = sum b_j v_j
    k = len(u)
    cols = [list(r) for r in u] + [[-x for x in r] for r in v]
    system = transpose(cols)
    kernel = nullspace(system, len(cols))
    out = []
    for coeffs in kernel:
        out.append([sum((coeffs[i] * u[i][c] for i in range(k)), Fraction(0)) for c in range(n)])
    return span(out, n)


def in_span(x: Sequence, basis: tuple, n: int) -> bool:
    if all(c == 0 for c in x):
        return True
    if not basis:
        return False
    return len(span(list(basis) + [x], n)) == len(basis)


# -- integer helpers ---------------------------------------------------------


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else abs(a or b)


def primitive(v: Sequence) -> tuple:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    fs = [frac(x) for x in v]
    den = reduce(lcm, (x.denominator for x in fs), 1)
    ints = [int(x * den) for x in fs]
    g = reduce(gcd, (abs(i) for i in ints), 0)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(i // g for i in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return reduce(gcd, (abs(int(i)) for i in v), 0) == 1


def minors_gcd(rows: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors of an integer k x n matrix (k <= n)."""
    from itertools import combinations

    k = len(rows)
    if k == 0:
        return 1
    n = len(rows[0])
    g = 0
    for cols in combinations(range(n), k):
        sub = [[r[c] for c in cols] for r in rows]
        g = gcd(g, abs(int(det(sub))))
        if g == 1:
            return 1
    return g


def fmt(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _integer_rows(a: Matrix) -> list[dict]:
    rows = []
    for r in a:
        fs = [frac(x) for x in r]
        den = reduce(lcm, (x.denominator for x in fs if x), 1)
        row = {j: int(x * den) for j, x in enumerate(fs) if x}
        if row:
            rows.append(row)
    return rows


def sparse_rank(a: Matrix) -> int:
    """Exact rank by fraction-free elimination on sparse integer rows.

    Much faster than :func:`rank` for the sparse +-1 matrices of Theta
    complexes.
    """
    rows = _integer_rows(a)
    rank_ = 0
    while rows:
        # pivot: shortest row, smallest leading column
        best = min(range(len(rows)), key=lambda i: (len(rows[i]), min(rows[i])))
        prow = rows.pop(best)
        col = min(prow)
        pv = prow[col]
        rank_ += 1
        nxt = []
        for row in rows:
            rv = row.get(col)
            if rv:
                new = {}
                for j, x in row.items():
                    new[j] = pv * x
                for j, x in prow.items():
                    y = new.get(j, 0) - rv * x
                    if y:
                        new[j] = y
                    else:
                        new.pop(j, None)
                if new:
                    g = reduce(gcd, (abs(v) for v in new.values()))
                    if g > 1:
                        new = {j: v // g for j, v in new.items()}
                    nxt.append(new)
            else:
                nxt.append(row)
        rows = nxt
    return rank_
