"""Hypothesis strategies shared across test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from toric_ccc.euler import CF, closed_polytope, indicator_open
from toric_ccc.geometry import try_cell

small = st.integers(-3, 3)


@st.composite
def cells(draw, n: int, homogeneous: bool = False, max_rows: int = 3):
    """Random nonempty relatively open cell in R^n."""
    while True:
        rows = draw(st.lists(st.tuples(st.tuples(*[small] * n), small), min_size=0, max_size=max_rows))
        neq = draw(st.integers(0, min(1, len(rows))))
        eqs, gts = [], []
        for i, (a, b) in enumerate(rows):
            if not any(a):
                continue
            b = 0 if homogeneous else b
            (eqs if i < neq else gts).append((a, b))
        c = try_cell(n, eqs, gts)
        if c is not None:
            return c


@st.composite
def functions(draw, n: int, homogeneous: bool = False, max_terms: int = 3):
    terms = draw(st.lists(st.tuples(cells(n, homogeneous), st.integers(-2, 2)), min_size=1, max_size=max_terms))
    return CF.from_terms(n, terms)


@st.composite
def boxes(draw, n: int):
    """Closed lattice box as a constructible function (standard indicator)."""
    lo = [draw(st.integers(-2, 1)) for _ in range(n)]
    size = [draw(st.integers(0, 2)) for _ in range(n)]
    rows = []
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        rows.append((e, lo[i]))
        rows.append((tuple(-x for x in e), -(lo[i] + size[i])))
    return closed_polytope(n, rows), lo, size


@st.composite
def polygons(draw):
    """Closed lattice triangle or segment or point in R^2 given by vertices."""
    pts = draw(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=3, unique=True))
    return pts


def frac_vectors(n: int):
    return st.tuples(*[st.fractions(min_value=-3, max_value=3, max_denominator=4)] * n)


__all__ = ["cells", "functions", "boxes", "polygons", "frac_vectors", "indicator_open", "Fraction"]


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_indicator(points):
    """Closed convex hull of planar lattice points as a standard indicator."""
    hull = _hull(points)
    if len(hull) == 1:
        (p,) = hull
        return closed_polytope(2, [], [((1, 0), p[0]), ((0, 1), p[1])])
    if len(hull) == 2:
        a, b = hull
        d = (b[0] - a[0], b[1] - a[1])
        nrm = (-d[1], d[0])
        dot = lambda u, v: u[0] * v[0] + u[1] * v[1]
        return closed_polytope(2, [(d, dot(d, a)), ((-d[0], -d[1]), -dot(d, b))], [(nrm, dot(nrm, a))])
    rows = []
    for i, v in enumerate(hull):
        w = hull[(i + 1) % len(hull)]
        e = (w[0] - v[0], w[1] - v[1])
        nrm = (-e[1], e[0])
        rows.append((nrm, nrm[0] * v[0] + nrm[1] * v[1]))
    return closed_polytope(2, rows)


def minkowski(p, q):
    return [(a[0] + b[0], a[1] + b[1]) for a in p for b in q]
