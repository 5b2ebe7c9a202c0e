"""Exact polyhedral primitives: relatively open cells, cones, arrangements.

A :class:`Cell` is a nonempty set ``{x : a.x = b (eqs), a.x > b (gts)}``.  It is
relatively open and convex, so its compactly supported Euler characteristic is
``(-1) ** dim``.  Closed sets are handled as unions of their relatively open
faces.  Feasibility, sample points and projections all go through
Fourier-Motzkin elimination on rationals, which is adequate because the
ambient dimension never exceeds 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import floor, ceil
from typing import Iterable, Sequence

from . import linalg as la

MAX_DIM = 4


class GeometryError(ValueError):
    """Invalid geometric input (dimension mismatch, empty cell, ...)."""


class EmptyCellError(GeometryError):
    pass


# ---------------------------------------------------------------------------
# Fourier-Motzkin machinery.  A constraint is (a, b, strict): a.x > b or a.x >= b.
# ---------------------------------------------------------------------------


def _normalize(a: Sequence[Fraction], b: Fraction) -> tuple[tuple, Fraction] | None:
    """Scale by a positive factor so that ``a`` is a primitive integer vector."""
    p = la.primitive(a)
    if not any(p):
        return None
    for x, y in zip(a, p):
        if x:
            scale = Fraction(y) / x
            return tuple(Fraction(v) for v in p), b * scale
    raise AssertionError


def _prune(cons):
    """Drop duplicates and parallel dominated constraints.

    Returns (constraints, ok) where ok is False when a constant constraint is
    violated.
    """
    best: dict[tuple, tuple[Fraction, bool]] = {}
    for a, b, strict in cons:
        norm = _normalize(a, b)
        if norm is None:
            if strict and not (0 > b):
                return [], False
            if not strict and not (0 >= b):
                return [], False
            continue
        key, nb = norm
        old = best.get(key)
        if old is None or (nb, strict) > old:
            best[key] = (nb, strict)
    return [(k, v[0], v[1]) for k, v in best.items()], True


def _eliminate(cons, var):
    pos, neg, rest = [], [], []
    for c in cons:
        coef = c[0][var]
        if coef > 0:
            pos.append(c)
        elif coef < 0:
            neg.append(c)
        else:
            rest.append(c)
    out = list(rest)
    for ap, bp, sp in pos:
        cp = ap[var]
        for an, bn, sn in neg:
            cn = -an[var]
            a = tuple(cn * x + cp * y for x, y in zip(ap, an))
            out.append((a, cn * bp + cp * bn, sp or sn))
    return out


def _simplest_in(lo, lo_strict, hi, hi_strict) -> Fraction:
    """Simplest rational (smallest denominator, then magnitude) in an interval."""

    def ok(x):
        if lo is not None and (x < lo or (lo_strict and x == lo)):
            return False
        if hi is not None and (x > hi or (hi_strict and x == hi)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is None:
        c = Fraction(floor(hi))
        return c if ok(c) else c - 1
    if hi is None:
        c = Fraction(ceil(lo))
        return c if ok(c) else c + 1
    if lo == hi:
        return lo
    # integer closest to zero, if any (0 itself was rejected above)
    if lo >= 0:
        c = Fraction(ceil(lo))
        c = c if ok(c) else c + 1
    else:
        c = Fraction(floor(hi))
        c = c if ok(c) else c - 1
    if ok(c):
        return c
    # Stern-Brocot descent inside (base, base + 1)
    base = floor(lo)
    lo2, hi2 = lo - base, hi - base
    num_lo, den_lo, num_hi, den_hi = 0, 1, 1, 0
    while True:
        m = Fraction(num_lo + num_hi, den_lo + den_hi)
        if m < lo2 or (m == lo2 and lo_strict):
            num_lo, den_lo = m.numerator, m.denominator
        elif m > hi2 or (m == hi2 and hi_strict):
            num_hi, den_hi = m.numerator, m.denominator
        else:
            return m + base


def _choose(lo, lo_strict, hi, hi_strict, bias):
    if bias is None:
        return _simplest_in(lo, lo_strict, hi, hi_strict)
    if lo is not None and hi is not None:
        if lo == hi:
            return lo
        return lo + bias * (hi - lo)
    if lo is not None:
        return lo + 1 / bias
    if hi is not None:
        return hi - 1 / bias
    return bias


def fm_solve(cons, nvars: int, bias: Fraction | None = None):
    """Return a point satisfying all constraints, or None if infeasible."""
    cons, ok = _prune(cons)
    if not ok:
        return None
    levels = []
    for var in reversed(range(nvars)):
        levels.append(cons)
        cons, ok = _prune(_eliminate(cons, var))
        if not ok:
            return None
    x: list[Fraction] = []
    for var in range(nvars):
        system = levels[nvars - 1 - var]
        lo = hi = None
        lo_s = hi_s = False
        for a, b, strict in system:
            coef = a[var]
            if coef == 0:
                continue
            rhs = (b - sum((a[i] * x[i] for i in range(var)), Fraction(0))) / coef
            if coef > 0:
                if lo is None or rhs > lo or (rhs == lo and strict):
                    lo, lo_s = rhs, strict
            else:
                if hi is None or rhs < hi or (rhs == hi and strict):
                    hi, hi_s = rhs, strict
        x.append(_choose(lo, lo_s, hi, hi_s, bias))
    return tuple(x)


def fm_project(cons, nvars: int, keep: int):
    """Eliminate variables ``keep..nvars-1``; returns constraints on the first ``keep``."""
    cons, ok = _prune(cons)
    if not ok:
        return None
    for var in reversed(range(keep, nvars)):
        cons, ok = _prune(_eliminate(cons, var))
        if not ok:
            return None
    return [(a[:keep], b, s) for a, b, s in cons]


# ---------------------------------------------------------------------------
# affine subspaces
# ---------------------------------------------------------------------------


def _canonical_equalities(n: int, eqs):
    """rref of the augmented equality system; None if inconsistent."""
    rows = [list(a) + [b] for a, b in eqs]
    if not rows:
        return (), []
    red, pivots = la.rref(rows, n + 1)
    if n in pivots:
        return None
    return tuple((tuple(r[:n]), r[n]) for r in red), pivots


def _parametrize(n: int, eqs):
    """Solutions of the (consistent, rref) system as x = x0 + t K (rows of K)."""
    a = [list(e[0]) for e in eqs]
    b = [e[1] for e in eqs]
    x0 = la.solve(a, b, n) if eqs else tuple(Fraction(0) for _ in range(n))
    kernel = la.nullspace(a, n) if eqs else la.identity(n)
    return x0, kernel


# ---------------------------------------------------------------------------
# cells
# ---------------------------------------------------------------------------


Constraint = tuple  # (normal tuple, offset Fraction)


def _norm_gt(a, b):
    return _normalize(la.vec(a), la.frac(b))


@dataclass(frozen=True)
class Cell:
    """Relatively open polyhedral cell ``{eqs hold, gts hold strictly}``.

    Build cells with :func:`make_cell` / :func:`try_cell`; the constructor does
    not canonicalize.
    """

    ambient_dim: int
    equalities: tuple = ()
    inequalities: tuple = ()
    _pivots: tuple = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equalities)

    def constraints(self):
        for a, b in self.equalities:
            yield a, b, False
            yield tuple(-x for x in a), -b, False
        for a, b in self.inequalities:
            yield a, b, True

    @cached_property
    def _sample(self):
        return _cell_sample(self, None)

    def sample_point(self, bias: Fraction | None = None) -> tuple:
        if bias is None:
            return self._sample
        return _cell_sample(self, la.frac(bias))

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient_dim:
            raise GeometryError("dimension mismatch")
        x = la.vec(x)
        return all(la.dot(a, x) == b for a, b in self.equalities) and all(
            la.dot(a, x) > b for a, b in self.inequalities
        )

    def closure_contains(self, x: Sequence) -> bool:
        x = la.vec(x)
        return all(la.dot(a, x) == b for a, b in self.equalities) and all(
            la.dot(a, x) >= b for a, b in self.inequalities
        )

    def intersect(self, other: "Cell") -> "Cell | None":
        if other.ambient_dim != self.ambient_dim:
            raise GeometryError("dimension mismatch")
        return try_cell(
            self.ambient_dim,
            self.equalities + other.equalities,
            self.inequalities + other.inequalities,
        )

    def faces(self) -> list["Cell"]:
        """All relatively open faces of the closure (including this cell)."""
        return closed_faces(self.ambient_dim, self.equalities, self.inequalities)

    def is_bounded(self) -> bool:
        # recession cone of the closure: eqs homogeneous, gts -> >= 0
        cons = [(a, Fraction(0), False) for a, _ in self.inequalities]
        for a, _ in self.equalities:
            cons.append((a, Fraction(0), False))
            cons.append((tuple(-x for x in a), Fraction(0), False))
        # bounded iff no recession direction has a nonzero coordinate
        for i in range(self.ambient_dim):
            for s in (1, -1):
                e = tuple(Fraction(s if j == i else 0) for j in range(self.ambient_dim))
                if fm_solve(cons + [(e, Fraction(0), True)], self.ambient_dim) is not None:
                    return False
        return True

    def hyperplanes(self) -> list[tuple]:
        hs = [canonical_hyperplane(a, b) for a, b in self.equalities]
        hs += [canonical_hyperplane(a, b) for a, b in self.inequalities]
        return hs

    def translate(self, v: Sequence) -> "Cell":
        v = la.vec(v)
        return make_cell(
            self.ambient_dim,
            [(a, b + la.dot(a, v)) for a, b in self.equalities],
            [(a, b + la.dot(a, v)) for a, b in self.inequalities],
        )

    def minimized(self) -> "Cell":
        """Same set with redundant strict inequalities removed."""
        keep = list(self.inequalities)
        i = 0
        while i < len(keep):
            a, b = keep[i]
            others = keep[:i] + keep[i + 1:]
            cons = [(x, y, True) for x, y in others]
            for ea, eb in self.equalities:
                cons.append((ea, eb, False))
                cons.append((tuple(-t for t in ea), -eb, False))
            cons.append((tuple(-t for t in a), -b, False))
            if fm_solve(cons, self.ambient_dim) is None:
                keep = others
            else:
                i += 1
        return Cell(self.ambient_dim, self.equalities, tuple(keep), self._pivots)

    def __repr__(self) -> str:
        def term(a):
            return " + ".join(f"{la.fmt(c)}*x{i}" for i, c in enumerate(a) if c) or "0"

        parts = [f"{term(a)} = {la.fmt(b)}" for a, b in self.equalities]
        parts += [f"{term(a)} > {la.fmt(b)}" for a, b in self.inequalities]
        return f"Cell[{self.ambient_dim}]({'; '.join(parts) or 'all'})"


def _cell_sample(cell: Cell, bias):
    n = cell.ambient_dim
    x0, kernel = _parametrize(n, cell.equalities)
    k = len(kernel)
    cons = []
    for a, b in cell.inequalities:
        ka = tuple(la.dot(a, row) for row in kernel)
        cons.append((ka, b - la.dot(a, x0), True))
    t = fm_solve(cons, k, bias)
    if t is None:
        raise EmptyCellError(repr(cell))
    return tuple(x0[i] + sum((t[j] * kernel[j][i] for j in range(k)), Fraction(0)) for i in range(n))


def try_cell(n: int, eqs: Iterable = (), gts: Iterable = (), nonempty: bool = False) -> Cell | None:
    """Canonicalize a constraint system; None if the cell is empty.

    ``nonempty`` skips the feasibility test when the caller already knows.
    """
    eqs = [(la.vec(a), la.frac(b)) for a, b in eqs]
    for a, _ in eqs:
        if len(a) != n:
            raise GeometryError("dimension mismatch")
    canon = _canonical_equalities(n, eqs)
    if canon is None:
        return None
    rows, pivots = canon
    reduced = {}
    for a, b in gts:
        a = la.vec(a)
        b = la.frac(b)
        if len(a) != n:
            raise GeometryError("dimension mismatch")
        if rows:
            a = list(a)
            for (ra, rb), p in zip(rows, pivots):
                f = a[p]
                if f:
                    a = [x - f * y for x, y in zip(a, ra)]
                    b = b - f * rb
        norm = _normalize(a, b)
        if norm is None:
            if not (0 > b):
                return None
            continue
        key, nb = norm
        if key not in reduced or nb > reduced[key]:
            reduced[key] = nb
    ineqs = tuple(sorted(reduced.items()))
    cell = Cell(n, rows, ineqs, tuple(pivots))
    if nonempty:
        return cell
    x0, kernel = _parametrize(n, rows)
    cons = [(tuple(la.dot(a, r) for r in kernel), b - la.dot(a, x0), True) for a, b in ineqs]
    t = fm_solve(cons, len(kernel))
    if t is None:
        return None
    # same point _cell_sample would find; cache it
    cell.__dict__["_sample"] = tuple(
        x0[i] + sum((t[j] * kernel[j][i] for j in range(len(kernel))), Fraction(0)) for i in range(n))
    return cell


def make_cell(n: int, eqs: Iterable = (), gts: Iterable = ()) -> Cell:
    cell = try_cell(n, eqs, gts)
    if cell is None:
        raise EmptyCellError("empty cell")
    return cell


def whole_space(n: int) -> Cell:
    return Cell(n)


def point_cell(p: Sequence) -> Cell:
    p = la.vec(p)
    n = len(p)
    return make_cell(n, [(tuple(Fraction(int(i == j)) for j in range(n)), p[i]) for i in range(n)])


def box_cell(lo: Sequence, hi: Sequence) -> Cell:
    """Open box prod (lo_i, hi_i)."""
    n = len(lo)
    gts = []
    for i in range(n):
        e = tuple(Fraction(int(i == j)) for j in range(n))
        gts.append((e, la.frac(lo[i])))
        gts.append((tuple(-x for x in e), -la.frac(hi[i])))
    return make_cell(n, [], gts)


def sample_point(c: Cell) -> tuple:
    return c.sample_point()


def closed_faces(n: int, eqs, ineqs) -> list[Cell]:
    """Relatively open faces of ``{eqs, a.x >= b}``, by {=,>} sign patterns."""
    ineqs = list(ineqs)
    out: list[Cell] = []

    def rec(i, cur_eq, cur_gt):
        cell = try_cell(n, cur_eq, cur_gt)
        if cell is None:
            return
        if i == len(ineqs):
            out.append(cell)
            return
        a, b = ineqs[i]
        rec(i + 1, cur_eq + [(a, b)], cur_gt)
        rec(i + 1, cur_eq, cur_gt + [(a, b)])

    rec(0, list(eqs), [])
    return out


# ---------------------------------------------------------------------------
# hyperplane arrangements
# ---------------------------------------------------------------------------


def canonical_hyperplane(a, b) -> tuple:
    a = la.vec(a)
    norm = _normalize(a, la.frac(b))
    if norm is None:
        raise GeometryError("degenerate hyperplane")
    key, nb = norm
    first = next(x for x in key if x)
    if first < 0:
        key = tuple(-x for x in key)
        nb = -nb
    return key, nb


@dataclass(frozen=True)
class Arrangement:
    ambient_dim: int
    hyperplanes: tuple
    cells: tuple

    def locate(self, x) -> Cell:
        for c in self.cells:
            if c.contains(x):
                return c
        raise GeometryError("point not covered")


def _split(cell: Cell, a, b):
    """Split a cell by the hyperplane a.x = b into its nonempty pieces."""
    n = cell.ambient_dim
    a, b = la.vec(a), la.frac(b)
    neg = (tuple(-x for x in a), -b)
    side = la.dot(a, cell.sample_point()) - b
    if side == 0:
        _, kernel = _parametrize(n, cell.equalities)
        if not any(la.dot(a, row) for row in kernel):
            # the hyperplane contains the cell
            return [try_cell(n, cell.equalities + ((a, b),), cell.inequalities, nonempty=True)]
    else:
        # the sample shows one side is nonempty; test the other.  A relatively
        # open convex cell meeting the hyperplane without lying in it has
        # points on both sides, so a one-sided cell is never cut.
        other = try_cell(n, cell.equalities, cell.inequalities + ((neg if side > 0 else (a, b)),))
        if other is None:
            return [cell]
    pieces = {}
    if side != 0:
        pieces[-1 if side > 0 else 1] = other
    for sgn, row in ((-1, neg), (1, (a, b))):
        if sgn not in pieces:
            pieces[sgn] = try_cell(n, cell.equalities, cell.inequalities + (row,), nonempty=True)
    zero = try_cell(n, cell.equalities + ((a, b),), cell.inequalities, nonempty=True)
    return [pieces[-1], zero, pieces[1]]


def arrangement(n: int, hyperplanes: Iterable, within: Cell | None = None) -> Arrangement:
    """Cells of the arrangement (optionally restricted to a cell).

    Cells are the nonempty sign classes; they are built incrementally by
    splitting with one hyperplane at a time.
    """
    hs = sorted({canonical_hyperplane(a, b) for a, b in hyperplanes})
    if within is not None:
        # a hyperplane that misses the cell cannot cut any of its pieces
        hs = [h for h in hs if len(_split(within, *h)) > 1]
    cells = [within if within is not None else whole_space(n)]
    for a, b in hs:
        nxt = []
        for c in cells:
            nxt.extend(_split(c, a, b))
        cells = nxt
    return Arrangement(n, tuple(hs), tuple(cells))


def refine(cells: Sequence[Cell]) -> Arrangement:
    """Common refinement: the arrangement of every defining hyperplane."""
    if not cells:
        raise GeometryError("nothing to refine")
    n = cells[0].ambient_dim
    hs = []
    for c in cells:
        if c.ambient_dim != n:
            raise GeometryError("dimension mismatch")
        hs.extend(c.hyperplanes())
    return arrangement(n, hs)


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def project_cell(cell: Cell, u: Sequence[Sequence], offset: Sequence | None = None) -> Cell:
    """Image of a cell under x -> u x (+ offset), as a cell in the target."""
    n = cell.ambient_dim
    m = len(u)
    u = [la.vec(r) for r in u]
    for r in u:
        if len(r) != n:
            raise GeometryError("dimension mismatch")
    # parametrize the cell: x = x0 + t K
    x0, kernel = _parametrize(n, cell.equalities)
    k = len(kernel)
    # y = u x0 + (u K^T) t
    y0 = la.matvec(u, x0)
    if offset is not None:
        y0 = tuple(p + q for p, q in zip(y0, la.vec(offset)))
    uk = [[la.dot(r, kr) for kr in kernel] for r in u]  # m x k
    # variables ordered (t, y); equalities y - uk t = y0
    eq_rows = []
    for i in range(m):
        row = [-x for x in uk[i]] + [Fraction(int(i == j)) for j in range(m)]
        eq_rows.append(row + [y0[i]])
    red, pivots = la.rref(eq_rows, k + m + 1)
    subs = {}
    y_eqs = []
    for row, p in zip(red, pivots):
        if p < k:
            subs[p] = row
        else:
            y_eqs.append((tuple(row[k:k + m]), row[k + m]))
    ineqs = []
    for a, b in cell.inequalities:
        ka = [la.dot(a, kr) for kr in kernel] + [Fraction(0)] * m
        bb = b - la.dot(a, x0)
        for p, row in subs.items():
            f = ka[p]
            if f:
                # t_p = row[k+m] - sum_{j != p} row[j] v_j
                ka = [x - f * y for x, y in zip(ka, row[:k + m])]
                bb = bb - f * row[k + m]
        ineqs.append((tuple(ka), bb, True))
    free = [j for j in range(k) if j not in subs]
    # reorder variables: y first then free t's, eliminate t's
    order = list(range(k, k + m)) + free
    cons = [(tuple(a[j] for j in order), b, s) for a, b, s in ineqs]
    projected = fm_project(cons, len(order), m)
    if projected is None:
        raise EmptyCellError("projection of empty cell")
    img = make_cell(m, y_eqs, [(a, b) for a, b, _ in projected])
    return img.minimized() if len(img.inequalities) > 2 * m + 2 else img


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------


def _lineality_basis(rows, n):
    kern = la.nullspace([list(r) for r in rows], n) if rows else la.identity(n)
    if not kern:
        return []
    red, _ = la.rref(kern, n)
    return [la.primitive(r) for r in red]


def hcone_generators(rows: Sequence[Sequence], n: int) -> list[tuple]:
    """Minimal generators of {x : r.x >= 0 for r in rows}.

    Lineality is returned as +-(primitive rref basis); extreme rays are those
    of the pointed part orthogonal to the lineality space.
    """
    rows = [la.primitive(r) for r in rows if any(r)]
    rows = sorted(set(rows))
    lin = _lineality_basis(rows, n)
    gens = set()
    for v in lin:
        gens.add(tuple(v))
        gens.add(tuple(-x for x in v))
    lin_rows = [list(map(Fraction, v)) for v in lin]
    need = n - 1 - len(lin_rows)
    if need >= 0:
        frows = [list(map(Fraction, r)) for r in rows]
        for subset in combinations(range(len(frows)), need):
            system = [frows[i] for i in subset] + lin_rows
            kern = la.nullspace(system, n)
            if len(kern) != 1:
                continue
            r = kern[0]
            for s in (1, -1):
                cand = [s * x for x in r]
                if all(la.dot(row, cand) >= 0 for row in frows):
                    gens.add(la.primitive(cand))
    return sorted(gens)


class Cone:
    """Closed rational polyhedral cone with canonical minimal generators."""

    def __init__(self, ambient_dim: int, generators: Iterable[Sequence] = ()):
        gens = [la.primitive(g) for g in generators]
        for g in gens:
            if len(g) != ambient_dim:
                raise GeometryError("dimension mismatch")
        gens = [g for g in gens if any(g)]
        if ambient_dim > MAX_DIM:
            raise GeometryError("ambient dimension above 4 is unsupported")
        self.ambient_dim = ambient_dim
        self._dual_rows = hcone_generators(gens, ambient_dim)
        self.generators = tuple(hcone_generators(self._dual_rows, ambient_dim))

    @classmethod
    def from_inequalities(cls, ambient_dim: int, rows) -> "Cone":
        return cls(ambient_dim, hcone_generators(rows, ambient_dim))

    @property
    def inequalities(self) -> tuple:
        """Rows h with the cone = {x : h.x >= 0}."""
        return tuple(self._dual_rows)

    def dual(self) -> "Cone":
        return Cone(self.ambient_dim, self._dual_rows)

    def antipode(self) -> "Cone":
        return Cone(self.ambient_dim, [tuple(-x for x in g) for g in self.generators])

    @property
    def dim(self) -> int:
        return la.rank([list(g) for g in self.generators]) if self.generators else 0

    def is_pointed(self) -> bool:
        return self.dual().dim == self.ambient_dim

    def contains(self, v) -> bool:
        v = la.vec(v)
        return all(la.dot(h, v) >= 0 for h in self._dual_rows)

    def orthogonal_rows(self) -> list[tuple]:
        """Inequality rows vanishing on the whole cone."""
        return [h for h in self._dual_rows if all(la.dot(h, g) == 0 for g in self.generators)]

    def relint(self) -> Cell:
        eqs, gts = [], []
        for h in self._dual_rows:
            if all(la.dot(h, g) == 0 for g in self.generators):
                eqs.append((h, 0))
            else:
                gts.append((h, 0))
        return make_cell(self.ambient_dim, eqs, gts)

    def faces(self) -> list[Cell]:
        return closed_faces(self.ambient_dim, [], [(h, 0) for h in self._dual_rows])

    def closed_cell_constraints(self):
        return [], [(h, Fraction(0)) for h in self._dual_rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cone)
            and other.ambient_dim == self.ambient_dim
            and other.generators == self.generators
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.generators))

    def __repr__(self) -> str:
        return f"Cone({self.ambient_dim}, {[tuple(int(x) for x in g) for g in self.generators]})"


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def faces(obj) -> list[Cell]:
    """Relatively open faces of a cone or of the closure of a cell."""
    return obj.faces()


def cone_of_cell(cell: Cell) -> Cone:
    """Closure of a conical (homogeneous) cell as a Cone."""
    rows = [a for a, _ in cell.inequalities]
    for a, _ in cell.equalities:
        rows.append(a)
        rows.append(tuple(-x for x in a))
    return Cone.from_inequalities(cell.ambient_dim, rows)


def is_homogeneous(cell: Cell) -> bool:
    return all(b == 0 for _, b in cell.equalities) and all(b == 0 for _, b in cell.inequalities)


def lattice_points_in(cell: Cell, closed: bool = False) -> list[tuple]:
    """Integer points of a bounded cell (or of its closure)."""
    n = cell.ambient_dim
    bounds = []
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        lo = hi = None
        proj = project_cell(cell, [e])
        # closure of the 1-d image
        lo_v, hi_v = None, None
        for a, b in proj.equalities:
            lo_v = hi_v = b / a[0]
        for a, b in proj.inequalities:
            val = b / a[0]
            if a[0] > 0:
                lo_v = val if lo_v is None else max(lo_v, val)
            else:
                hi_v = val if hi_v is None else min(hi_v, val)
        if lo_v is None or hi_v is None:
            raise GeometryError("unbounded cell")
        lo, hi = ceil(lo_v), floor(hi_v)
        bounds.append(range(lo, hi + 1))
    test = cell.closure_contains if closed else cell.contains
    return [p for p in product(*bounds) if test(p)]


def lattice_points_closed(n: int, ineqs: Sequence, eqs: Sequence = ()) -> list[tuple]:
    """Integer points of the bounded polyhedron {eqs, a.x >= b}."""
    cons = [(la.vec(a), la.frac(b), False) for a, b in ineqs]
    for a, b in eqs:
        a, b = la.vec(a), la.frac(b)
        cons.append((a, b, False))
        cons.append((tuple(-x for x in a), -b, False))
    if fm_solve(cons, n) is None:
        return []
    ranges = []
    for i in range(n):
        order = [i] + [j for j in range(n) if j != i]
        perm = [(tuple(a[j] for j in order), b, s) for a, b, s in cons]
        proj = fm_project(perm, n, 1)
        lo = hi = None
        for a, b, _ in proj:
            val = b / a[0]
            if a[0] > 0:
                lo = val if lo is None else max(lo, val)
            else:
                hi = val if hi is None else min(hi, val)
        if lo is None or hi is None:
            raise GeometryError("unbounded polyhedron")
        ranges.append(range(ceil(lo), floor(hi) + 1))
    return [
        p
        for p in product(*ranges)
        if all(la.dot(a, p) >= b for a, b, _ in cons)
    ]
