"""Constructible functions on Q^n and their Euler calculus.

A function is a finite integer combination of indicators of relatively open
cells.  Integration uses the compactly supported Euler characteristic, so a
cell of dimension d counts ``(-1) ** d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg as la
from .geometry import (
    MAX_DIM,
    Cell,
    Cone,
    GeometryError,
    arrangement,
    cone_of_cell,
    is_homogeneous,
    make_cell,
    project_cell,
    refine,
    try_cell,
    whole_space,
)


class EulerError(ValueError):
    pass


def _check_weight(w) -> int:
    if isinstance(w, Fraction):
        if w.denominator != 1:
            raise EulerError("weights must be integers")
        return int(w)
    if isinstance(w, bool) or not isinstance(w, int):
        raise EulerError("weights must be integers")
    return w


@dataclass(frozen=True)
class ConstructibleFunction:
    ambient_dim: int
    terms: tuple = ()

    def __post_init__(self):
        for cell, w in self.terms:
            if cell.ambient_dim != self.ambient_dim:
                raise GeometryError("dimension mismatch")
            _check_weight(w)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable) -> "ConstructibleFunction":
        merged: dict[Cell, int] = {}
        for cell, w in terms:
            merged[cell] = merged.get(cell, 0) + _check_weight(w)
        return cls(n, tuple((c, w) for c, w in merged.items() if w))

    @classmethod
    def zero(cls, n: int) -> "ConstructibleFunction":
        return cls(n, ())

    @classmethod
    def constant(cls, n: int, c: int = 1) -> "ConstructibleFunction":
        return cls.from_terms(n, [(whole_space(n), c)])

    def __add__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        if other.ambient_dim != self.ambient_dim:
            raise GeometryError("dimension mismatch")
        return ConstructibleFunction.from_terms(self.ambient_dim, self.terms + other.terms)

    def __neg__(self) -> "ConstructibleFunction":
        return ConstructibleFunction(self.ambient_dim, tuple((c, -w) for c, w in self.terms))

    def __sub__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        return self + (-other)

    def __rmul__(self, k: int) -> "ConstructibleFunction":
        k = _check_weight(k)
        return ConstructibleFunction.from_terms(self.ambient_dim, [(c, k * w) for c, w in self.terms])

    def __call__(self, x) -> int:
        return cf_evaluate(self, x)

    @property
    def cells(self) -> list[Cell]:
        return [c for c, _ in self.terms]

    def is_conical(self) -> bool:
        return all(is_homogeneous(c) for c, _ in self.terms)

    def translate(self, v: Sequence) -> "ConstructibleFunction":
        return ConstructibleFunction.from_terms(
            self.ambient_dim, [(c.translate(v), w) for c, w in self.terms]
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstructibleFunction):
            return NotImplemented
        return cf_equal(self, other)

    __hash__ = None  # type: ignore[assignment]


CF = ConstructibleFunction


# -- indicators ---------------------------------------------------------------


def cf_indicator(kind: str, p: Cell | Cone) -> CF:
    """Standard (closed) or costandard ((-1)^dim times open) indicator."""
    n = p.ambient_dim
    if isinstance(p, Cone):
        relint = p.relint()
        faces = p.faces()
    else:
        relint = p
        faces = p.faces()
    if kind == "standard":
        return CF.from_terms(n, [(f, 1) for f in faces])
    if kind == "costandard":
        return CF.from_terms(n, [(relint, (-1) ** relint.dim)])
    raise EulerError(f"unknown indicator kind {kind!r}")


def indicator_open(p: Cell) -> CF:
    return CF.from_terms(p.ambient_dim, [(p, 1)])


def closed_polytope(n: int, ineqs: Sequence, eqs: Sequence = ()) -> CF:
    """Standard indicator of {eqs, a.x >= b}."""
    from .geometry import closed_faces

    return CF.from_terms(n, [(f, 1) for f in closed_faces(n, eqs, ineqs)])


# -- evaluation and integration -------------------------------------------------


def cf_evaluate(f: CF, x: Sequence) -> int:
    if len(x) != f.ambient_dim:
        raise GeometryError("dimension mismatch")
    x = la.vec(x)
    return sum(w for c, w in f.terms if c.contains(x))


def cf_integrate(f: CF) -> int:
    return sum(w * (-1) ** c.dim for c, w in f.terms)


def cf_equal(f: CF, g: CF) -> bool:
    """Decide f == g by sampling every cell of the common refinement."""
    return not nonzero_cells(f - g)


def nonzero_cells(f: CF) -> list[tuple[Cell, int]]:
    """Cells of the refinement where f is nonzero, with values.

    Each term cell is refined by the hyperplanes of the other terms (for a
    conical function, whose terms all meet at the origin, the whole space is
    refined once instead); the output is a partition of the support.
    """
    if not f.terms:
        return []
    n = f.ambient_dim
    hs = sorted({h for c, _ in f.terms for h in c.hyperplanes()})
    if f.is_conical():
        groups = [arrangement(n, hs).cells]
    else:
        groups = [arrangement(n, hs, within=c).cells for c, _ in f.terms]
    # the same sign class can come out of different terms with different
    # redundant constraints, so deduplicate by sign vector
    out: dict[tuple, tuple[Cell, int]] = {}
    for cells in groups:
        for piece in cells:
            p = piece.sample_point()
            key = tuple((la.dot(a, p) > b) - (la.dot(a, p) < b) for a, b in hs)
            if key not in out:
                out[key] = (piece, cf_evaluate(f, p))
    return [(c, v) for c, v in out.values() if v]


def canonical_terms(f: CF) -> CF:
    """Rewrite f over disjoint arrangement cells with their values."""
    return CF.from_terms(f.ambient_dim, nonzero_cells(f))


# -- functoriality ----------------------------------------------------------------


def _as_matrix(u, n_in: int | None = None) -> list[list[Fraction]]:
    m = [list(la.vec(r)) for r in u]
    if n_in is not None:
        for r in m:
            if len(r) != n_in:
                raise GeometryError("dimension mismatch")
    return m


def cf_pullback(u, f: CF, offset: Sequence | None = None, source_dim: int | None = None) -> CF:
    """(u^* f)(x) = f(u x + offset) for u a (dim f) x n matrix."""
    u = _as_matrix(u)
    if len(u) != f.ambient_dim:
        raise GeometryError("dimension mismatch")
    n = source_dim if source_dim is not None else (len(u[0]) if u else 0)
    for r in u:
        if len(r) != n:
            raise GeometryError("dimension mismatch")
    off = la.vec(offset) if offset is not None else tuple(Fraction(0) for _ in u)
    ut = la.transpose(u) if u and n else [[] for _ in range(n)]

    def sub(a, b):
        return tuple(la.dot(a, [ut[j][i] for i in range(len(u))]) for j in range(n)), b - la.dot(a, off)

    terms = []
    for cell, w in f.terms:
        pulled = try_cell(
            n,
            [sub(a, b) for a, b in cell.equalities],
            [sub(a, b) for a, b in cell.inequalities],
        )
        if pulled is not None:
            terms.append((pulled, w))
    return CF.from_terms(n, terms)


def cf_pushforward(u, f: CF, verify: bool = False) -> CF:
    """(u_! f)(y) = Euler integral of f over the fibre u^{-1}(y).

    Each relatively open cell maps onto a relatively open cell and all its
    fibres are relatively open of the same dimension, which gives the weight
    ``(-1) ** (dim C - dim image)``.  ``verify`` recomputes every target
    cell's value by a literal fibre integral at two samples.
    """
    u = _as_matrix(u, f.ambient_dim)
    m = len(u)
    terms = []
    for cell, w in f.terms:
        img = project_cell(cell, u)
        terms.append((img, w * (-1) ** (cell.dim - img.dim)))
    out = CF.from_terms(m, terms)
    if verify:
        check_pushforward(u, f, out)
    return out


def fibre_integral(u, f: CF, y: Sequence) -> int:
    """Literal Euler integral of f over {x : u x = y}."""
    u = _as_matrix(u, f.ambient_dim)
    n = f.ambient_dim
    x0 = la.solve(u, la.vec(y), n) if u else tuple(Fraction(0) for _ in range(n))
    if x0 is None:
        return 0
    kernel = la.nullspace(u, n) if u else la.identity(n)
    k = len(kernel)
    # x = x0 + K^T t
    param = [[kernel[j][i] for j in range(k)] for i in range(n)]
    return cf_integrate(cf_pullback(param, f, offset=x0, source_dim=k))


def check_pushforward(u, f: CF, g: CF) -> None:
    """Assert g agrees with literal fibre integrals on the refined target."""
    m = len(u)
    hs = []
    for cell, _ in f.terms:
        for face in cell.faces():
            hs.extend(project_cell(face, u).hyperplanes())
    for cell, _ in g.terms:
        hs.extend(cell.hyperplanes())
    for cell in arrangement(m, hs).cells:
        for bias in (None, Fraction(1, 3)):
            y = cell.sample_point(bias)
            lit = fibre_integral(u, f, y)
            if lit != cf_evaluate(g, y):
                raise AssertionError(f"pushforward mismatch at {y}: {lit} vs {cf_evaluate(g, y)}")


def product(f: CF, g: CF) -> CF:
    """(f x g)(x, y) = f(x) g(y)."""
    n, m = f.ambient_dim, g.ambient_dim
    z = (Fraction(0),)
    terms = []
    for c1, w1 in f.terms:
        for c2, w2 in g.terms:
            eqs = [(a + z * m, b) for a, b in c1.equalities] + [(z * n + a, b) for a, b in c2.equalities]
            gts = [(a + z * m, b) for a, b in c1.inequalities] + [(z * n + a, b) for a, b in c2.inequalities]
            terms.append((make_cell(n + m, eqs, gts), w1 * w2))
    return CF.from_terms(n + m, terms)


def cf_convolve(f: CF, g: CF) -> CF:
    """f * g = v_!(f x g) with v the addition map."""
    if f.ambient_dim != g.ambient_dim:
        raise GeometryError("dimension mismatch")
    n = f.ambient_dim
    if 2 * n > MAX_DIM:
        raise EulerError("convolution needs a product space of dimension <= 4")
    add = [[Fraction(int(j == i or j == i + n)) for j in range(2 * n)] for i in range(n)]
    return cf_pushforward(add, product(f, g))


def cf_scale(f: CF, k: int) -> CF:
    """x -> f(x / k)."""
    if not isinstance(k, int) or k <= 0:
        raise EulerError("scale factor must be a positive integer")
    terms = []
    for cell, w in f.terms:
        terms.append(
            (
                make_cell(
                    f.ambient_dim,
                    [(a, k * b) for a, b in cell.equalities],
                    [(a, k * b) for a, b in cell.inequalities],
                ),
                w,
            )
        )
    return CF.from_terms(f.ambient_dim, terms)


def antipode(f: CF) -> CF:
    n = f.ambient_dim
    return cf_pullback([[Fraction(-int(i == j)) for j in range(n)] for i in range(n)], f)


# -- conical operations -------------------------------------------------------------


def cf_specialize(f: CF, x: Sequence) -> CF:
    """Tangent-cone germ of f at x, as a conical function."""
    x = la.vec(x)
    n = f.ambient_dim
    if len(x) != n:
        raise GeometryError("dimension mismatch")
    terms = []
    for cell, w in f.terms:
        if not cell.closure_contains(x):
            continue
        eqs = [(a, 0) for a, _ in cell.equalities]
        gts = [(a, 0) for a, b in cell.inequalities if la.dot(a, x) == b]
        terms.append((make_cell(n, eqs, gts), w))
    return CF.from_terms(n, terms)


def cf_fourier_sato(f: CF) -> CF:
    """FT(f)(xi) = integral of f over {<xi, v> <= 1}.

    Closed form per term: for a conical cell C with closure K,
    FT(1_C) = (-1)^dim K times the indicator of the closed cone -K^dual.
    :func:`fourier_sato_value` evaluates the defining integral literally.
    """
    if not f.is_conical():
        raise EulerError("Fourier-Sato transform needs a conical function")
    n = f.ambient_dim
    terms = []
    for cell, w in f.terms:
        k = cone_of_cell(cell)
        target = k.dual().antipode()
        sign = (-1) ** cell.dim
        for face in target.faces():
            terms.append((face, w * sign))
    return CF.from_terms(n, terms)


def fourier_sato_value(f: CF, xi: Sequence) -> int:
    """Literal value of FT(f) at xi via {<xi,v> < 1} and {<xi,v> = 1}."""
    if not f.is_conical():
        raise EulerError("Fourier-Sato transform needs a conical function")
    xi = la.vec(xi)
    if len(xi) != f.ambient_dim:
        raise GeometryError("dimension mismatch")
    if not any(xi):
        return cf_integrate(f)
    total = 0
    neg = tuple(-t for t in xi)
    for cell, w in f.terms:
        below = try_cell(f.ambient_dim, cell.equalities, cell.inequalities + ((neg, Fraction(-1)),))
        level = try_cell(f.ambient_dim, cell.equalities + ((xi, Fraction(1)),), cell.inequalities)
        for piece in (below, level):
            if piece is not None:
                total += w * (-1) ** piece.dim
    return total


def fourier_sato_literal(f: CF) -> CF:
    """FT(f) assembled cell by cell from literal values.

    The output arrangement is generated by the face hyperplanes of the dual
    cones of all term cones and their antipodes.
    """
    if not f.is_conical():
        raise EulerError("Fourier-Sato transform needs a conical function")
    n = f.ambient_dim
    hs = []
    for cell, _ in f.terms:
        d = cone_of_cell(cell).dual()
        for c in (d, d.antipode()):
            for row in c.inequalities:
                hs.append((row, 0))
    cells = arrangement(n, hs).cells
    return CF.from_terms(n, [(c, fourier_sato_value(f, c.sample_point())) for c in cells])


def cf_microlocalize(f: CF, x: Sequence) -> CF:
    return cf_fourier_sato(cf_specialize(f, x))


# -- singular support ------------------------------------------------------------


@dataclass(frozen=True)
class SingularSupportCore:
    ambient_dim: int
    entries: tuple  # (base Cell, ((covector Cell, value), ...))

    def contains(self, x: Sequence, xi: Sequence) -> bool:
        for base, covs in self.entries:
            if base.contains(x):
                return any(d.contains(xi) for d, _ in covs)
        return False

    def pairs(self):
        for base, covs in self.entries:
            for d, v in covs:
                yield base, d, v


def cf_singular_support(f: CF, verify: bool = True) -> SingularSupportCore:
    """Base cells with the nonzero covector cells of mu at a sample point."""
    n = f.ambient_dim
    if not f.terms:
        return SingularSupportCore(n, ())
    entries = []
    for base in refine(f.cells).cells:
        mu = cf_microlocalize(f, base.sample_point())
        covs = nonzero_cells(mu)
        if verify and base.dim > 0:
            other = cf_microlocalize(f, base.sample_point(Fraction(1, 3)))
            if not cf_equal(mu, other):
                raise AssertionError("microlocal pattern not constant along a base cell")
        if covs:
            entries.append((base, tuple(covs)))
    return SingularSupportCore(n, tuple(entries))


@dataclass(frozen=True)
class LambdaReport:
    verdict: bool
    witness: tuple | None = None  # (base cell, covector cell, reason)


def ss_subset_lambda(f: CF, fan, core: SingularSupportCore | None = None) -> LambdaReport:
    """Is the singular support of f inside the union of (tau^perp + M) x -tau?"""
    if f.ambient_dim != fan.dim:
        raise GeometryError("dimension mismatch")
    core = core if core is not None else cf_singular_support(f, verify=False)
    n = fan.dim
    walls = []
    neg_cones = []
    for face in fan.all_cones():
        cone = fan.cone(face).antipode()
        neg_cones.append((face, cone.relint()))
        walls.extend((row, 0) for row in cone.inequalities)
    for base, cov, _ in core.pairs():
        x0, directions = _affine_hull(base)
        for piece in arrangement(n, walls, within=cov).cells:
            xi = piece.sample_point()
            face = next((fc for fc, rel in neg_cones if rel.contains(xi)), None)
            if face is None:
                return LambdaReport(False, (base, piece, "covector outside the fan"))
            rays = [fan.rays[i] for i in face]
            if any(la.dot(r, d) != 0 for r in rays for d in directions):
                return LambdaReport(False, (base, piece, f"base not parallel to the orthogonal of cone {face}"))
            if any(la.dot(r, x0).denominator != 1 for r in rays):
                return LambdaReport(False, (base, piece, f"base not on a lattice translate for cone {face}"))
    return LambdaReport(True)


def _affine_hull(cell: Cell):
    n = cell.ambient_dim
    x0 = cell.sample_point()
    if cell.equalities:
        dirs = la.nullspace([list(a) for a, _ in cell.equalities], n)
    else:
        dirs = la.identity(n)
    return x0, dirs


def cf_from_cells(n: int, cells_with_weights: Iterable) -> CF:
    return CF.from_terms(n, list(cells_with_weights))
