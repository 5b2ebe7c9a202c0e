"""Fans, equivariant line bundles and Klyachko filtration data.

Filtrations are increasing: ``E^a_{<=k}`` grows with ``k``.  A line bundle
with Cartier characters ``m_sigma`` has its single jump on ray ``a`` at
``<a, m_sigma>`` for any maximal cone containing ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .euler import CF
from .geometry import Cone, GeometryError, arrangement, make_cell


class FanError(ValueError):
    """Invalid fan (non-face intersection, singular cone, ...)."""


class CartierError(ValueError):
    pass


class ConditionCError(ValueError):
    """Filtrations on the rays of a cone admit no common adapted basis."""

    def __init__(self, cone, message: str = ""):
        self.cone = cone
        super().__init__(f"condition (C) fails on cone {list(cone)}" + (f": {message}" if message else ""))


Face = tuple  # sorted tuple of ray indices


# ---------------------------------------------------------------------------
# fans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FanReport:
    simplicial: bool
    smooth: bool
    complete: bool


class Fan:
    """Simplicial fan given by rays and maximal cones (all faces implied)."""

    def __init__(self, dim: int, rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]], name: str = ""):
        self.dim = dim
        self.name = name
        self.rays = tuple(tuple(int(x) for x in r) for r in rays)
        for r in self.rays:
            if len(r) != dim:
                raise FanError("ray dimension mismatch")
            if not la.is_primitive(r):
                raise FanError(f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise FanError("repeated ray")
        listed = [tuple(sorted(set(int(i) for i in c))) for c in cones]
        for c in listed:
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise FanError(f"ray index {i} out of range")
            if c and la.rank([list(map(Fraction, self.rays[i])) for i in c]) != len(c):
                raise FanError(f"cone {list(c)} is not simplicial")
        # keep only inclusion-maximal cones
        self.maximal = tuple(sorted(c for c in set(listed) if not any(set(c) < set(d) for d in listed)))
        faces = {()}
        for c in self.maximal:
            for k in range(len(c) + 1):
                faces.update(combinations(c, k))
        self._faces = tuple(sorted(faces, key=lambda f: (len(f), f)))
        self._check_intersections()

    # -- structure

    def all_cones(self) -> tuple:
        return self._faces

    def cones_of_dim(self, d: int) -> list:
        return [f for f in self._faces if len(f) == d]

    def cone(self, face: Face) -> Cone:
        return Cone(self.dim, [self.rays[i] for i in face])

    def ray_vectors(self, face: Face) -> list[tuple]:
        return [self.rays[i] for i in face]

    def facets(self, face: Face) -> list[tuple[Face, int]]:
        """Codimension-one faces with the incidence sign (-1)^position."""
        return [(face[:i] + face[i + 1:], (-1) ** i) for i in range(len(face))]

    def is_face(self, face: Face) -> bool:
        return tuple(sorted(face)) in self._faces

    def top_cones(self) -> list:
        return [c for c in self.maximal if len(c) == self.dim]

    def star(self, face: Face) -> list:
        return [f for f in self._faces if set(face) <= set(f)]

    def maximal_containing(self, face: Face) -> list:
        return [c for c in self.maximal if set(face) <= set(c)]

    def adjacent_tops(self, face: Face) -> list:
        return [c for c in self.top_cones() if set(face) <= set(c)]

    def subfan(self, face: Face) -> "Fan":
        """Fan of all faces of one cone (keeps global ray indices)."""
        sub = Fan.__new__(Fan)
        sub.dim = self.dim
        sub.name = f"{self.name}|{list(face)}"
        sub.rays = self.rays
        sub.maximal = (tuple(face),)
        sub._faces = tuple(sorted({f for k in range(len(face) + 1) for f in combinations(face, k)}, key=lambda f: (len(f), f)))
        return sub

    def locate(self, xi: Sequence) -> Face | None:
        """Cone whose relative interior contains xi."""
        for f in self._faces:
            if self.relint(f).contains(xi):
                return f
        return None

    # -- validation

    def relint(self, face: Face):
        return _relint_cache(self, face)

    def _check_intersections(self) -> None:
        faces = self._faces
        for i, f in enumerate(faces):
            for g in faces[i + 1:]:
                if self.relint(f).intersect(self.relint(g)) is not None:
                    raise FanError(f"cones {list(f)} and {list(g)} overlap outside a common face")

    def is_smooth(self) -> bool:
        return all(la.minors_gcd(self.ray_vectors(c)) == 1 for c in self.maximal if c)

    def is_complete(self) -> bool:
        if not self.top_cones():
            return False
        walls = []
        for c in self.maximal:
            walls.extend((row, 0) for row in self.cone(c).inequalities)
        for cell in arrangement(self.dim, walls).cells:
            if cell.dim != self.dim:
                continue
            x = cell.sample_point()
            if not any(self.cone(c).contains(x) for c in self.top_cones()):
                return False
        return True

    @cached_property
    def complete(self) -> bool:
        return self.is_complete()

    def validate(self) -> FanReport:
        return FanReport(simplicial=True, smooth=self.is_smooth(), complete=self.complete)

    # -- lattice data

    def lattice_basis(self, face: Face) -> list[tuple]:
        """Z-basis of N starting with the rays of a smooth cone."""
        return _basis_cache(self, tuple(face))

    def lattice_point(self, face: Face, pairings: Sequence) -> tuple:
        """Lattice m with <rho_i, m> = pairings[i] and zero on the completion."""
        b = self.lattice_basis(face)
        rhs = list(la.vec(pairings)) + [Fraction(0)] * (self.dim - len(face))
        m = la.solve([list(map(Fraction, r)) for r in b], rhs, self.dim)
        assert m is not None and all(x.denominator == 1 for x in m)
        return tuple(int(x) for x in m)

    def perp_lattice_basis(self, face: Face) -> list[tuple]:
        """Z-basis of sigma^perp in M."""
        b = self.lattice_basis(face)
        inv = la.inverse([list(map(Fraction, r)) for r in b])
        cols = la.transpose(inv)
        return [tuple(int(x) for x in cols[j]) for j in range(len(face), self.dim)]

    def same_class(self, face: Face, m1: Sequence, m2: Sequence) -> bool:
        """m1 == m2 modulo sigma^perp (pairings with the rays agree)."""
        return all(la.dot(r, m1) == la.dot(r, m2) for r in self.ray_vectors(face))

    def __repr__(self) -> str:
        return f"Fan({self.name or self.dim}, rays={list(self.rays)}, cones={[list(c) for c in self.maximal]})"


_RELINT: dict = {}
_BASES: dict = {}


def _relint_cache(fan: Fan, face: Face):
    key = (fan.rays, tuple(face))
    if key not in _RELINT:
        _RELINT[key] = fan.cone(face).relint()
    return _RELINT[key]


def _basis_cache(fan: Fan, face: Face) -> list[tuple]:
    key = (fan.dim, tuple(fan.rays[i] for i in face))
    if key in _BASES:
        return _BASES[key]
    rays = [fan.rays[i] for i in face]
    n = fan.dim
    if la.minors_gcd(rays) != 1:
        raise FanError(f"cone {list(face)} is not smooth")
    basis = list(rays)
    for bound in range(1, 4):
        cands = [v for v in product(range(-bound, bound + 1), repeat=n) if any(v)]
        while len(basis) < n:
            for v in cands:
                trial = basis + [v]
                if la.rank([list(map(Fraction, t)) for t in trial]) == len(trial) and la.minors_gcd(trial) == 1:
                    basis = trial
                    break
            else:
                break
        if len(basis) == n:
            break
        basis = list(rays)
    if len(basis) != n:
        raise FanError("could not complete the cone to a lattice basis")
    _BASES[key] = basis
    return basis


def fan_validate(fan: Fan) -> FanReport:
    return fan.validate()


# ---------------------------------------------------------------------------
# line bundles
# ---------------------------------------------------------------------------


class CartierData:
    """Equivariant line bundle: a character m_sigma per maximal cone."""

    def __init__(self, fan: Fan, m: Mapping[int, Sequence[int]] | Sequence[Sequence[int]]):
        self.fan = fan
        if isinstance(m, Mapping):
            items = {int(k): v for k, v in m.items()}
        else:
            items = dict(enumerate(m))
        if set(items) != set(range(len(fan.maximal))):
            raise CartierError("need one character per maximal cone")
        self.m = {fan.maximal[k]: tuple(int(x) for x in v) for k, v in items.items()}
        for v in self.m.values():
            if len(v) != fan.dim:
                raise CartierError("character dimension mismatch")
        for s, t in combinations(fan.maximal, 2):
            shared = tuple(sorted(set(s) & set(t)))
            diff = [a - b for a, b in zip(self.m[s], self.m[t])]
            for i in shared:
                if la.dot(fan.rays[i], diff) != 0:
                    raise CartierError(f"incompatible characters on shared face {list(shared)}")

    @classmethod
    def from_ray_values(cls, fan: Fan, values: Sequence[int]) -> "CartierData":
        """Characters with <rho, m_sigma> = values[rho] for rays of sigma."""
        ms = []
        for c in fan.maximal:
            ms.append(fan.lattice_point(c, [values[i] for i in c]))
        return cls(fan, ms)

    @classmethod
    def character(cls, fan: Fan, chi: Sequence[int]) -> "CartierData":
        return cls(fan, [tuple(chi) for _ in fan.maximal])

    def at(self, face: Face) -> tuple:
        """Character of a maximal cone containing the face."""
        c = self.fan.maximal_containing(face)[0]
        return self.m[c]

    def ray_value(self, i: int) -> int:
        return int(la.dot(self.fan.rays[i], self.at((i,))))

    def __add__(self, other: "CartierData") -> "CartierData":
        _same_fan(self.fan, other.fan)
        return CartierData(self.fan, [tuple(a + b for a, b in zip(self.m[c], other.m[c])) for c in self.fan.maximal])

    def __neg__(self) -> "CartierData":
        return CartierData(self.fan, [tuple(-a for a in self.m[c]) for c in self.fan.maximal])

    def __sub__(self, other: "CartierData") -> "CartierData":
        return self + (-other)

    def __repr__(self) -> str:
        return f"CartierData({[list(self.m[c]) for c in self.fan.maximal]})"


def _same_fan(f: Fan, g: Fan) -> None:
    if f is not g and (f.rays != g.rays or f.maximal != g.maximal):
        raise FanError("fan mismatch")


def polytope_ineqs(L: CartierData) -> list[tuple]:
    """Rows (rho, <rho, m_sigma>) with P_L = {x : rho.x >= value}."""
    rows = set()
    for c, m in L.m.items():
        for i in c:
            rows.add((L.fan.rays[i], int(la.dot(L.fan.rays[i], m))))
    return sorted(rows)


def polytope_sections(L: CartierData) -> list[tuple]:
    """Lattice points of the intersection of the m_sigma + sigma^dual."""
    from .geometry import lattice_points_closed

    return lattice_points_closed(L.fan.dim, [(r, v) for r, v in polytope_ineqs(L)])


def line_bundle(fan: Fan, values: Sequence[int]) -> CartierData:
    return CartierData.from_ray_values(fan, values)


# ---------------------------------------------------------------------------
# Klyachko data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Splitting:
    face: Face
    basis: tuple  # vectors of E
    phis: tuple  # per basis vector, tuple of jump values on the cone's rays
    weights: tuple  # per basis vector, lattice representative

    def multiset(self) -> list[tuple]:
        return sorted(self.weights)


class KlyachkoBundle:
    """Increasing filtrations E^a_{<=k} of Q^r for every ray a."""

    def __init__(self, fan: Fan, rank: int, filtrations: Mapping[int, Sequence[tuple[int, Sequence]]]):
        self.fan = fan
        self.rank = rank
        filts = {}
        for i in range(len(fan.rays)):
            steps = filtrations.get(i, [])
            if rank == 0:
                filts[i] = ()
                continue
            if not steps:
                raise ValueError(f"ray {i} has no filtration")
            clean = []
            prev: tuple = ()
            for k, basis in sorted(((int(k), b) for k, b in steps), key=lambda s: s[0]):
                for v in basis:
                    if len(v) != rank:
                        raise ValueError("basis vector length differs from rank")
                sp = la.span(basis, rank)
                if not _contains(sp, prev, rank):
                    raise ValueError(f"filtration on ray {i} is not increasing at jump {k}")
                if len(sp) == len(prev):
                    continue
                clean.append((k, sp))
                prev = sp
            if len(prev) != rank:
                raise ValueError(f"filtration on ray {i} does not reach the whole fibre")
            filts[i] = tuple(clean)
        self.filtrations = filts

    def subspace(self, ray: int, k) -> tuple:
        out: tuple = ()
        for j, sp in self.filtrations[ray]:
            if j <= k:
                out = sp
            else:
                break
        return out

    def jumps(self, ray: int) -> list[int]:
        return [k for k, _ in self.filtrations[ray]]

    def dims(self, ray: int) -> list[tuple[int, int]]:
        return [(k, len(sp)) for k, sp in self.filtrations[ray]]

    def __repr__(self) -> str:
        return f"KlyachkoBundle(rank={self.rank}, jumps={ {i: self.dims(i) for i in self.filtrations} })"


def _contains(big: tuple, small: tuple, n: int) -> bool:
    return all(la.in_span(v, big, n) for v in small)


def _intersect_all(spaces: Sequence[tuple], n: int) -> tuple:
    cur = tuple(tuple(r) for r in la.identity(n))
    for s in spaces:
        cur = la.subspace_intersection(cur, s, n) if cur else ()
        if not cur:
            return ()
    return cur


def _multiplicities(b: KlyachkoBundle, face: Face) -> dict[tuple, int]:
    """Inclusion-exclusion multiplicities on the jump grid of a cone."""
    r = b.rank
    grids = [b.jumps(i) for i in face]
    cache: dict[tuple, int] = {}

    def dim_v(phi):
        if phi not in cache:
            cache[phi] = len(_intersect_all([b.subspace(i, k) for i, k in zip(face, phi)], r))
        return cache[phi]

    mult = {}
    for phi in product(*grids):
        total = 0
        for s in range(len(face) + 1):
            for sub in combinations(range(len(face)), s):
                shifted = tuple(k - 1 if j in sub else k for j, k in enumerate(phi))
                total += (-1) ** s * dim_v(shifted)
        if total < 0:
            raise ConditionCError(face, "negative multiplicity")
        if total:
            mult[phi] = total
    if sum(mult.values()) != r:
        raise ConditionCError(face, "multiplicities do not sum to the rank")
    return mult


def cone_splitting(b: KlyachkoBundle, face: Face) -> Splitting:
    face = tuple(face)
    r = b.rank
    if not face:
        basis = tuple(tuple(v) for v in la.identity(r))
        zero = tuple(0 for _ in range(b.fan.dim))
        return Splitting(face, basis, tuple(() for _ in basis), tuple(zero for _ in basis))
    mult = _multiplicities(b, face)
    picks: list[tuple[tuple, tuple]] = []
    for phi in sorted(mult, key=lambda p: (sum(p), p)):
        v = _intersect_all([b.subspace(i, k) for i, k in zip(face, phi)], r)
        lower = [vec for vec, ph in picks if all(x <= y for x, y in zip(ph, phi))]
        cur = la.span(lower, r)
        added = 0
        for cand in v:
            if added == mult[phi]:
                break
            if not la.in_span(cand, cur, r):
                picks.append((tuple(cand), phi))
                cur = la.span(list(cur) + [cand], r)
                added += 1
        if added != mult[phi]:
            raise ConditionCError(face, "greedy basis construction stalled")
    basis = [p[0] for p in picks]
    if la.rank([list(v) for v in basis]) != r:
        raise ConditionCError(face, "picked vectors are dependent")
    for pos, i in enumerate(face):
        for k, sp in b.filtrations[i]:
            coord = la.span([vec for vec, ph in picks if ph[pos] <= k], r)
            if coord != sp:
                raise ConditionCError(face, f"filtration of ray {i} is not coordinate at jump {k}")
    weights = tuple(b.fan.lattice_point(face, ph) for _, ph in picks)
    return Splitting(face, tuple(basis), tuple(p[1] for p in picks), weights)


def klyachko_validate(b: KlyachkoBundle) -> dict[Face, Splitting]:
    if not b.fan.is_smooth():
        raise FanError("fan is not smooth")
    return {face: cone_splitting(b, face) for face in b.fan.all_cones()}


def splits_bruteforce(b: KlyachkoBundle, face: Face, entries=(-1, 0, 1)) -> bool:
    """Search small integer bases for one adapted to every ray filtration."""
    r = b.rank
    vecs = [v for v in product(entries, repeat=r) if any(v) and la.primitive(v) == v]
    spaces = [sp for i in face for _, sp in b.filtrations[i]]
    for basis in combinations(vecs, r):
        if la.rank([list(map(Fraction, v)) for v in basis]) != r:
            continue
        ok = True
        for sp in spaces:
            inside = [v for v in basis if la.in_span(v, sp, r)]
            if len(inside) != len(sp):
                ok = False
                break
        if ok:
            return True
    return False


def weight_multiset(b: KlyachkoBundle, face: Face) -> list[tuple]:
    return cone_splitting(b, tuple(face)).multiset()


def cartier_to_klyachko(L: CartierData) -> KlyachkoBundle:
    filts = {i: [(L.ray_value(i), [(1,)])] for i in range(len(L.fan.rays))}
    return KlyachkoBundle(L.fan, 1, filts)


def trivial_bundle(fan: Fan, rank: int) -> KlyachkoBundle:
    return KlyachkoBundle(fan, rank, {i: [(0, la.identity(rank))] for i in range(len(fan.rays))})


def frobenius_pullback(b: KlyachkoBundle, n: int) -> KlyachkoBundle:
    if not isinstance(n, int) or n <= 0:
        raise ValueError("Frobenius degree must be a positive integer")
    return KlyachkoBundle(b.fan, b.rank, {i: [(n * k, sp) for k, sp in f] for i, f in b.filtrations.items()})


def tensor_line(b: KlyachkoBundle, L: CartierData) -> KlyachkoBundle:
    _same_fan(b.fan, L.fan)
    return KlyachkoBundle(
        b.fan,
        b.rank,
        {i: [(k + L.ray_value(i), sp) for k, sp in f] for i, f in b.filtrations.items()},
    )


def direct_sum(b1: KlyachkoBundle, b2: KlyachkoBundle) -> KlyachkoBundle:
    _same_fan(b1.fan, b2.fan)
    r1, r2 = b1.rank, b2.rank
    filts = {}
    for i in range(len(b1.fan.rays)):
        jumps = sorted(set(b1.jumps(i)) | set(b2.jumps(i)))
        steps = []
        for k in jumps:
            vecs = [tuple(v) + (0,) * r2 for v in b1.subspace(i, k)]
            vecs += [(0,) * r1 + tuple(v) for v in b2.subspace(i, k)]
            steps.append((k, vecs))
        filts[i] = steps
    return KlyachkoBundle(b1.fan, r1 + r2, filts)


def twist_sum(op: str, b, other) -> KlyachkoBundle:
    if op == "tensor":
        return tensor_line(b, other)
    if op == "sum":
        return direct_sum(b, other)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# the Morelli function
# ---------------------------------------------------------------------------


def open_translated_dual(fan: Fan, face: Face, chi: Sequence) -> "Cell":
    """(chi + sigma^dual)^o as a cell in M_R."""
    return make_cell(fan.dim, [], [(fan.rays[i], la.dot(fan.rays[i], la.vec(chi))) for i in face])


def closed_translated_dual_faces(fan: Fan, face: Face, chi: Sequence) -> list:
    from .geometry import closed_faces

    return closed_faces(fan.dim, [], [(fan.rays[i], la.dot(fan.rays[i], la.vec(chi))) for i in face])


def morelli_eq1(b: KlyachkoBundle) -> CF:
    """Sum over cones and weights of (-1)^dim sigma times j of chi + sigma^dual."""
    fan = b.fan
    n = fan.dim
    terms = []
    if b.rank:
        for face, split in klyachko_validate(b).items():
            for chi in split.weights:
                # costandard of an n-dimensional set carries (-1)^n
                terms.append((open_translated_dual(fan, face, chi), (-1) ** (len(face) + n)))
    return CF.from_terms(n, terms)


# ---------------------------------------------------------------------------
# invariant-curve nef oracle
# ---------------------------------------------------------------------------


def _sum_spaces(spaces, n):
    return la.span([v for s in spaces for v in s], n)


def curve_splitting_degrees(b: KlyachkoBundle, tau: Face, splits: Mapping | None = None) -> list[int]:
    """Splitting degrees of the bundle restricted to the invariant curve of tau.

    Works on the graded pieces of the tau-ray filtrations; on each piece the
    two transverse rays induce filtrations whose joint multiplicities pair
    the weights at the two adjacent maximal cones.
    """
    fan = b.fan
    r = b.rank
    tops = fan.adjacent_tops(tau)
    if len(tops) != 2:
        raise FanError(f"cone {list(tau)} does not have two adjacent top cones")
    s1, s2 = tops
    a1 = next(i for i in s1 if i not in tau)
    a2 = next(i for i in s2 if i not in tau)
    u = _transverse(fan, tau, fan.rays[a1])
    degrees = []
    grids = [b.jumps(i) for i in tau]
    for c in product(*grids):
        vc = _intersect_all([b.subspace(i, k) for i, k in zip(tau, c)], r)
        if not vc:
            continue
        wc = _sum_spaces(
            [
                _intersect_all([b.subspace(i, k - (1 if j == pos else 0)) for j, (i, k) in enumerate(zip(tau, c))], r)
                for pos in range(len(tau))
            ],
            r,
        )
        if len(vc) == len(wc):
            continue

        def g(k1, k2):
            a = la.subspace_sum(la.subspace_intersection(b.subspace(a1, k1), vc, r) if b.subspace(a1, k1) else (), wc, r)
            bb = la.subspace_sum(la.subspace_intersection(b.subspace(a2, k2), vc, r) if b.subspace(a2, k2) else (), wc, r)
            inter = la.subspace_intersection(a, bb, r) if a and bb else ()
            return len(inter) - len(wc)

        for k1 in b.jumps(a1):
            for k2 in b.jumps(a2):
                mult = g(k1, k2) - g(k1 - 1, k2) - g(k1, k2 - 1) + g(k1 - 1, k2 - 1)
                if mult < 0:
                    raise AssertionError("negative curve multiplicity")
                if not mult:
                    continue
                m1 = fan.lattice_point(s1, [c[tau.index(i)] if i in tau else k1 for i in s1])
                m2 = fan.lattice_point(s2, [c[tau.index(i)] if i in tau else k2 for i in s2])
                diff = [x - y for x, y in zip(m2, m1)]
                a = _multiple_of(diff, u)
                degrees.extend([a] * mult)
    if len(degrees) != r:
        raise AssertionError("curve multiplicities do not add up to the rank")
    return sorted(degrees)


def _transverse(fan: Fan, tau: Face, rho) -> tuple:
    """Primitive u in tau^perp with <u, rho> > 0."""
    basis = la.nullspace([list(map(Fraction, fan.rays[i])) for i in tau], fan.dim) if tau else la.identity(fan.dim)
    if len(basis) != 1:
        raise FanError("transverse direction needs a codimension-one cone")
    u = la.primitive(basis[0])
    if la.dot(u, rho) < 0:
        u = tuple(-x for x in u)
    return u


def _multiple_of(v, u) -> int:
    idx = next(i for i, x in enumerate(u) if x)
    a = Fraction(v[idx], u[idx])
    if any(Fraction(x) != a * y for x, y in zip(v, u)) or a.denominator != 1:
        raise AssertionError("weight difference is not a multiple of the transverse direction")
    return int(a)


def nef_oracle_curves(b: KlyachkoBundle) -> tuple[bool, dict]:
    fan = b.fan
    if not fan.complete or not fan.is_smooth():
        raise FanError("nef oracle needs a complete smooth fan")
    degrees = {tau: curve_splitting_degrees(b, tau) for tau in fan.cones_of_dim(fan.dim - 1)}
    return all(d >= 0 for ds in degrees.values() for d in ds), degrees
