"""Theta-complexes: graded generators (cone, character) with scalar differentials.

A generator ``(sigma, chi)`` stands for the constructible sheaf supported on
the open translated dual cone ``(chi + sigma^dual)^o``.  Differentials are
stored sparsely as ``{(target, source): scalar}`` over a global generator
index, which makes restriction to retained subsets cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import inf
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .euler import CF
from .geometry import GeometryError, arrangement, lattice_points_in, make_cell
from .toric import (
    CartierData,
    Face,
    Fan,
    FanError,
    KlyachkoBundle,
    cartier_to_klyachko,
    closed_translated_dual_faces,
    klyachko_validate,
    open_translated_dual,
)


class ThetaError(ValueError):
    pass


class UnboundedTableError(ThetaError):
    """Nonzero cohomology on an unbounded family of lattice points."""

    def __init__(self, cone, cell, betti):
        self.cone, self.cell, self.betti = cone, cell, betti
        super().__init__(f"nonzero cohomology {betti} on an unbounded region for cone {list(cone)}")


# ---------------------------------------------------------------------------
# vector space complexes
# ---------------------------------------------------------------------------


@dataclass
class VectComplex:
    """Bounded cochain complex; ``maps[k]`` has shape dims[k+1] x dims[k]."""

    dims: dict
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        self.dims = {k: v for k, v in self.dims.items() if v}
        for k in list(self.maps):
            if not self.dims.get(k) or not self.dims.get(k + 1):
                del self.maps[k]
        for k, m in self.maps.items():
            if len(m) != self.dims[k + 1] or any(len(r) != self.dims[k] for r in m):
                raise ThetaError(f"map in degree {k} has the wrong shape")
        self._ranks: dict = {}

    def check(self) -> None:
        for k, m in self.maps.items():
            nxt = self.maps.get(k + 1)
            if nxt is not None and not la.is_zero_matrix(la.matmul(nxt, m)):
                raise AssertionError(f"d o d != 0 at degree {k}")

    def rank(self, k: int) -> int:
        if k not in self._ranks:
            m = self.maps.get(k)
            self._ranks[k] = la.sparse_rank(m) if m else 0
        return self._ranks[k]

    def betti(self) -> dict:
        out = {}
        for k, d in self.dims.items():
            b = d - self.rank(k) - self.rank(k - 1)
            if b:
                out[k] = b
        return out

    def betti_vector(self, lo: int = 0, hi: int | None = None) -> tuple:
        b = self.betti()
        if hi is None:
            hi = max(list(b) + [lo])
        return tuple(b.get(k, 0) for k in range(lo, hi + 1))

    def euler(self) -> int:
        return sum(la.sign_of_parity(k) * d for k, d in self.dims.items())

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())


# ---------------------------------------------------------------------------
# generators and complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaGenerator:
    cone: Face
    base: tuple
    degree: int
    tag: tuple = ()


def precedes(fan: Fan, a: ThetaGenerator, b: ThetaGenerator) -> bool:
    """(sigma, chi) <= (tau, psi): tau is a face of sigma and chi - psi in tau^dual."""
    if not set(b.cone) <= set(a.cone):
        return False
    diff = [x - y for x, y in zip(a.base, b.base)]
    return all(la.dot(fan.rays[i], diff) >= 0 for i in b.cone)


class ThetaComplex:
    def __init__(self, fan: Fan, gens: Sequence[ThetaGenerator], entries: Mapping[tuple, Fraction], check: bool = True):
        self.fan = fan
        self.gens = tuple(gens)
        self.entries = {k: Fraction(v) for k, v in entries.items() if v}
        self.n = fan.dim
        if check:
            self.validate()

    def validate(self) -> None:
        for (t, s), v in self.entries.items():
            gt, gs = self.gens[t], self.gens[s]
            if gt.degree != gs.degree + 1:
                raise ThetaError("differential entry between non-consecutive degrees")
            if not precedes(self.fan, gs, gt):
                raise ThetaError(f"forbidden differential entry {gs} -> {gt}")
        # d o d = 0
        out: dict = {}
        by_source: dict = {}
        for (t, s), v in self.entries.items():
            by_source.setdefault(s, []).append((t, v))
        for (t, s), v in self.entries.items():
            for u, w in by_source.get(t, []):
                out[(u, s)] = out.get((u, s), 0) + w * v
        if any(out.values()):
            raise AssertionError("d o d != 0")

    def degrees(self) -> list[int]:
        return sorted({g.degree for g in self.gens})

    def count_by_degree(self) -> dict:
        out: dict = {}
        for g in self.gens:
            out[g.degree] = out.get(g.degree, 0) + 1
        return out

    def restrict(self, idxs: Iterable[int]) -> VectComplex:
        """Complex spanned by a subset of generators (submatrix of d)."""
        idxs = sorted(set(idxs))
        pos: dict = {}
        dims: dict = {}
        for i in idxs:
            k = self.gens[i].degree
            pos[i] = (k, dims.get(k, 0))
            dims[k] = dims.get(k, 0) + 1
        maps = {k: la.zeros(dims[k + 1], dims[k]) for k in dims if k + 1 in dims}
        for (t, s), v in self.entries.items():
            if t in pos and s in pos:
                k, j = pos[s]
                _, i = pos[t]
                maps[k][i][j] = v
        vc = VectComplex(dims, maps)
        return vc

    def shift(self, k: int) -> "ThetaComplex":
        """F[k]: degrees drop by k, differential times (-1)^k."""
        gens = [ThetaGenerator(g.cone, g.base, g.degree - k, g.tag) for g in self.gens]
        sign = la.sign_of_parity(k)
        return ThetaComplex(self.fan, gens, {key: sign * v for key, v in self.entries.items()}, check=False)

    def translate(self, v: Sequence[int]) -> "ThetaComplex":
        gens = [ThetaGenerator(g.cone, tuple(a + b for a, b in zip(g.base, v)), g.degree, g.tag) for g in self.gens]
        return ThetaComplex(self.fan, gens, self.entries, check=False)

    def __repr__(self) -> str:
        return f"ThetaComplex({len(self.gens)} generators, degrees {self.count_by_degree()})"


def theta_sum(parts: Sequence[ThetaComplex]) -> ThetaComplex:
    fan = parts[0].fan
    gens, entries, off = [], {}, 0
    for j, p in enumerate(parts):
        if p.fan is not fan and (p.fan.rays != fan.rays):
            raise FanError("fan mismatch")
        gens.extend(ThetaGenerator(g.cone, g.base, g.degree, (j,) + tuple(g.tag)) for g in p.gens)
        for (t, s), v in p.entries.items():
            entries[(t + off, s + off)] = v
        off += len(p.gens)
    return ThetaComplex(fan, gens, entries, check=False)


@dataclass
class ThetaMap:
    source: ThetaComplex
    target: ThetaComplex
    entries: dict  # (target index, source index) -> scalar, same degree

    def __post_init__(self):
        self.entries = {k: Fraction(v) for k, v in self.entries.items() if v}
        fan = self.source.fan
        for (t, s), v in self.entries.items():
            gt, gs = self.target.gens[t], self.source.gens[s]
            if gt.degree != gs.degree:
                raise ThetaError("map entry changes degree")
            if not precedes(fan, gs, gt):
                raise ThetaError(f"forbidden map entry {gs} -> {gt}")
        self.check_chain_map()

    def check_chain_map(self) -> None:
        lhs: dict = {}
        for (t, s), v in self.entries.items():
            for (u, t2), w in self.target.entries.items():
                if t2 == t:
                    lhs[(u, s)] = lhs.get((u, s), 0) + w * v
        for (s2, s), w in self.source.entries.items():
            for (t, s3), v in self.entries.items():
                if s3 == s2:
                    lhs[(t, s)] = lhs.get((t, s), 0) - v * w
        if any(lhs.values()):
            raise AssertionError("map is not a chain map")


def theta_map_sum(maps: Sequence[ThetaMap], target: ThetaComplex) -> ThetaMap:
    """(f_1, ..., f_k): sum of sources -> common target."""
    source = theta_sum([m.source for m in maps])
    entries, off = {}, 0
    for m in maps:
        for (t, s), v in m.entries.items():
            entries[(t, s + off)] = v
        off += len(m.source.gens)
    return ThetaMap(source, target, entries)


def theta_cone(f: ThetaMap) -> ThetaComplex:
    """Mapping cone: Cone^k = A^{k+1} + B^k, d(a, b) = (-d_A a, f a + d_B b)."""
    a, b = f.source, f.target
    na = len(a.gens)
    gens = [ThetaGenerator(g.cone, g.base, g.degree - 1, ("src",) + tuple(g.tag)) for g in a.gens]
    gens += [ThetaGenerator(g.cone, g.base, g.degree, ("tgt",) + tuple(g.tag)) for g in b.gens]
    entries = {}
    for (t, s), v in a.entries.items():
        entries[(t, s)] = -v
    for (t, s), v in b.entries.items():
        entries[(t + na, s + na)] = v
    for (t, s), v in f.entries.items():
        entries[(t + na, s)] = v
    return ThetaComplex(a.fan, gens, entries)


# ---------------------------------------------------------------------------
# Cech complex of a bundle
# ---------------------------------------------------------------------------


def cech_complex(b: KlyachkoBundle, orientation: str = "sorted", splits: Mapping | None = None) -> ThetaComplex:
    """Cech resolution over all cones: degree n - dim sigma, one generator per
    adapted basis vector, entries = signed change-of-basis coefficients."""
    fan = b.fan
    n = fan.dim
    splits = splits if splits is not None else klyachko_validate(b)
    if fan.complete:
        cones = list(fan.all_cones())
    elif len(fan.maximal) == 1:
        cones = [fan.maximal[0]]
    else:
        raise FanError("Cech complex needs a complete or affine fan")
    gens: list[ThetaGenerator] = []
    index: dict = {}
    for face in cones:
        sp = splits[face]
        for j, chi in enumerate(sp.weights):
            index[(face, j)] = len(gens)
            gens.append(ThetaGenerator(face, chi, n - len(face) if fan.complete else 0, (j,)))
    entries: dict = {}
    if fan.complete:
        for face in cones:
            if not face:
                continue
            bs = [list(v) for v in splits[face].basis]
            for pos, (facet, _) in enumerate(fan.facets(face)):
                sign = (-1) ** pos if orientation == "sorted" else (-1) ** (len(face) - 1 - pos)
                bt = splits[facet].basis
                # coordinates of sigma's basis vectors in tau's basis
                inv = la.inverse(la.transpose([list(v) for v in bt]))
                for j, v in enumerate(bs):
                    coords = la.matvec(inv, v)
                    for i, c in enumerate(coords):
                        if c:
                            entries[(index[(facet, i)], index[(face, j)])] = sign * c
    return ThetaComplex(fan, gens, entries)


def line_bundle_complex(L: CartierData) -> ThetaComplex:
    return cech_complex(cartier_to_klyachko(L))


def line_bundle_map(u: Sequence[int], L: CartierData, twist: CartierData | None = None) -> ThetaMap:
    """kappa(O(u) (x) L') -> kappa(L (x) L') with every allowed component 1."""
    fan = L.fan
    u = tuple(int(x) for x in u)
    for c, m in L.m.items():
        if any(la.dot(fan.rays[i], [a - b for a, b in zip(u, m)]) < 0 for i in c):
            raise ThetaError(f"u is not a section weight: fails on cone {list(c)}")
    src_l = CartierData.character(fan, u)
    tgt_l = L
    if twist is not None:
        src_l = src_l + twist
        tgt_l = L + twist
    src = line_bundle_complex(src_l)
    tgt = line_bundle_complex(tgt_l)
    tindex = {g.cone: i for i, g in enumerate(tgt.gens)}
    entries = {(tindex[g.cone], s): 1 for s, g in enumerate(src.gens)}
    return ThetaMap(src, tgt, entries)


def compactly_supported_sections(F: ThetaComplex) -> VectComplex:
    return F.restrict(range(len(F.gens)))


# ---------------------------------------------------------------------------
# Morse filtrations
# ---------------------------------------------------------------------------


def morse_weight(fan: Fan, g: ThetaGenerator, xi: Sequence) -> Fraction | float:
    """Infimum of xi over (chi + sigma^dual)^o: <xi,chi> if xi in sigma, else -inf."""
    if fan.cone(g.cone).contains(xi):
        return la.dot(la.vec(xi), g.base)
    return -inf


def _block(F: ThetaComplex, rows: Sequence[int], cols: Sequence[int]) -> list:
    rp = {i: p for p, i in enumerate(rows)}
    cp = {i: p for p, i in enumerate(cols)}
    m = la.zeros(len(rows), len(cols))
    for (t, s), v in F.entries.items():
        if t in rp and s in cp:
            m[rp[t]][cp[s]] = v
    return m


def _rank(m) -> int:
    return la.sparse_rank(m) if m and m[0] else 0


def _image_dim_in_h0(F: ThetaComplex, sub: Sequence[int]) -> tuple[int, int]:
    """(dim H^0(sub), dim of its image in H^0(F)) for a subcomplex ``sub``.

    The kernel of H^0(sub) -> H^0(F) is (B(F) cap C(sub)) / B(sub), and
    dim(B(F) cap C(sub)) = rank D - rank(D on rows outside sub) where D is
    the whole differential into degree 0.
    """
    subset = set(sub)
    deg0 = [i for i, g in enumerate(F.gens) if g.degree == 0]
    degm = [i for i, g in enumerate(F.gens) if g.degree == -1]
    h0 = F.restrict(sub).betti().get(0, 0)
    if not degm:
        return h0, h0
    inside = [i for i in deg0 if i in subset]
    outside = [i for i in deg0 if i not in subset]
    total = _rank(_block(F, deg0, degm))
    meet = total - _rank(_block(F, outside, degm))
    b_sub = _rank(_block(F, inside, [i for i in degm if i in subset]))
    return h0, h0 - (meet - b_sub)


@dataclass
class MorseLevel:
    threshold: object  # jump value, "-inf" level or "+inf"
    betti: dict
    h0: int
    h0_image: int

    @property
    def injective(self) -> bool:
        return self.h0 == self.h0_image

    @property
    def concentrated(self) -> bool:
        return all(k == 0 for k in self.betti)


@dataclass
class MorseReport:
    xi: tuple
    jumps: list
    levels: list  # MorseLevel per level: bottom, each jump, +inf

    def h0_profile(self) -> list[tuple]:
        return [(lv.threshold, lv.h0) for lv in self.levels]


def morse_report(F: ThetaComplex, xi: Sequence, at=None, cache: dict | None = None) -> MorseReport:
    """Sublevel complexes {w <= t} for the linear function xi.

    ``at=None`` reports the bottom level (only weight -inf), every finite jump
    and the whole complex; ``at=t`` reports the single level {w < t}.
    """
    xi = la.vec(xi)
    fan = F.fan
    weights = [morse_weight(fan, g, xi) for g in F.gens]
    # sublevels must be subcomplexes: d never raises the weight
    for (t, s) in F.entries:
        if weights[t] > weights[s]:
            raise AssertionError("differential raises the Morse weight")
    jumps = sorted({w for w in weights if w != -inf})
    cache = cache if cache is not None else {}

    def level(th, idxs):
        key = frozenset(idxs)
        if key not in cache:
            cache[key] = (F.restrict(idxs).betti(), *_image_dim_in_h0(F, idxs))
        betti, h0, img = cache[key]
        return MorseLevel(th, betti, h0, img)

    if at is not None:
        t = la.frac(at)
        return MorseReport(tuple(xi), jumps, [level(t, [i for i, w in enumerate(weights) if w < t])])
    levels = [level("-inf", [i for i, w in enumerate(weights) if w == -inf])]
    for j in jumps:
        levels.append(level(j, [i for i, w in enumerate(weights) if w <= j]))
    top = level("+inf", list(range(len(F.gens))))
    levels.append(top)
    return MorseReport(tuple(xi), jumps, levels)


def klyachko_extract(F: ThetaComplex, ray: int) -> list[tuple[int, int]]:
    """(k, dim E_{<=k}) at every k where the H^0 dimension of {w <= k} changes."""
    fan = F.fan
    if not 0 <= ray < len(fan.rays):
        raise ThetaError("not a ray of the fan")
    rep = morse_report(F, fan.rays[ray])
    out = []
    prev = rep.levels[0].h0
    if prev:
        raise ThetaError("sections below every jump")
    for lv in rep.levels[1:-1]:
        if lv.h0 != prev:
            if lv.threshold != int(lv.threshold):
                raise ThetaError("non-integral jump")
            out.append((int(lv.threshold), lv.h0))
            prev = lv.h0
    return out


# ---------------------------------------------------------------------------
# microlocal stalks
# ---------------------------------------------------------------------------


def retained(F: ThetaComplex, x: Sequence, sigma: Face) -> list[int]:
    """Generators (tau, chi) with sigma in tau and x - chi in tau^dual cap sigma^perp."""
    fan = F.fan
    x = la.vec(x)
    sset = set(sigma)
    out = []
    for i, g in enumerate(F.gens):
        if not sset <= set(g.cone):
            continue
        diff = [a - b for a, b in zip(x, g.base)]
        ok = True
        for r in g.cone:
            val = la.dot(fan.rays[r], diff)
            if val < 0 or (r in sset and val != 0):
                ok = False
                break
        if ok:
            out.append(i)
    return out


def microlocal_complex(F: ThetaComplex, x: Sequence, sigma: Face) -> VectComplex:
    sigma = tuple(sorted(sigma))
    if not F.fan.is_face(sigma):
        raise ThetaError(f"cone {list(sigma)} is not in the fan")
    vc = F.restrict(retained(F, x, sigma))
    vc.check()
    return vc


@dataclass
class MuSheaf:
    x: tuple
    stalks: dict  # face -> VectComplex
    kept: dict  # face -> retained generator indices
    restrictions: dict  # (sigma, upsilon) -> {degree: projection matrix}


def _projection(F: ThetaComplex, src: list[int], dst: list[int]) -> dict:
    out = {}
    degs = sorted({F.gens[i].degree for i in src})
    for k in degs:
        s = [i for i in src if F.gens[i].degree == k]
        t = [i for i in dst if F.gens[i].degree == k]
        m = la.zeros(len(t), len(s))
        for a, i in enumerate(t):
            m[a][s.index(i)] = Fraction(1)
        out[k] = m
    return out


def mu_sheaf(F: ThetaComplex, x: Sequence) -> MuSheaf:
    """Microlocal stalks on every cone and the projections between them."""
    x = tuple(la.vec(x))
    fan = F.fan
    kept = {face: retained(F, x, face) for face in fan.all_cones()}
    stalks = {face: F.restrict(idx) for face, idx in kept.items()}
    for vc in stalks.values():
        vc.check()
    rest = {}
    for s in fan.all_cones():
        for u in fan.all_cones():
            if s != u and set(s) <= set(u):
                if not set(kept[u]) <= set(kept[s]):
                    raise AssertionError("retained set does not shrink along a face inclusion")
                proj = _projection(F, kept[s], kept[u])
                _assert_chain_map(stalks[s], stalks[u], proj)
                rest[(s, u)] = proj
    for (s, u), p in rest.items():
        for (u2, w), q in rest.items():
            if u2 == u:
                direct = rest[(s, w)]
                for k in direct:
                    comp = la.matmul(q.get(k, []), p[k]) if q.get(k) and p[k] else None
                    if comp is not None and comp != direct[k]:
                        raise AssertionError("restriction triangle does not commute")
    return MuSheaf(x, stalks, kept, rest)


def _assert_chain_map(a: VectComplex, b: VectComplex, proj: dict) -> None:
    for k in proj:
        da = a.maps.get(k)
        db = b.maps.get(k)
        p0 = proj.get(k)
        p1 = proj.get(k + 1)
        lhs = la.matmul(p1, da) if (p1 and da) else None
        rhs = la.matmul(db, p0) if (db and p0 and p0[0]) else None
        lz = lhs is None or la.is_zero_matrix(lhs)
        rz = rhs is None or la.is_zero_matrix(rhs)
        if lz and rz:
            continue
        if lhs != rhs:
            raise AssertionError(f"restriction is not a chain map in degree {k}")


def h0_restriction_rank(F: ThetaComplex, x: Sequence, sigma: Face, upsilon: Face) -> tuple[int, int]:
    """(rank of H^0 mu_sigma -> H^0 mu_upsilon, dim H^0 mu_upsilon)."""
    ks = retained(F, x, sigma)
    ku = set(retained(F, x, upsilon))
    deg = lambda i: F.gens[i].degree  # noqa: E731
    s0 = [i for i in ks if deg(i) == 0]
    s1 = [i for i in ks if deg(i) == 1]
    u0 = [i for i in s0 if i in ku]
    u1 = [i for i in s1 if i in ku]
    um = [i for i in ks if deg(i) == -1 and i in ku]

    def block(rows, cols):
        m = la.zeros(len(rows), len(cols))
        rp = {i: p for p, i in enumerate(rows)}
        cp = {i: p for p, i in enumerate(cols)}
        for (t, s), v in F.entries.items():
            if t in rp and s in cp:
                m[rp[t]][cp[s]] = v
        return m

    z_sigma = la.nullspace(block(s1, s0), len(s0)) if s1 else la.identity(len(s0))
    pos = {i: p for p, i in enumerate(u0)}
    images = []
    for vec in z_sigma:
        w = [Fraction(0)] * len(u0)
        for i, c in zip(s0, vec):
            if i in pos:
                w[pos[i]] = c
        images.append(w)
    bd = la.transpose(block(u0, um)) if um else []
    b_u = la.span(bd, len(u0)) if bd else ()
    rank = len(la.span(list(b_u) + images, len(u0))) - len(b_u) if u0 else 0
    hu = F.restrict(sorted(ku)).betti().get(0, 0)
    return rank, hu


# ---------------------------------------------------------------------------
# weight-space cohomology tables
# ---------------------------------------------------------------------------


def _table_regions(F: ThetaComplex, sigma: Face):
    """Yield (cell in s-space, x0, P, generator subset) per region of x's.

    x ranges over the lattice points of affine planes <rho_i, x> = c_i
    (rho_i the rays of sigma); on each plane, x = x0 + s P with P a basis of
    sigma^perp cap M, and the retained set is constant on every cell of the
    arrangement cut out by the generators' ray pairings.
    """
    fan = F.fan
    n = fan.dim
    sset = set(sigma)
    classes: dict = {}
    for i, g in enumerate(F.gens):
        if sset <= set(g.cone):
            c = tuple(int(la.dot(fan.rays[r], g.base)) for r in sigma)
            classes.setdefault(c, []).append(i)
    perp = fan.perp_lattice_basis(sigma)
    k = len(perp)
    for c, idxs in sorted(classes.items()):
        x0 = fan.lattice_point(sigma, c)
        hyper = set()
        for i in idxs:
            g = F.gens[i]
            for r in g.cone:
                if r in sset:
                    continue
                rho = fan.rays[r]
                a = tuple(Fraction(la.dot(rho, p)) for p in perp)
                b = la.dot(rho, g.base) - la.dot(rho, x0)
                if any(a):
                    hyper.add((a, b))
        if k == 0:
            yield None, x0, perp, idxs
            continue
        for cell in arrangement(k, list(hyper)).cells:
            yield cell, x0, perp, idxs


def _point(x0, perp, s):
    return tuple(int(x0[j] + sum(s[i] * perp[i][j] for i in range(len(perp)))) for j in range(len(x0)))


def cohomology_table(F: ThetaComplex, sigma: Face = (), on_unbounded: str = "raise") -> dict:
    """Lattice point -> Betti dict of the microlocal complex (nonzero rows only)."""
    fan = F.fan
    if not fan.complete:
        raise FanError("cohomology tables need a complete fan")
    sigma = tuple(sorted(sigma))
    table: dict = {}
    for cell, x0, perp, idxs in _table_regions(F, sigma):
        if cell is None:
            betti = microlocal_complex(F, x0, sigma).betti()
            if betti:
                table[tuple(x0)] = betti
            continue
        s = cell.sample_point()
        sample_x = tuple(x0[j] + sum(s[i] * perp[i][j] for i in range(len(perp))) for j in range(len(x0)))
        betti = microlocal_complex(F, sample_x, sigma).betti()
        if not betti:
            continue
        if not cell.is_bounded():
            if on_unbounded == "raise":
                raise UnboundedTableError(sigma, cell, betti)
            continue
        for pt in lattice_points_in(cell):
            x = _point(x0, perp, pt)
            table[x] = betti
    return dict(sorted(table.items()))


def candidate_points(F: ThetaComplex, sigma: Face) -> list[tuple]:
    """Lattice points covering every retained-set pattern for a cone.

    All lattice points of bounded regions, one per unbounded region, and every
    generator base whose cone contains sigma (where larger cones can retain
    generators).
    """
    sigma = tuple(sorted(sigma))
    out = set()
    for cell, x0, perp, _ in _table_regions(F, sigma):
        if cell is None:
            out.add(tuple(x0))
            continue
        if cell.is_bounded():
            pts = lattice_points_in(cell)
        else:
            pts = _some_lattice_point(cell)
        for pt in pts:
            out.add(_point(x0, perp, pt))
    for g in F.gens:
        if set(sigma) <= set(g.cone):
            out.add(tuple(g.base))
    return sorted(out)


def _some_lattice_point(cell, limit: int = 1 << 12) -> list[tuple]:
    """One integer point of an unbounded cell, searching growing boxes."""
    n = cell.ambient_dim
    radius = 2
    while radius <= limit:
        box = []
        for i in range(n):
            e = tuple(Fraction(int(i == j)) for j in range(n))
            box.append((e, Fraction(-radius)))
            box.append((tuple(-x for x in e), Fraction(-radius)))
        part = make_cell(n, cell.equalities, cell.inequalities + tuple(box)) if _nonempty(cell, box) else None
        if part is not None:
            pts = lattice_points_in(part)
            if pts:
                return [pts[0]]
        radius *= 2
    return []


def _nonempty(cell, box) -> bool:
    from .geometry import try_cell

    return try_cell(cell.ambient_dim, cell.equalities, cell.inequalities + tuple(box)) is not None


# ---------------------------------------------------------------------------
# Euler functions
# ---------------------------------------------------------------------------


def stalk_euler_function(F: ThetaComplex) -> CF:
    """Sum over generators of (-1)^degree times 1 on (chi + sigma^dual)^o."""
    n = F.fan.dim
    return CF.from_terms(n, [(open_translated_dual(F.fan, g.cone, g.base), la.sign_of_parity(g.degree)) for g in F.gens])


def costalk_euler_function(F: ThetaComplex) -> CF:
    """Sum over generators of (-1)^degree times 1 on the closed chi + sigma^dual."""
    n = F.fan.dim
    terms = []
    for g in F.gens:
        for face in closed_translated_dual_faces(F.fan, g.cone, g.base):
            terms.append((face, la.sign_of_parity(g.degree)))
    return CF.from_terms(n, terms)
