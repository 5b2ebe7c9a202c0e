"""Standard fans, bundles and complexes used by tests, the CLI and reports."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from . import linalg as la
from .theta import (
    ThetaComplex,
    cech_complex,
    line_bundle_complex,
    line_bundle_map,
    mu_sheaf,
    theta_cone,
    theta_map_sum,
    theta_sum,
    cohomology_table,
)
from .toric import (
    CartierData,
    ConditionCError,
    Fan,
    KlyachkoBundle,
    cartier_to_klyachko,
    frobenius_pullback,
    klyachko_validate,
    polytope_sections,
    tensor_line,
)


def p1() -> Fan:
    return Fan(1, [(1,), (-1,)], [(0,), (1,)], "P1")


def p2() -> Fan:
    return Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)], "P2")


def p1xp1() -> Fan:
    return Fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (1, 2), (1, 3), (0, 3)], "P1xP1")


def f1() -> Fan:
    return Fan(2, [(1, 0), (0, 1), (-1, 1), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)], "F1")


def affine_plane() -> Fan:
    return Fan(2, [(1, 0), (0, 1)], [(0, 1)], "A2")


FANS = {"P1": p1, "P2": p2, "P1xP1": p1xp1, "F1": f1}

_CACHE: dict = {}


def fan(name: str) -> Fan:
    if name not in _CACHE:
        _CACHE[name] = FANS[name]()
    return _CACHE[name]


# -- line bundles -------------------------------------------------------------


def o_p1(d: int) -> CartierData:
    """O(d) on P1: characters 0 and d."""
    return CartierData(fan("P1"), [(0,), (d,)])


def o_p2(d: int) -> CartierData:
    """O(d) on P2: the last ray carries -d."""
    return CartierData.from_ray_values(fan("P2"), [0, 0, -d])


def o_p1xp1(a: int, b: int) -> CartierData:
    """O(a, b): sections are the lattice points of [0, a] x [0, b]."""
    return CartierData.from_ray_values(fan("P1xP1"), [0, -a, 0, -b])


def o_f1(values) -> CartierData:
    return CartierData.from_ray_values(fan("F1"), list(values))


def tangent_p2() -> KlyachkoBundle:
    """T_P2: E = N_Q, E^a_{<=-1} = span(a), E^a_{<=0} = E."""
    fn = fan("P2")
    return KlyachkoBundle(fn, 2, {i: [(-1, [fn.rays[i]]), (0, la.identity(2))] for i in range(3)})


def line(L: CartierData) -> KlyachkoBundle:
    return cartier_to_klyachko(L)


def fujino_bundle(n: int, m: int) -> KlyachkoBundle:
    """Frobenius pullback Fr_n^* T_P2 twisted by O(-m)."""
    return tensor_line(frobenius_pullback(tangent_p2(), n), o_p2(-m))


def bundle_fixtures() -> dict:
    from .toric import direct_sum

    out = {}
    for d in (-2, -1, 0, 1, 2):
        out[f"P1:O({d})"] = line(o_p1(d))
    for d in (-3, -1, 0, 1, 2):
        out[f"P2:O({d})"] = line(o_p2(d))
    for a, b in ((1, 1), (2, 0), (-1, 1), (3, 2)):
        out[f"P1xP1:O({a},{b})"] = line(o_p1xp1(a, b))
    for vals in ((0, 0, 0, -1), (0, 0, -1, -1), (1, 0, 0, 0)):
        out[f"F1:O{vals}"] = line(o_f1(vals))
    out["P2:T"] = tangent_p2()
    out["P1:O(1)+O(-1)"] = direct_sum(line(o_p1(1)), line(o_p1(-1)))
    out["P2:O(1)+O(2)"] = direct_sum(line(o_p2(1)), line(o_p2(2)))
    return out


# -- non-bundle complexes ---------------------------------------------------------


def fixed_point_complex() -> ThetaComplex:
    """Cone of the section O -> O(1) on P1 vanishing at the fixed point of the
    negative chart (weight 1 there): resolves that point's structure sheaf."""
    return theta_cone(line_bundle_map((0,), o_p1(1)))


def shifted_sum(a: int = 0, b: int = 1) -> ThetaComplex:
    """kappa(O(a)) + kappa(O(b))[1] on P1."""
    return theta_sum([line_bundle_complex(o_p1(a)), line_bundle_complex(o_p1(b)).shift(1)])


def ml_complex(L: CartierData | None = None, twist: CartierData | None = None) -> ThetaComplex:
    """M_L (x) L' as cone(+_u kappa(O(u) (x) L') -> kappa(L (x) L'))[-1]."""
    L = L if L is not None else o_p1xp1(3, 2)
    twist = twist if twist is not None else o_p1xp1(1, 1)
    maps = [line_bundle_map(u, L, twist=twist) for u in polytope_sections(L)]
    target = maps[0].target
    return theta_cone(theta_map_sum(maps, target)).shift(-1)


# -- random bundles ------------------------------------------------------------


def random_invertible(rng: random.Random, r: int) -> list[list[Fraction]]:
    while True:
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(r)] for _ in range(r)]
        if la.det(m) != 0:
            return m


def random_bundle(fn: Fan, rank: int, rng: random.Random, jumps=(-3, 3), tries: int = 50) -> KlyachkoBundle:
    """Random jumps and random rational flags, rejection-sampled through
    condition (C)."""
    for _ in range(tries):
        filts = {}
        for i in range(len(fn.rays)):
            basis = random_invertible(rng, rank)
            labels = [rng.randint(*jumps) for _ in range(rank)]
            steps = []
            for k in sorted(set(labels)):
                steps.append((k, [basis[j] for j in range(rank) if labels[j] <= k]))
            filts[i] = steps
        b = KlyachkoBundle(fn, rank, filts)
        try:
            klyachko_validate(b)
        except ConditionCError:
            continue
        return b
    raise RuntimeError("no valid random bundle found")


# -- searches ------------------------------------------------------------------


def fujino_search(n_max: int = 3, m_max: int = 6):
    """Smallest (n, m) (by n, then m) with Fr_n^* T (x) O(-m) nef and H^1 != 0."""
    from .certify import is_nef

    for n in range(1, n_max + 1):
        for m in range(0, m_max + 1):
            b = fujino_bundle(n, m)
            cx = cech_complex(b)
            if not is_nef(cx).verdict:
                continue
            table = cohomology_table(cx, ())
            h1 = {x: v for x, v in table.items() if v.get(1)}
            if h1:
                return n, m, sum(v[1] for v in h1.values()), h1
    return None


def two_ray_search(values_range=range(-2, 3), box: int = 3):
    """F1 line bundle and lattice point whose H^0 microlocal stalk dimensions
    are 1 on the zero cone and on exactly two rays and 0 on top cones."""
    fn = fan("F1")
    for vals in product(values_range, repeat=len(fn.rays)):
        cx = line_bundle_complex(o_f1(vals))
        bases = {g.base for g in cx.gens}
        xs = sorted({(b[0] + dx, b[1] + dy) for b in bases for dx in (-1, 0, 1) for dy in (-1, 0, 1)})
        for x in xs:
            if max(abs(c) for c in x) > box:
                continue
            sheaf = mu_sheaf(cx, x)
            h0 = {face: vc.betti().get(0, 0) for face, vc in sheaf.stalks.items()}
            if h0[()] != 1:
                continue
            rays = [f for f in h0 if len(f) == 1]
            tops = [f for f in h0 if len(f) == 2]
            if sum(h0[f] for f in rays) == 2 and all(h0[f] in (0, 1) for f in rays) and all(h0[f] == 0 for f in tops):
                return vals, x, h0
    return None
