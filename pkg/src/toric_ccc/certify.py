"""Finite decision procedures on Theta-complexes: convexity, bundle, nef.

Each check returns a :class:`CertReport`.  False verdicts always carry at
least one witness that can be re-checked on its own with
:func:`recheck_witness`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import linalg as la
from .euler import CF, cf_evaluate, cf_microlocalize, nonzero_cells, ss_subset_lambda
from .geometry import arrangement, refine
from .theta import (
    ThetaComplex,
    candidate_points,
    cech_complex,
    h0_restriction_rank,
    microlocal_complex,
    morse_report,
    morse_weight,
)
from .toric import Face, Fan, FanError, KlyachkoBundle, klyachko_validate


@dataclass(frozen=True)
class Witness:
    kind: str  # "direction", "point", "restriction", "covector", ...
    data: tuple
    condition: str
    detail: object = None


@dataclass
class CertReport:
    verdict: bool
    witnesses: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict


def _require_complete(fan: Fan) -> None:
    if not fan.complete:
        raise FanError("certification needs a complete fan")


# ---------------------------------------------------------------------------
# convexity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Direction:
    xi: tuple
    cell: object  # arrangement cell it samples


def direction_set(F: ThetaComplex) -> list[Direction]:
    """Covectors covering every combinatorial type of sublevel filtration.

    For each cone of the fan (the zero cone included) take the relative
    interior and cut it by the hyperplanes orthogonal to differences of
    generator bases; one sample per resulting cell.  Inside a cell the set
    of cones containing xi and the order of all generator weights are fixed,
    so every sublevel complex is the same.
    """
    fan = F.fan
    n = fan.dim
    bases = sorted({g.base for g in F.gens})
    hs = sorted({tuple(x - y for x, y in zip(a, b)) for a, b in combinations(bases, 2)})
    out = []
    for face in fan.all_cones():
        rel = fan.relint(face)
        for c in arrangement(n, [(h, 0) for h in hs], within=rel).cells:
            out.append(Direction(tuple(c.sample_point()), c))
    return out


def convexity_at(F: ThetaComplex, xi, cache: dict | None = None) -> list[Witness]:
    rep = morse_report(F, xi, cache=cache)
    out = []
    for lv in rep.levels:
        if not lv.concentrated:
            out.append(Witness("direction", (tuple(xi), lv.threshold), "level cohomology outside degree 0", lv.betti))
        elif not lv.injective:
            out.append(
                Witness("direction", (tuple(xi), lv.threshold), "level H^0 does not inject", (lv.h0, lv.h0_image))
            )
    return out


def convexity_check(F: ThetaComplex, dirs: Sequence | str = "auto") -> CertReport:
    _require_complete(F.fan)
    if dirs == "auto":
        xis = [d.xi for d in direction_set(F)]
    else:
        xis = [tuple(la.vec(x)) for x in dirs]
    witnesses = []
    cache: dict = {}
    for xi in xis:
        witnesses.extend(convexity_at(F, xi, cache))
        if witnesses:
            break
    return CertReport(not witnesses, witnesses, {"directions": len(xis)})


# ---------------------------------------------------------------------------
# vector bundles and nefness
# ---------------------------------------------------------------------------


def is_vector_bundle(F: ThetaComplex) -> CertReport:
    fan = F.fan
    _require_complete(fan)
    witnesses = []
    checked = 0
    for sigma in fan.top_cones():
        for x in candidate_points(F, sigma):
            checked += 1
            betti = microlocal_complex(F, x, sigma).betti()
            if any(k != 0 for k in betti):
                witnesses.append(Witness("point", (tuple(x), sigma), "microlocal stalk outside degree 0", betti))
    return CertReport(not witnesses, sorted(witnesses, key=repr), {"checked": checked})


def is_nef(F: ThetaComplex) -> CertReport:
    fan = F.fan
    _require_complete(fan)
    n = fan.dim
    witnesses = []
    checked = 0
    for sigma in fan.cones_of_dim(n) + fan.cones_of_dim(n - 1):
        for x in candidate_points(F, sigma):
            checked += 1
            betti = microlocal_complex(F, x, sigma).betti()
            if any(k != 0 for k in betti):
                witnesses.append(Witness("point", (tuple(x), sigma), "microlocal stalk outside degree 0", betti))
                continue
            if len(sigma) == n - 1:
                for ups in fan.adjacent_tops(sigma):
                    rank, target = h0_restriction_rank(F, x, sigma, ups)
                    if rank != target:
                        witnesses.append(
                            Witness("restriction", (tuple(x), sigma, ups), "H^0 restriction not surjective", (rank, target))
                        )
    return CertReport(not witnesses, sorted(witnesses, key=repr), {"checked": checked})


def recheck_witness(F: ThetaComplex, w: Witness) -> bool:
    """True if the witness still shows a failure when re-run on its own."""
    if w.kind == "point":
        x, sigma = w.data
        return any(k != 0 for k in microlocal_complex(F, x, sigma).betti())
    if w.kind == "restriction":
        x, sigma, ups = w.data
        rank, target = h0_restriction_rank(F, x, sigma, ups)
        return rank != target
    if w.kind == "direction":
        xi, _ = w.data
        return bool(convexity_at(F, xi))
    raise ValueError(f"unknown witness kind {w.kind!r}")


def prune_to_point(F: ThetaComplex, x: Sequence) -> ThetaComplex:
    """Sub-collection of generators whose closed support contains x.

    Used to check that point verdicts are local.
    """
    fan = F.fan
    keep = [
        i
        for i, g in enumerate(F.gens)
        if all(la.dot(fan.rays[r], [a - b for a, b in zip(x, g.base)]) >= 0 for r in g.cone)
    ]
    pos = {i: p for p, i in enumerate(keep)}
    entries = {(pos[t], pos[s]): v for (t, s), v in F.entries.items() if t in pos and s in pos}
    return ThetaComplex(fan, [F.gens[i] for i in keep], entries, check=False)


# ---------------------------------------------------------------------------
# Morelli image
# ---------------------------------------------------------------------------


def morelli_image_check(f: CF, fan: Fan) -> CertReport:
    """mu_x(f) constant on the interior of every cone of -fan, and SS inside Lambda."""
    if f.ambient_dim != fan.dim:
        raise FanError("dimension mismatch")
    witnesses = []
    if f.terms:
        for base in refine(f.cells).cells:
            x = base.sample_point()
            mu = cf_microlocalize(f, x)
            hs = [h for c, _ in mu.terms for h in c.hyperplanes()]
            for face in fan.all_cones():
                rel = fan.cone(face).antipode().relint()
                vals = {cf_evaluate(mu, c.sample_point()) for c in arrangement(fan.dim, hs, within=rel).cells}
                if len(vals) > 1:
                    witnesses.append(Witness("covector", (tuple(x), face), "mu not constant on a cone interior", sorted(vals)))
    constant_ok = not witnesses
    lam = ss_subset_lambda(f, fan)
    if not lam.verdict:
        base, cov, reason = lam.witness
        witnesses.append(Witness("covector", (base.sample_point(), cov.sample_point()), reason))
    return CertReport(constant_ok and lam.verdict, witnesses, {"mu_constant": constant_ok, "ss_in_lambda": lam.verdict})


# ---------------------------------------------------------------------------
# cohomology oracles
# ---------------------------------------------------------------------------


def nerve_cohomology(b: KlyachkoBundle, m: Sequence[int]) -> dict:
    """Betti numbers of the weight-m part of the Cech complex of the cover by
    maximal affine charts (alternating cochains over the nerve).

    Sections of weight m over the chart of a cone are the intersection of
    E^rho_{<= <rho, m>} over its rays.  This is independent of the
    all-cones resolution used by :func:`cech_complex`.
    """
    fan = b.fan
    r = b.rank
    tops = list(fan.maximal)
    spaces: dict = {}
    levels: dict = {}
    for k in range(1, len(tops) + 1):
        for s in combinations(range(len(tops)), k):
            common = set(tops[s[0]])
            for i in s[1:]:
                common &= set(tops[i])
            sp = tuple(tuple(v) for v in la.identity(r))
            for ray in sorted(common):
                sub = b.subspace(ray, la.dot(fan.rays[ray], m))
                sp = la.subspace_intersection(sp, sub, r) if sp and sub else ()
            if sp:
                spaces[s] = sp
                levels.setdefault(k - 1, []).append(s)
    from .theta import VectComplex

    dims = {k: sum(len(spaces[s]) for s in ss) for k, ss in levels.items()}
    maps = {}
    for k, ss in levels.items():
        nxt = levels.get(k + 1)
        if not nxt:
            continue
        col_off, row_off = {}, {}
        off = 0
        for s in ss:
            col_off[s] = off
            off += len(spaces[s])
        off = 0
        for t in nxt:
            row_off[t] = off
            off += len(spaces[t])
        mat = la.zeros(dims[k + 1], dims[k])
        for t in nxt:
            bt = spaces[t]
            # coordinates in bt of vectors lying in its span
            for pos in range(len(t)):
                s = t[:pos] + t[pos + 1:]
                if s not in spaces:
                    continue
                sign = (-1) ** pos
                for j, v in enumerate(spaces[s]):
                    coords = la.solve(la.transpose([list(x) for x in bt]), v, len(bt))
                    if coords is None:
                        raise AssertionError("restriction leaves the smaller chart's sections")
                    for i, c in enumerate(coords):
                        if c:
                            mat[row_off[t] + i][col_off[s] + j] += sign * c
        maps[k] = mat
    return VectComplex(dims, maps).betti()


def weight_box(b: KlyachkoBundle, margin: int = 2) -> list[tuple]:
    splits = klyachko_validate(b)
    pts = [w for face in b.fan.top_cones() for w in splits[face].weights]
    n = b.fan.dim
    lo = [min(p[i] for p in pts) - margin for i in range(n)]
    hi = [max(p[i] for p in pts) + margin for i in range(n)]
    return list(product(*[range(lo[i], hi[i] + 1) for i in range(n)]))


def nerve_table(b: KlyachkoBundle, margin: int = 2) -> dict:
    table = {}
    for m in weight_box(b, margin):
        betti = nerve_cohomology(b, m)
        if betti:
            table[tuple(m)] = betti
    return table


def ccc_consistency(b: KlyachkoBundle, expected: dict | None = None) -> CertReport:
    """Compare the microlocal weight table of the Cech complex with the
    nerve oracle (and with a closed form if given)."""
    from .theta import cohomology_table

    table = cohomology_table(cech_complex(b), ())
    oracle = nerve_table(b)
    witnesses = []
    for x in sorted(set(table) | set(oracle)):
        if table.get(x) != oracle.get(x):
            witnesses.append(Witness("point", (x, ()), "table differs from nerve oracle", (table.get(x), oracle.get(x))))
    if expected is not None:
        for x in sorted(set(table) | set(expected)):
            if table.get(x) != expected.get(x):
                witnesses.append(Witness("point", (x, ()), "table differs from closed form", (table.get(x), expected.get(x))))
    return CertReport(not witnesses, witnesses, {"table": table})


# ---------------------------------------------------------------------------
# nef oracle on invariant curves lives in toric; re-exported for convenience
# ---------------------------------------------------------------------------

from .toric import nef_oracle_curves  # noqa: E402,F401
