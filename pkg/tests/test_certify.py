import random

import pytest

from toric_ccc import fixtures as fx
from toric_ccc.certify import (
    ccc_consistency,
    convexity_at,
    convexity_check,
    direction_set,
    is_nef,
    is_vector_bundle,
    morelli_image_check,
    nef_oracle_curves,
    nerve_cohomology,
    prune_to_point,
    recheck_witness,
)
from toric_ccc.euler import closed_polytope
from toric_ccc.theta import cech_complex, line_bundle_complex, microlocal_complex
from toric_ccc.toric import FanError, direct_sum, morelli_eq1, polytope_sections, trivial_bundle

from strategies import hull_indicator

BUNDLES = fx.bundle_fixtures()


# -- convexity --------------------------------------------------------------------------


def test_direction_set_covers_every_cone():
    F = line_bundle_complex(fx.o_p1(2))
    xis = sorted(d.xi for d in direction_set(F))
    assert xis == [(-1,), (0,), (1,)]


@pytest.mark.parametrize("name", ["P1:O(2)", "P2:O(1)", "P2:T", "P1xP1:O(1,1)", "F1:O(0, 0, 0, -1)", "P2:O(1)+O(2)"])
def test_bundles_are_convex(name):
    assert convexity_check(cech_complex(BUNDLES[name])).verdict


def test_fixed_point_not_convex():
    F = fx.fixed_point_complex()
    rep = convexity_check(F)
    assert not rep.verdict
    w = rep.witnesses[0]
    assert w.kind == "direction"
    assert recheck_witness(F, w)


def test_shifted_sum_not_convex():
    F = fx.shifted_sum()
    rep = convexity_check(F)
    assert not rep.verdict
    assert any(w.detail and len(w.detail) >= 2 for w in rep.witnesses if isinstance(w.detail, dict))


def test_convexity_with_explicit_directions():
    F = fx.fixed_point_complex()
    assert convexity_check(F, dirs=[(1,)]).verdict
    assert not convexity_check(F, dirs=[(-1,)]).verdict
    assert convexity_at(F, (-1,))


def test_convexity_needs_complete_fan():
    F = cech_complex(trivial_bundle(fx.affine_plane(), 1))
    with pytest.raises(FanError):
        convexity_check(F)


# -- vector bundles ---------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(BUNDLES))
def test_bundles_certify(name):
    F = cech_complex(BUNDLES[name])
    assert is_vector_bundle(F).verdict


def test_fixed_point_not_a_bundle():
    F = fx.fixed_point_complex()
    rep = is_vector_bundle(F)
    assert not rep.verdict
    w = rep.witnesses[0]
    x, sigma = w.data
    assert x == (0,) and sigma == (1,)
    assert w.detail == {-1: 1}
    assert recheck_witness(F, w)


def test_shifted_sum_not_a_bundle():
    rep = is_vector_bundle(fx.shifted_sum())
    assert not rep.verdict and all(recheck_witness(fx.shifted_sum(), w) for w in rep.witnesses)


def test_translation_invariance():
    for F in (cech_complex(BUNDLES["P2:T"]), fx.fixed_point_complex()):
        v = (2, -1)[: F.fan.dim]
        G = F.translate(v)
        assert is_vector_bundle(F).verdict == is_vector_bundle(G).verdict
        assert is_nef(F).verdict == is_nef(G).verdict


def test_point_verdicts_are_local():
    F = fx.fixed_point_complex()
    for sigma in F.fan.all_cones():
        for x in [(-1,), (0,), (1,), (2,)]:
            full = microlocal_complex(F, x, sigma).betti()
            pruned = microlocal_complex(prune_to_point(F, x), x, sigma).betti()
            assert full == pruned


# -- nefness -----------------------------------------------------------------------------


@pytest.mark.parametrize("a", range(-2, 3))
@pytest.mark.parametrize("b", range(-2, 3))
def test_nef_line_bundles(a, b):
    bundle = fx.line(fx.o_p1xp1(a, b))
    verdict = is_nef(cech_complex(bundle)).verdict
    assert verdict == (a >= 0 and b >= 0) == nef_oracle_curves(bundle)[0]


def test_nef_examples():
    assert is_nef(cech_complex(fx.tangent_p2())).verdict
    rep = is_nef(cech_complex(BUNDLES["P2:O(-1)"]))
    assert not rep.verdict and all(recheck_witness(cech_complex(BUNDLES["P2:O(-1)"]), w) for w in rep.witnesses)
    assert not is_nef(cech_complex(BUNDLES["P1:O(1)+O(-1)"])).verdict
    assert not nef_oracle_curves(BUNDLES["P1:O(1)+O(-1)"])[0]


@pytest.mark.parametrize("seed", range(10))
def test_nef_matches_oracle_random(seed):
    rng = random.Random(1000 + seed)
    fan = fx.fan(rng.choice(["P2", "P1xP1"]))
    b = fx.random_bundle(fan, rng.randint(1, 2), rng, jumps=(-2, 2))
    assert is_nef(cech_complex(b)).verdict == nef_oracle_curves(b)[0]


def test_fujino_search():
    n, m, count, h1 = fx.fujino_search(3, 4)
    assert (n, m) == (3, 3)
    assert count == 1 and h1 == {(-1, -1): {1: 1}}
    b = fx.fujino_bundle(n, m)
    assert nef_oracle_curves(b)[0]


# -- Morelli image -----------------------------------------------------------------------


@pytest.mark.parametrize("name", ["P1:O(1)", "P2:O(2)", "P2:T", "P1xP1:O(1,1)", "F1:O(0, 0, -1, -1)"])
def test_morelli_image_of_bundles(name):
    b = BUNDLES[name]
    assert morelli_image_check(morelli_eq1(b), b.fan).verdict


def test_morelli_image_rotated_square():
    f = hull_indicator([(1, 0), (0, 1), (-1, 0), (0, -1)])
    rep = morelli_image_check(f, fx.fan("P1xP1"))
    assert not rep.verdict and rep.witnesses


def test_morelli_image_half_open_square_paths_agree():
    # [0,1) x [0,1): two closed edges
    sq = closed_polytope(2, [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)])
    right = closed_polytope(2, [((0, 1), 0), ((0, -1), -1)], [((1, 0), 1)])
    top = closed_polytope(2, [((1, 0), 0), ((-1, 0), -1)], [((0, 1), 1)])
    corner = closed_polytope(2, [], [((1, 0), 1), ((0, 1), 1)])
    half_open = sq - right - top + corner
    rep = morelli_image_check(half_open, fx.fan("P1xP1"))
    assert rep.info["mu_constant"] == rep.info["ss_in_lambda"]


# -- cohomology oracles ------------------------------------------------------------------


@pytest.mark.parametrize("name", ["P1:O(2)", "P1:O(-2)", "P2:O(2)", "P2:O(-3)", "P2:T", "P1xP1:O(-1,1)", "F1:O(1, 0, 0, 0)"])
def test_ccc_consistency(name):
    assert ccc_consistency(BUNDLES[name]).verdict


def test_ccc_closed_forms():
    table_o2 = {x: {0: 1} for x in polytope_sections(fx.o_p2(2))}
    assert ccc_consistency(BUNDLES["P2:O(2)"], table_o2).verdict
    assert ccc_consistency(BUNDLES["P2:O(-3)"], {(-1, -1): {2: 1}}).verdict
    assert ccc_consistency(BUNDLES["P1:O(-1)"] if "P1:O(-1)" in BUNDLES else fx.line(fx.o_p1(-1)), {}).verdict
    b = direct_sum(fx.line(fx.o_p1(2)), fx.line(fx.o_p1(-2)))
    assert ccc_consistency(b, {(0,): {0: 1}, (1,): {0: 1}, (2,): {0: 1}, (-1,): {1: 1}}).verdict


def test_nerve_cohomology_tangent_sections():
    b = fx.tangent_p2()
    assert sum(nerve_cohomology(b, m).get(0, 0) for m in [(i, j) for i in range(-3, 3) for j in range(-3, 3)]) == 8
