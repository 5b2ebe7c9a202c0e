import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toric_ccc import fixtures as fx
from toric_ccc import linalg as la
from toric_ccc.euler import cf_convolve, cf_equal, cf_evaluate, closed_polytope, indicator_open
from toric_ccc.geometry import make_cell
from toric_ccc.theta import (
    ThetaComplex,
    ThetaError,
    ThetaGenerator,
    ThetaMap,
    UnboundedTableError,
    VectComplex,
    cech_complex,
    cohomology_table,
    compactly_supported_sections,
    costalk_euler_function,
    h0_restriction_rank,
    klyachko_extract,
    line_bundle_complex,
    line_bundle_map,
    microlocal_complex,
    morse_report,
    mu_sheaf,
    stalk_euler_function,
    theta_cone,
    theta_sum,
)
from toric_ccc.toric import (
    CartierData,
    KlyachkoBundle,
    Fan,
    cartier_to_klyachko,
    direct_sum,
    morelli_eq1,
    polytope_sections,
    trivial_bundle,
)

BUNDLES = fx.bundle_fixtures()


def test_vect_complex_betti():
    vc = VectComplex({0: 2, 1: 1}, {0: [[1, -1]]})
    assert vc.betti() == {0: 1}
    assert vc.euler() == 1
    with pytest.raises(AssertionError):
        VectComplex({0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]}).check()


def test_cech_o1_on_p1():
    F = line_bundle_complex(fx.o_p1(1))
    gens = sorted((g.degree, g.cone, g.base) for g in F.gens)
    assert gens == [(0, (0,), (0,)), (0, (1,), (1,)), (1, (), (0,))]
    assert sorted(abs(v) for v in F.entries.values()) == [1, 1]
    assert compactly_supported_sections(F).betti() == {0: 1}


def test_cech_trivial_on_p2():
    F = cech_complex(trivial_bundle(fx.fan("P2"), 1))
    assert F.count_by_degree() == {0: 3, 1: 3, 2: 1}
    assert all(g.base == (0, 0) for g in F.gens)
    assert compactly_supported_sections(F).betti() == {0: 1}


def test_cech_rank_additive():
    a, b = BUNDLES["P2:T"], BUNDLES["P2:O(1)"]
    ca, cb = cech_complex(a).count_by_degree(), cech_complex(b).count_by_degree()
    cs = cech_complex(direct_sum(a, b)).count_by_degree()
    assert cs == {k: ca[k] + cb[k] for k in ca}


@pytest.mark.parametrize("name", sorted(BUNDLES))
def test_fibre_theorem(name):
    b = BUNDLES[name]
    assert compactly_supported_sections(cech_complex(b)).betti() == {0: b.rank}


@pytest.mark.parametrize("name", sorted(BUNDLES))
def test_orientation_independence(name):
    b = BUNDLES[name]
    F, G = cech_complex(b), cech_complex(b, orientation="reversed")
    assert compactly_supported_sections(F).betti() == compactly_supported_sections(G).betti()
    for x in [(0,) * b.fan.dim, (1,) * b.fan.dim]:
        for face in b.fan.all_cones():
            assert microlocal_complex(F, x, face).betti() == microlocal_complex(G, x, face).betti()


def test_forbidden_entry_rejected():
    fan = fx.fan("P1")
    gens = [ThetaGenerator((0,), (0,), 0), ThetaGenerator((0,), (1,), 1)]
    with pytest.raises(ThetaError):
        ThetaComplex(fan, gens, {(1, 0): 1})


def test_line_bundle_map():
    L = fx.o_p1xp1(1, 1)
    for u in polytope_sections(L):
        m = line_bundle_map(u, L)
        assert set(m.entries.values()) == {1}
    with pytest.raises(ThetaError, match="fails on cone"):
        line_bundle_map((5, 0), L)


def test_cone_of_identity_is_acyclic():
    L = fx.o_p2(1)
    m = line_bundle_map((0, 0), CartierData.character(L.fan, (0, 0)))
    C = theta_cone(m)
    assert compactly_supported_sections(C).betti() == {}


def test_cone_of_zero_map_is_shifted_sum():
    A = line_bundle_complex(fx.o_p1(0))
    B = line_bundle_complex(fx.o_p1(1))
    C = theta_cone(ThetaMap(A, B, {}))
    assert compactly_supported_sections(C).betti() == {-1: 1, 0: 1}
    assert C.count_by_degree() == theta_sum([A.shift(1), B]).count_by_degree()


def test_ml_complex_cohomology():
    F = fx.ml_complex()
    assert len(F.gens) == 117
    # generic fibre: rank h0(O(3,2)) - 1
    assert compactly_supported_sections(F).betti() == {0: 11}
    table = cohomology_table(F, ())
    total = {}
    for betti in table.values():
        for k, v in betti.items():
            total[k] = total.get(k, 0) + v
    assert total == {0: 12 * 4 - 20}


# -- Morse filtrations -------------------------------------------------------------------


def test_morse_o2_p1():
    F = line_bundle_complex(fx.o_p1(2))
    rep = morse_report(F, (1,))
    assert rep.jumps == [0]
    assert rep.h0_profile() == [("-inf", 0), (0, 1), ("+inf", 1)]
    assert morse_report(F, (-1,)).jumps == [-2]


@pytest.mark.parametrize("name", sorted(BUNDLES))
def test_bundles_have_convex_levels(name):
    F = cech_complex(BUNDLES[name])
    n = F.fan.dim
    for xi in [(1,) * n, (-1,) + (2,) * (n - 1), (Fraction(1, 3),) + (-1,) * (n - 1)]:
        for lv in morse_report(F, xi).levels:
            assert lv.concentrated and lv.injective


@pytest.mark.parametrize("name", sorted(BUNDLES))
def test_klyachko_roundtrip_fixtures(name):
    b = BUNDLES[name]
    F = cech_complex(b)
    for i in range(len(b.fan.rays)):
        assert klyachko_extract(F, i) == b.dims(i)


def test_klyachko_extract_trivial_and_errors():
    F = cech_complex(trivial_bundle(fx.fan("P2"), 3))
    assert all(klyachko_extract(F, i) == [(0, 3)] for i in range(3))
    with pytest.raises(ThetaError):
        klyachko_extract(F, 7)


@pytest.mark.parametrize("seed", range(6))
def test_klyachko_roundtrip_random(seed):
    rng = random.Random(seed)
    fan = fx.fan(rng.choice(["P1", "P2"]))
    b = fx.random_bundle(fan, rng.randint(1, 3), rng)
    F = cech_complex(b)
    for i in range(len(fan.rays)):
        assert klyachko_extract(F, i) == b.dims(i)


@pytest.mark.parametrize("name", ["P2:T", "P1xP1:O(1,1)", "F1:O(0, 0, -1, -1)"])
def test_morse_locality(name):
    # for xi inside a top cone the profile only sees that cone's chart
    b = BUNDLES[name]
    F = cech_complex(b)
    for tau in b.fan.top_cones():
        xi = b.fan.relint(tau).sample_point()
        local = KlyachkoBundle(b.fan.subfan(tau), b.rank, b.filtrations)
        G = cech_complex(local)
        assert morse_report(F, xi).h0_profile() == morse_report(G, xi).h0_profile()


# -- microlocal stalks ---------------------------------------------------------------------


def test_microlocal_examples():
    F = line_bundle_complex(fx.o_p1(1))
    assert microlocal_complex(F, (0,), ()).betti() == {0: 1}
    assert microlocal_complex(F, (0,), (1,)).betti() == {}
    T = line_bundle_complex(CartierData.character(fx.fan("P2"), (1, 2)))
    assert microlocal_complex(T, (1, 2), (0, 1)).betti() == {0: 1}
    with pytest.raises(ThetaError):
        microlocal_complex(F, (0,), (0, 1))


def test_mu_sheaf_o1():
    sheaf = mu_sheaf(line_bundle_complex(fx.o_p1(1)), (0,))
    dims = {face: vc.betti().get(0, 0) for face, vc in sheaf.stalks.items()}
    assert dims == {(): 1, (0,): 1, (1,): 0}


def test_mu_sheaf_skyscraper():
    # x interior to the section polytope: only the zero cone sees anything
    sheaf = mu_sheaf(line_bundle_complex(fx.o_p2(3)), (1, 1))
    dims = {face: vc.betti() for face, vc in sheaf.stalks.items()}
    assert dims.pop(()) == {0: 1}
    assert all(not d for d in dims.values())


def test_two_ray_pattern():
    vals, x, h0 = fx.two_ray_search()
    assert h0[()] == 1
    assert sorted(f for f in h0 if len(f) == 1 and h0[f]) and sum(h0[f] for f in h0 if len(f) == 1) == 2
    assert all(h0[f] == 0 for f in h0 if len(f) == 2)


@pytest.mark.parametrize("name", sorted(BUNDLES))
def test_degree_window(name):
    F = cech_complex(BUNDLES[name])
    n = F.fan.dim
    for face in F.fan.all_cones():
        for x in [(0,) * n, (-1,) * n, (2,) * n, tuple(range(n))]:
            assert all(0 <= k <= n for k in microlocal_complex(F, x, face).betti())


def test_h0_restriction_rank_line_bundle():
    F = line_bundle_complex(fx.o_p1xp1(1, 1))
    rank, target = h0_restriction_rank(F, (0, 0), (0,), (0, 2))
    assert rank == target == 1


# -- cohomology tables ---------------------------------------------------------------------


@pytest.mark.parametrize("d", range(-3, 4))
def test_table_o_d_p1(d):
    table = cohomology_table(line_bundle_complex(fx.o_p1(d)), ())
    if d >= 0:
        expected = {(x,): {0: 1} for x in range(0, d + 1)}
    else:
        expected = {(x,): {1: 1} for x in range(d + 1, 0)}
    assert table == expected


def test_table_p2():
    assert cohomology_table(line_bundle_complex(fx.o_p2(-3)), ()) == {(-1, -1): {2: 1}}
    table = cohomology_table(line_bundle_complex(fx.o_p2(2)), ())
    assert sorted(table) == sorted(polytope_sections(fx.o_p2(2)))
    assert all(v == {0: 1} for v in table.values())


def test_table_tangent():
    table = cohomology_table(cech_complex(fx.tangent_p2()), ())
    assert sum(v.get(0, 0) for v in table.values()) == 8
    assert all(set(v) == {0} for v in table.values())


def test_table_on_top_cone_is_fibre():
    F = line_bundle_complex(fx.o_p1(2))
    assert cohomology_table(F, (1,)) == {(2,): {0: 1}}


def test_unbounded_table_raises():
    # one chart generator alone has sections at every weight of a half line
    F = ThetaComplex(fx.fan("P1"), [ThetaGenerator((0,), (0,), 0)], {})
    with pytest.raises(UnboundedTableError):
        cohomology_table(F, ())
    assert cohomology_table(F, (), on_unbounded="skip") == {(0,): {0: 1}}


# -- Euler bridges -------------------------------------------------------------------------


def test_euler_functions_o1():
    F = line_bundle_complex(fx.o_p1(1))
    assert cf_equal(stalk_euler_function(F), indicator_open(make_cell(1, [], [((1,), 0), ((-1,), -1)])))
    assert cf_equal(costalk_euler_function(F), closed_polytope(1, [((1,), 0), ((-1,), -1)]))


@pytest.mark.parametrize("name", sorted(BUNDLES))
def test_bridge_identity(name):
    b = BUNDLES[name]
    assert cf_equal(morelli_eq1(b), stalk_euler_function(cech_complex(b)))


@pytest.mark.parametrize("name", ["P1:O(2)", "P2:O(-1)", "P2:T"])
def test_costalk_matches_weight_spaces(name):
    F = cech_complex(BUNDLES[name])
    f = costalk_euler_function(F)
    n = F.fan.dim
    for x in [(a,) * n for a in range(-3, 3)] + [tuple(range(-1, n - 1))]:
        assert cf_evaluate(f, x) == microlocal_complex(F, x, ()).euler()


@pytest.mark.parametrize("which", ["P1", "P2", "P1xP1"])
def test_costalk_ring_law(which):
    if which == "P1":
        L, M = fx.o_p1(1), fx.o_p1(2)
    elif which == "P2":
        L, M = fx.o_p2(1), fx.o_p2(1)
    else:
        L, M = fx.o_p1xp1(1, 0), fx.o_p1xp1(1, 1)
    lhs = costalk_euler_function(line_bundle_complex(L + M))
    rhs = cf_convolve(costalk_euler_function(line_bundle_complex(L)), costalk_euler_function(line_bundle_complex(M)))
    assert cf_equal(lhs, rhs)


def test_negative_degrees_keep_integer_signs():
    F = fx.fixed_point_complex()
    G = F.shift(1)
    assert min(g.degree for g in G.gens) < 0
    assert cf_equal(stalk_euler_function(G), -1 * stalk_euler_function(F))
    vc = compactly_supported_sections(G)
    assert isinstance(vc.euler(), int) and vc.euler() == -compactly_supported_sections(F).euler()
