"""End-to-end acceptance checks; each test carries the criterion it covers."""

import itertools
import random
from fractions import Fraction as F

import pytest

import oracles
from ordercomplex import presets
from ordercomplex.closure_system import ClosureSystem
from ordercomplex.constructions import edmondson as ed
from ordercomplex.constructions.closure import cube_retraction, xcl_membership
from ordercomplex.constructions.functor import functor_map
from ordercomplex.constructions.pairs import (PairConstraintSet, delta_s_closure_check, delta_s_hasse_edges,
                                              delta_s_membership)
from ordercomplex.constructions.product import product_iso, product_iso_inverse
from ordercomplex.constructions.stitch import StitchFamily, stitch, stitch_delta_check
from ordercomplex.constructions.thicken import (ThickenedSpace, cell_order, in_cell, sample_member, thick_join,
                                                thick_meet, thick_membership, thick_generated_sublattice)
from ordercomplex.delta import (DeltaPoint, breadth_family, delta_join, delta_membership, extract_chain,
                                is_meet_irredundant, join_by_majorization, join_by_upper_bounds, sample_point)
from ordercomplex.gamma import (MOmega, StepFunction, gamma_metric, momega_cost, sample_step_function,
                                witness_unbounded_interval, witness_unbounded_join)
from ordercomplex.poset import PosetMap, find_isomorphism, find_m3, longest_chain_length
from ordercomplex.formats import parse_poset

ONE, ZERO = F(1), F(0)


def iso(a, b) -> bool:
    return find_isomorphism(a, b) is not None


# 1 -----------------------------------------------------------------------

@pytest.mark.criterion(1, "vertex maps of M3, N5, 2^3 are exact lattice embeddings")
@pytest.mark.parametrize("name", ["M3", "N5", "boolean3"])
def test_vertex_embedding(name):
    l = presets.lookup(name)
    v = [DeltaPoint.vertex(l, x) for x in range(l.n)]
    assert len(set(v)) == l.n
    for x, y in itertools.product(range(l.n), repeat=2):
        assert v[x] & v[y] == v[l.meet(x, y)]
        assert v[x] | v[y] == v[l.join(x, y)]
        assert (v[x] <= v[y]) == l.leq(x, y)


# 2 -----------------------------------------------------------------------

@pytest.mark.criterion(2, "lattice axioms and modular law on 10^4 triples of the M3 complex; vertex distributivity failure")
def test_m3_complex_axioms_and_modularity():
    l = presets.m3()
    rng = random.Random(2024)
    for _ in range(10_000):
        f, g, h = (sample_point(l, rng, 6, faces=True) for _ in range(3))
        assert f & g == g & f and f | g == g | f
        assert (f & g) & h == f & (g & h) and (f | g) | h == f | (g | h)
        assert f & (f | g) == f and f | (f & g) == f
        fh = f & h
        # modularity in identity form: (f^h) v (g^h) == ((f^h) v g) ^ h
        assert fh | (g & h) == (fh | g) & h


@pytest.mark.criterion(2, "lattice axioms and modular law on 10^4 triples of the M3 complex; vertex distributivity failure")
def test_m3_vertex_triple_is_not_distributive():
    l = presets.m3()
    a, b, c = (DeltaPoint.vertex(l, l.index(x)) for x in "abc")
    assert (a | b) & c == c
    assert (a & c) | (b & c) == DeltaPoint.vertex(l, l.bottom)
    assert (a | b) & c != (a & c) | (b & c)


# 3 -----------------------------------------------------------------------

@pytest.mark.criterion(3, "level-set join equals both oracles on all lattices with at most 5 elements")
def test_join_oracles_agree():
    rng = random.Random(3)
    lattices = oracles.all_lattices(5)
    assert len(lattices) == 10
    pairs = 0
    for l in lattices:
        seen = 0
        while seen < 110:
            f, g = sample_point(l, rng, 4, faces=True), sample_point(l, rng, 4, faces=True)
            if len(set(f.values)) > 4 or len(set(g.values)) > 4:
                continue
            seen += 1
            join = delta_join(f, g).values
            assert join == join_by_upper_bounds(f, g)
            assert join == join_by_majorization(f, g)
            if seen <= 5:
                assert join == oracles.grid_join(l, f.values, g.values)
        pairs += seen
    assert pairs >= 1000


# 4 -----------------------------------------------------------------------

def _random_family(l, chain, rng):
    k = len(chain) - 1
    coefficients = sorted(rng.sample(range(0, 16), k), reverse=True)
    return breadth_family(l, chain, [F(r, 16) for r in coefficients])


@pytest.mark.criterion(4, "breadth of the complex equals the longest chain length; extraction never fails")
@pytest.mark.parametrize("name", ["M3", "N5", "boolean3", "chain4"])
def test_breadth_equals_dimension(name):
    l = presets.lookup(name)
    dim = longest_chain_length(l)
    longest = [ch for ch in l.maximal_chains if len(ch) == dim + 1]
    for chain in longest:
        family = breadth_family(l, chain, [F(dim - i, dim + 1) for i in range(dim)])
        assert len(family) == dim and is_meet_irredundant(family)
    rng = random.Random(4)
    families = [_random_family(l, rng.choice(longest), rng) for _ in range(100)]
    while len(families) < 200:
        k = rng.randint(1, dim)
        candidate = [sample_point(l, rng, 8, faces=True) for _ in range(k)]
        if is_meet_irredundant(candidate):
            families.append(candidate)
    for family in families:
        assert is_meet_irredundant(family)
        chain = extract_chain(family)
        assert len(chain) == len(family) + 1
        assert all(l.lt(a, b) for a, b in zip(chain, chain[1:]))
    assert sum(len(f) == dim for f in families) >= 100


# 5 -----------------------------------------------------------------------

def _m3_space(c):
    return ThickenedSpace(presets.m3_points(), F(c))


@pytest.mark.criterion(5, "thickening: nondistributivity, join, pentagons, no M3, monotone cells")
def test_thickening_equalities():
    s = _m3_space(F(1, 4))
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert thick_join(s, e1, e3) == (ONE, F(3, 4), ONE)
    assert thick_meet(s, e2, thick_join(s, e1, e3)) == (ZERO, F(3, 4), ZERO)
    assert thick_join(s, thick_meet(s, e2, e1), thick_meet(s, e2, e3)) == (ZERO, ZERO, ZERO)


@pytest.mark.criterion(5, "thickening: nondistributivity, join, pentagons, no M3, monotone cells")
@pytest.mark.parametrize("c", [F(1, 4), F(1, 2), F(3, 4)])
def test_thickening_pentagon(c):
    s = _m3_space(c)
    low, side = (ONE, ZERO, ZERO), (ZERO, ZERO, ONE)
    high = (ONE, c, ZERO) if c <= F(1, 2) else (ONE, 1 - c, ZERO)
    assert all(thick_membership(s, p) for p in (low, high, side))
    assert thick_join(s, low, side) == thick_join(s, high, side)
    assert thick_meet(s, low, side) == thick_meet(s, high, side)
    lattice, _ = thick_generated_sublattice(s, [low, high, side])
    assert iso(lattice, presets.n5())


@pytest.mark.criterion(5, "thickening: nondistributivity, join, pentagons, no M3, monotone cells")
@pytest.mark.parametrize("c", [F(1, 4), F(1, 2), F(3, 4)])
def test_thickening_has_no_m3(c):
    s = _m3_space(c)
    rng = random.Random(5)
    for _ in range(500):
        lattice, _ = thick_generated_sublattice(s, [sample_member(s, rng) for _ in range(3)])
        assert find_m3(lattice) is None


@pytest.mark.criterion(5, "thickening: nondistributivity, join, pentagons, no M3, monotone cells")
def test_thickening_monotone_cells():
    s = _m3_space(F(1, 4))
    rng = random.Random(55)
    checked = 0
    while checked < 1000:
        f = sample_member(s, rng)
        e = cell_order(f)
        g, h = sample_member(s, rng), sample_member(s, rng)
        if not (in_cell(g, e) and in_cell(h, e)):
            continue
        checked += 1
        hi = tuple(map(max, f, g))
        lo = tuple(map(min, f, g))
        assert thick_membership(s, hi) and thick_membership(s, lo)
        assert thick_join(s, f, g) == hi and thick_meet(s, f, g) == lo
        lhs = thick_meet(s, f, thick_join(s, g, h))
        rhs = thick_join(s, thick_meet(s, f, g), thick_meet(s, f, h))
        assert lhs == rhs


# 6 -----------------------------------------------------------------------

@pytest.mark.criterion(6, "Edmondson pentagons, bound properties, and the band description of the N5 complex")
def test_edmondson_pentagons():
    space = ed.classic_instance()
    rng = random.Random(6)
    found = 0
    while found < 200:
        x, x2 = ed.sample_cube_point(space, rng), ed.sample_cube_point(space, rng)
        a = space.lower
        lhs = max(a(x), a(x2))
        rhs = min(a(space.base_l.join(x, x2)), space.upper(x))
        if not lhs < rhs:
            continue
        found += 1
        w = ed.edmondson_n5_witness(space, x, x2)
        assert w is not None and w.branch == "join"
        lattice, _ = ed.edmondson_generated_sublattice(space, [w.low, w.high, w.side])
        assert iso(lattice, presets.n5())


@pytest.mark.criterion(6, "Edmondson pentagons, bound properties, and the band description of the N5 complex")
def test_edmondson_ops_are_bounds():
    space = ed.classic_instance()
    rng = random.Random(66)
    for _ in range(200):
        p, q = ed.sample_member(space, rng), ed.sample_member(space, rng)
        meet, join = ed.edmondson_ops(space, p, q)
        assert ed.edmondson_membership(space, meet) and ed.edmondson_membership(space, join)
        for r in (p, q):
            assert ed.edmondson_leq(space, meet, r) and ed.edmondson_leq(space, r, join)
        assert ed.edmondson_leq(space, join, ed.sample_upper_bound(space, p, q, rng))
        assert ed.edmondson_leq(space, ed.sample_lower_bound(space, p, q, rng), meet)


@pytest.mark.criterion(6, "Edmondson pentagons, bound properties, and the band description of the N5 complex")
def test_n5_complex_matches_band():
    l = presets.n5()
    space = ed.pentagon_instance()
    rng = random.Random(666)
    members = 0
    for k in range(500):
        if k % 2:
            f = sample_point(l, rng, 8, faces=True)
            pair, values = ed.pentagon_point_to_pair(f), f.values
        else:
            pair = (ed.sample_cube_point(space, rng), F(rng.randint(0, 8), 8))
            values = ed.pair_to_pentagon_values(l, pair)
        in_delta = bool(delta_membership(l, values))
        assert in_delta == ed.edmondson_membership(space, pair)
        members += in_delta
    assert 250 <= members < 500


# 7 -----------------------------------------------------------------------

CHAIN_A = parse_poset("elements: 0 a 1\ncover: 0 a\ncover: a 1\n")
CHAIN_B = parse_poset("elements: 0 b 1\ncover: 0 b\ncover: b 1\n")
CHAIN_C = parse_poset("elements: 0 c 1\ncover: 0 c\ncover: c 1\n")
CHAIN_4 = parse_poset("elements: 0 a b 1\ncover: 0 a\ncover: a b\ncover: b 1\n")


@pytest.mark.criterion(7, "stitching chains gives 2^2, N5 and M3; complex decomposition check")
def test_stitching():
    assert iso(stitch(StitchFamily([CHAIN_A, CHAIN_B], ["0", "1"])), presets.boolean(2))
    assert iso(stitch(StitchFamily([CHAIN_4, CHAIN_C], ["0", "1"])), presets.n5())
    m3 = stitch(StitchFamily([CHAIN_A, CHAIN_B, CHAIN_C], ["0", "1"]))
    assert iso(m3, presets.m3())
    report = stitch_delta_check([CHAIN_A, CHAIN_B, CHAIN_C], samples=200, seed=7)
    assert report.ok, report.failures[:3]
    assert report.facets_per_part == [1, 1, 1]
    # facets are 2-simplices whose pairwise intersections are the edge {0, 1}
    facets = [set(ch) for ch in m3.maximal_chains]
    assert len(facets) == 3 and all(len(f) == 3 for f in facets)
    for f, g in itertools.combinations(facets, 2):
        assert f & g == {m3.bottom, m3.top}


# 8 -----------------------------------------------------------------------

@pytest.mark.criterion(8, "product isomorphism round trip and order embedding")
@pytest.mark.parametrize("names", [("M3", "N5"), ("chain3", "boolean2")])
def test_product_iso(names):
    p, q = (presets.lookup(n) for n in names)
    rng = random.Random(8)
    comparable = 0
    for k in range(500):
        fp, fq = sample_point(p, rng, 8, True), sample_point(q, rng, 8, True)
        gp, gq = sample_point(p, rng, 8, True), sample_point(q, rng, 8, True)
        if k % 2:
            gp, gq = fp | gp, fq | gq
        F1, G1 = product_iso(fp, fq), product_iso(gp, gq)
        assert product_iso_inverse(F1, p, q) == (fp, fq)
        assert product_iso_inverse(G1, p, q) == (gp, gq)
        assert (fp <= gp and fq <= gq) == (F1 <= G1)
        comparable += F1 <= G1
    assert comparable >= 250


# 9 -----------------------------------------------------------------------

def _cube_inclusion():
    cube = presets.boolean(3)
    sub = parse_poset("elements: 000 100 010 110 111\n"
                      "cover: 000 100\ncover: 000 010\ncover: 100 110\ncover: 010 110\ncover: 110 111\n")
    from ordercomplex.poset import lattice_from_poset
    sub = lattice_from_poset(sub)
    return PosetMap(sub, cube, tuple(cube.index(x) for x in sub.names))


def _projection():
    cube, square = presets.boolean(3), presets.boolean(2)
    return PosetMap(cube, square, tuple(square.index(x[:2]) for x in cube.names))


@pytest.mark.criterion(9, "covariant preservation, contravariant join counterexample, contravariant meets")
@pytest.mark.parametrize("make", [_cube_inclusion, _projection])
def test_covariant_preserves(make):
    h = make()
    assert h.homomorphism_violation() is None
    rng = random.Random(9)
    for _ in range(500):
        f, g = sample_point(h.domain, rng, 8, True), sample_point(h.domain, rng, 8, True)
        assert functor_map(h, f | g) == functor_map(h, f) | functor_map(h, g)
        assert functor_map(h, f & g) == functor_map(h, f) & functor_map(h, g)


@pytest.mark.criterion(9, "covariant preservation, contravariant join counterexample, contravariant meets")
def test_contravariant_join_counterexample():
    h = _cube_inclusion()
    cube, sub = h.codomain, h.domain

    def down(l, name):
        return DeltaPoint.vertex(l, l.index(name))

    u, v = down(cube, "101"), down(cube, "011")
    pulled = functor_map(h, u, "contravariant") | functor_map(h, v, "contravariant")
    assert pulled == down(sub, "110")
    assert functor_map(h, u | v, "contravariant") == down(sub, "111")


@pytest.mark.criterion(9, "covariant preservation, contravariant join counterexample, contravariant meets")
def test_contravariant_preserves_meets():
    h = _cube_inclusion()
    rng = random.Random(99)
    for _ in range(500):
        f, g = sample_point(h.codomain, rng, 8, True), sample_point(h.codomain, rng, 8, True)
        assert functor_map(h, f & g, "contravariant") == (functor_map(h, f, "contravariant")
                                                          & functor_map(h, g, "contravariant"))


# 10 ----------------------------------------------------------------------

@pytest.mark.criterion(10, "step-function metric axioms and verified unboundedness witnesses")
def test_gamma_metric_axioms():
    host = MOmega()
    cost = momega_cost(host)
    rng = random.Random(10)
    for _ in range(200):
        f, g, h = (sample_step_function(host, rng) for _ in range(3))
        assert gamma_metric(f, f, cost) == 0
        assert gamma_metric(f, g, cost) == gamma_metric(g, f, cost)
        assert (gamma_metric(f, g, cost) == 0) == (f == g)
        assert gamma_metric(f, h, cost) <= gamma_metric(f, g, cost) + gamma_metric(g, h, cost)


@pytest.mark.criterion(10, "step-function metric axioms and verified unboundedness witnesses")
def test_gamma_witnesses_verify():
    host = MOmega()
    cost = momega_cost(host)
    r = StepFunction.constant(host, "x1")
    w = witness_unbounded_interval(r, F(1, 10), 10, cost)
    assert w.verify(cost)
    assert gamma_metric(w.p, r, cost) == w.distance_p < F(1, 10)
    assert gamma_metric(w.q, r, cost) == w.distance_q < F(1, 10)
    assert gamma_metric(w.s, r, cost) == w.distance_s >= 10
    z = StepFunction.constant(host, "0")
    j = witness_unbounded_join(z, F(1, 10), 5, cost)
    assert j.verify(cost)
    assert all(gamma_metric(p, z, cost) < F(1, 10) for p in j.pieces)
    assert gamma_metric(j.combined, z, cost) == j.distance >= 5


# 11 ----------------------------------------------------------------------

@pytest.mark.criterion(11, "cube retraction: idempotent, fixes members, isotone")
def test_retraction():
    system: ClosureSystem = presets.m3_points()
    rng = random.Random(11)

    def cube_point():
        return tuple(F(rng.randint(0, 8), 8) for _ in range(system.n))

    for _ in range(1000):
        f, extra = cube_point(), cube_point()
        g = tuple(map(max, f, extra))
        rf, rg = cube_retraction(system, f), cube_retraction(system, g)
        assert xcl_membership(system, rf)
        assert cube_retraction(system, rf) == rf
        assert all(a <= b for a, b in zip(rf, rg))
        if xcl_membership(system, f):
            assert rf == f


# 12 ----------------------------------------------------------------------

@pytest.mark.criterion(12, "pair-constrained complex of the gluing example: Hasse edges and closure")
def test_gluing_connectivity():
    l = presets.gluing()
    constraints = PairConstraintSet.from_names(l, [("x", "y")])
    ok, missing = delta_s_hasse_edges(constraints)
    assert ok and missing is None
    report = delta_s_closure_check(constraints, samples=1000, seed=12)
    assert report.ok, report.violations[:3]
    assert all(delta_s_membership(constraints, DeltaPoint.vertex(l, z)) for z in range(l.n))
