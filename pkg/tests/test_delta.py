import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import oracles
from ordercomplex import presets
from ordercomplex.delta import (ChainForm, DeltaPoint, breadth_family, chain_form, contract_homotopy,
                                delta_join, delta_membership, delta_meet, extract_chain, from_chain_form,
                                generated_sublattice, is_meet_irredundant, level_generator, sample_point, vertices)
from ordercomplex.errors import (HostMismatch, InvalidChainForm, NotComparable, NotInDelta, NotMeetIrredundant)
from ordercomplex.poset import build_poset, find_isomorphism, longest_chain_length

M3 = presets.m3()
HALF, QUARTER = F(1, 2), F(1, 4)


def pt(l, **values):
    return DeltaPoint.from_names(l, {("0" if k == "z" else "1" if k == "o" else k): v for k, v in values.items()})


def down(l, name):
    return DeltaPoint.vertex(l, l.index(name))


# membership

def test_membership_examples():
    assert delta_membership(M3, down(M3, "a").values)
    bad = delta_membership(M3, (1, 1, 1, 0, 0))
    assert not bad and bad.threshold == 1 and bad.level_set == frozenset({0, 1, 2})
    low = delta_membership(M3, (HALF, 0, 0, 0, 0))
    assert not low and low.threshold == 1 and low.level_set == frozenset()


def test_constructor_rejects_non_members():
    with pytest.raises(NotInDelta):
        DeltaPoint(M3, (1, 1, 1, 0, 0))
    with pytest.raises(ValueError):
        DeltaPoint(M3, (1, 2, 0, 0, 0))


@pytest.mark.parametrize("l", oracles.all_lattices(4), ids=lambda l: f"size{l.n}")
def test_membership_matches_oracle_exhaustively_on_a_grid(l):
    import itertools

    grid = (0, F(1, 3), F(2, 3), 1)
    for values in itertools.product(grid, repeat=l.n):
        assert bool(delta_membership(l, values)) == oracles.member(l, values)


# chain form

def test_chain_form_examples():
    f = pt(M3, z=1, a=1, b=HALF, c=HALF, o=HALF)
    assert chain_form(f).named_terms() == [("a", HALF), ("1", HALF)]
    assert chain_form(down(M3, "b")).named_terms() == [("b", 1)]


def test_chain_form_validation():
    a, b, one = (M3.index(x) for x in "ab1")
    for terms in (((a, HALF), (b, HALF)), ((a, 0), (one, 1)), ((a, HALF), (one, QUARTER)), ()):
        with pytest.raises(InvalidChainForm):
            ChainForm(M3, terms)


@pytest.mark.parametrize("name", ["M3", "N5", "boolean3", "gluing"])
def test_chain_form_round_trip(name):
    l = presets.lookup(name)
    rng = random.Random(1)
    for _ in range(1000):
        f = sample_point(l, rng, 12, faces=True)
        cf = chain_form(f)
        assert from_chain_form(cf) == f
        assert chain_form(from_chain_form(cf)) == cf


# operations

def test_meet_and_join_examples():
    assert down(M3, "a") & down(M3, "b") == down(M3, "0")
    assert down(M3, "a") | down(M3, "b") == down(M3, "1")
    f = pt(M3, z=1, a=1, b=HALF, c=HALF, o=HALF)
    g = pt(M3, z=1, a=HALF, b=1, c=HALF, o=HALF)
    assert f & g == pt(M3, z=1, a=HALF, b=HALF, c=HALF, o=HALF)
    assert f | g == DeltaPoint(M3, [1] * 5)
    top = DeltaPoint(M3, [1] * 5)
    assert f & top == f and f | f == f


def test_host_mismatch():
    with pytest.raises(HostMismatch):
        delta_meet(down(M3, "a"), down(presets.n5(), "a"))


def test_meet_on_meet_semilattice_without_top():
    p = build_poset(["0", "a", "b"], [("0", "a"), ("0", "b")])
    f = DeltaPoint(p, (1, 1, 0))
    g = DeltaPoint(p, (1, 0, HALF))
    assert (f & g).values == (1, 0, 0)


def test_level_generator_examples():
    f = pt(M3, z=1, a=1, b=HALF, c=HALF, o=HALF)
    assert M3.names[level_generator(f, F(3, 4))] == "a"
    assert M3.names[level_generator(f, HALF)] == "1"
    for x in range(M3.n):
        for t in (F(1, 7), HALF, 1):
            assert level_generator(DeltaPoint.vertex(M3, x), t) == x
    with pytest.raises(ValueError):
        level_generator(f, 0)


def test_contract_homotopy_examples():
    f = down(M3, "a")
    one = M3.index("1")
    assert contract_homotopy(f, one, 0) == f
    assert contract_homotopy(f, one, 1) == down(M3, "1")
    assert contract_homotopy(f, one, HALF) == pt(M3, z=1, a=1, b=HALF, c=HALF, o=HALF)
    with pytest.raises(NotComparable):
        contract_homotopy(f, M3.index("b"), HALF)


def test_sample_point_contract():
    single = presets.chain(1)
    assert all(sample_point(single, s).values == (1,) for s in range(5))
    f = sample_point(M3, 1, 8)
    assert delta_membership(M3, f.values)
    assert sample_point(M3, 42, 8) == sample_point(M3, 42, 8)
    with pytest.raises(ValueError):
        sample_point(M3, 0, 0)


def test_generated_sublattice_examples():
    l, pts = generated_sublattice([down(M3, x) for x in "abc"])
    assert find_isomorphism(l, M3) is not None and len(pts) == 5
    l, _ = generated_sublattice([down(M3, "a")])
    assert l.n == 1
    l, _ = generated_sublattice([down(M3, "a"), down(M3, "1")])
    assert l.n == 2 and l.leq(0, 1)


@pytest.mark.parametrize("name", ["M3", "N5", "boolean3", "gluing", "pentagon_6"])
def test_vertices_generate_a_copy_of_the_lattice(name):
    l = presets.lookup(name)
    assert find_isomorphism(generated_sublattice(vertices(l))[0], l) is not None


# breadth

def test_breadth_family_examples():
    chain = [M3.index(x) for x in "0a1"]
    f1, f2 = breadth_family(M3, chain, [HALF, QUARTER])
    assert f1 == pt(M3, z=1, a=HALF, b=HALF, c=HALF, o=HALF)
    assert f2 == pt(M3, z=1, a=1, b=QUARTER, c=QUARTER, o=QUARTER)
    assert is_meet_irredundant([f1, f2])
    assert extract_chain([f1, f2]) == tuple(chain)

    two = presets.chain(2)
    (only,) = breadth_family(two, [0, 1], [HALF])
    assert only != DeltaPoint(two, [1, 1]) and extract_chain([only]) == (0, 1)

    cube = presets.boolean(3)
    chain = [cube.index(x) for x in ("000", "100", "110", "111")]
    family = breadth_family(cube, chain, [F(3, 4), HALF, QUARTER])
    assert is_meet_irredundant(family) and len(extract_chain(family)) == 4


def test_breadth_family_validation():
    chain = [M3.index(x) for x in "0a1"]
    for coefficients in ([QUARTER, HALF], [1, HALF], [HALF], [HALF, -QUARTER]):
        with pytest.raises(InvalidChainForm):
            breadth_family(M3, chain, coefficients)
    with pytest.raises(InvalidChainForm):
        breadth_family(M3, [M3.index("a"), M3.index("1")], [HALF])


def test_redundant_family_is_rejected():
    f, g = sample_point(M3, 3), sample_point(M3, 4)
    with pytest.raises(NotMeetIrredundant):
        extract_chain([f, f & g, g])


@pytest.mark.parametrize("name", ["M3", "N5", "boolean3", "chain4", "gluing", "pentagon_7"])
def test_every_maximal_chain_gives_a_full_family(name):
    l = presets.lookup(name)
    for chain in l.maximal_chains:
        n = len(chain) - 1
        family = breadth_family(l, chain, [F(n - i, n + 1) for i in range(n)])
        assert is_meet_irredundant(family)
        assert len(extract_chain(family)) == len(chain)
    assert max(len(c) for c in l.maximal_chains) - 1 == longest_chain_length(l)


# properties

LATTICES = [presets.lookup(n) for n in ("M3", "N5", "boolean3", "gluing")] + oracles.all_lattices(5)
point_args = st.tuples(st.sampled_from(LATTICES), st.integers(0, 2**32), st.integers(0, 2**32), st.integers(0, 2**32))


@given(point_args)
def test_operations_stay_in_the_complex(args):
    l, *seeds = args
    f, g, h = (sample_point(l, s, 8, faces=True) for s in seeds)
    for out in (f & g, f | g):
        assert delta_membership(l, out.values)
    assert f & g <= f <= f | g
    assert (f | g) & h == h & (g | f)
    assert (f & g) | f == f and (f | g) & f == f
    assert (f | g) | h == f | (g | h)


@given(point_args)
def test_join_is_least_upper_bound(args):
    l, *seeds = args
    f, g, h = (sample_point(l, s, 6, faces=True) for s in seeds)
    j = f | g
    if f <= h and g <= h:
        assert j <= h
    assert j == (f | g | (f & g))


@given(point_args)
def test_join_turns_into_meet_of_values(args):
    l, seed, *_ = args
    f = sample_point(l, seed, 8, faces=True)
    assert f.values[l.bottom] == 1
    for x in range(l.n):
        for y in range(l.n):
            assert f.values[l.join(x, y)] == min(f.values[x], f.values[y])


@given(point_args)
def test_level_generators_are_homomorphisms_and_separate(args):
    l, s1, s2, _ = args
    f, g = sample_point(l, s1, 8, True), sample_point(l, s2, 8, True)
    grid = sorted({v for v in f.values + g.values if v > 0} | {F(1)})
    for t in grid:
        assert level_generator(f & g, t) == l.meet(level_generator(f, t), level_generator(g, t))
        assert level_generator(f | g, t) == l.join(level_generator(f, t), level_generator(g, t))
    if f != g:
        assert any(level_generator(f, t) != level_generator(g, t) for t in grid)
