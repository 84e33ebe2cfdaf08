from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stepwise.errors import IncompleteMultiplicity, InvalidRank, NotARoot
from stepwise.rootsys import Family, RestrictedRootSystem, RootSystemType, build_system, is_root, reflect, sum_root

from oracles import ambient_roots, classical_positive_count

SMALL = [("A", n) for n in range(1, 7)] + [("B", n) for n in range(2, 7)] + [
    ("C", n) for n in range(3, 7)
] + [("D", n) for n in range(4, 7)] + [("BC", n) for n in range(2, 6)]


@pytest.mark.parametrize("family,rank", SMALL)
def test_positive_count_matches_classical_formula(systems, family, rank):
    assert len(systems(family, rank).positive) == classical_positive_count(family, rank)


@pytest.mark.parametrize("family,rank", SMALL)
def test_roots_match_ambient_enumeration(systems, family, rank):
    s = systems(family, rank)
    want = ambient_roots(family, rank)
    got = {tuple(int(x) for x in r.ambient) for r in s.roots}
    assert got == want


@pytest.mark.parametrize("family,rank", SMALL)
def test_ambient_is_combination_of_simple(systems, family, rank):
    s = systems(family, rank)
    for r in s.roots:
        acc = [Fraction(0)] * s.ambient_dim
        for c, p in zip(r.simple_coords, s.simple):
            acc = [a + c * x for a, x in zip(acc, p.ambient)]
        assert tuple(acc) == r.ambient
        assert all(c >= 0 for c in r.simple_coords) or all(c <= 0 for c in r.simple_coords)


@pytest.mark.parametrize("family,rank", SMALL)
def test_positive_negative_partition(systems, family, rank):
    s = systems(family, rank)
    pos = set(s.positive)
    neg = {-r for r in s.positive}
    assert not pos & neg
    assert pos | neg == set(s.roots)


@pytest.mark.parametrize("family,rank", SMALL)
def test_cartan_integers_and_reflections(systems, family, rank):
    s = systems(family, rank)
    for a in s.roots:
        for b in s.roots:
            k = s.cartan_integer(a, b)
            assert k.denominator == 1
            assert s.reflect(b, a) in s.roots


@pytest.mark.parametrize("family,rank", [x for x in SMALL if x[0] != "BC"])
def test_root_strings_unbroken(systems, family, rank):
    s = systems(family, rank)
    for a in s.roots:
        for b in s.roots:
            if a == b or a == -b:
                continue
            ks = [k for k in range(-4, 5) if s.is_root(x + k * y for x, y in zip(a.simple_coords, b.simple_coords))]
            assert ks == list(range(min(ks), max(ks) + 1))


def test_bc_nonmultipliable(systems):
    s = systems("BC", 2)
    assert len(s.positive) == 6
    short = {r for r in s.positive if s.pairing(r, r) == 1}
    assert len(short) == 2
    assert not short & s.nonmultipliable
    for fam, n in [("A", 3), ("B", 3), ("C", 3), ("D", 4)]:
        t = systems(fam, n)
        assert t.nonmultipliable == frozenset(t.roots)


def test_c3_long_roots(systems):
    s = systems("C", 3)
    long_roots = sorted(tuple(int(x) for x in r.ambient) for r in s.positive if s.pairing(r, r) == 4)
    assert long_roots == [(0, 0, 2), (0, 2, 0), (2, 0, 0)]


def test_a2_example(systems):
    s = systems("A", 2)
    assert [r.simple_coords for r in s.positive] == [(0, 1), (1, 0), (1, 1)]
    assert all(s.multiplicity(r) == 1 for r in s.positive)


def test_reflection_examples(systems):
    s = systems("A", 2)
    p1, p2 = s.simple
    assert reflect(s, s.root((1, 1)), p1) == -p2
    b = s.root((1, 1))
    assert reflect(s, b, b) == -b
    t = systems("A", 3)
    assert reflect(t, t.root((0, 1, 0)), t.root((1, 1, 0))) == t.root((1, 0, 0))


def test_sum_root_examples(systems):
    s = systems("A", 2)
    p1, p2 = s.simple
    assert sum_root(s, p1, p2) == s.root((1, 1))
    assert sum_root(s, p1, p1) is None
    assert is_root(s, (1, 1)) and not is_root(s, (2, 0))
    b = systems("B", 2)
    # psi_1 = e_1 and psi_2 = e_2 - e_1: (e_2 - e_1) + e_1 = e_2
    assert sum_root(b, b.root((0, 1)), b.root((1, 0))) == b.root((1, 1))
    assert b.root((1, 1)).ambient == (0, 1)


def test_reflect_rejects_non_root(systems):
    s = systems("A", 2)
    fake = type(s.simple[0])((2, 0), (Fraction(2), Fraction(-2), Fraction(0)))
    with pytest.raises(NotARoot):
        s.reflect(s.simple[0], fake)
    with pytest.raises(NotARoot):
        s.root((2, 0))


@pytest.mark.parametrize("family,rank", [("A", 0), ("B", 1), ("C", 2), ("D", 3), ("BC", 1)])
def test_rank_bounds(family, rank):
    with pytest.raises(InvalidRank):
        RootSystemType(Family(family), rank)


def test_user_multiplicities():
    base = build_system(("BC", 2))
    mult = {r.simple_coords: 2 for r in base.positive}
    s = build_system(("BC", 2), mult)
    assert not s.is_split and s.multiplicity(s.positive[0]) == 2
    del mult[base.positive[0].simple_coords]
    with pytest.raises(IncompleteMultiplicity):
        build_system(("BC", 2), mult)


def test_json_roundtrip():
    s = build_system(("C", 3), {r.simple_coords: 1 + r.height % 2 for r in build_system(("C", 3)).positive})
    t = RestrictedRootSystem.from_dict(s.to_dict())
    assert t.to_json() == s.to_json()


@given(st.sampled_from(SMALL), st.data())
def test_reflection_is_involution(family_rank, data):
    s = build_system(family_rank)
    a = data.draw(st.sampled_from(s.roots))
    b = data.draw(st.sampled_from(s.roots))
    assert s.reflect(b, s.reflect(b, a)) == a
    assert s.pairing(s.reflect(b, a), s.reflect(b, a)) == s.pairing(a, a)
