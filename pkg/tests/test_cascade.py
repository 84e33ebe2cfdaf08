import json

import pytest

from stepwise.cascade import build_cascade, heisenberg_check, sigma_r
from stepwise.errors import LayerMismatch, UnsupportedForm
from stepwise.rootsys import build_system

from oracles import longest_strongly_orthogonal

ALL = [("A", n) for n in range(1, 9)] + [("B", n) for n in range(2, 9)] + [
    ("C", n) for n in range(3, 9)
] + [("D", n) for n in range(4, 9)] + [("BC", n) for n in range(2, 7)]
UP_TO_5 = [x for x in ALL if x[1] <= 5]


def cascade(family, rank):
    return build_cascade(build_system((family, rank)))


@pytest.mark.parametrize("family,rank", ALL)
def test_partition_of_positive_roots(family, rank):
    c = cascade(family, rank)
    s = c.system
    seen = list(c.betas) + [a for layer in c.layer_sets for a in layer]
    assert len(seen) == len(set(seen))
    assert set(seen) == set(s.positive)


@pytest.mark.parametrize("family,rank", ALL)
def test_strong_orthogonality_and_nonmultipliable(family, rank):
    c = cascade(family, rank)
    s = c.system
    for i, a in enumerate(c.betas):
        assert a in s.nonmultipliable
        for b in c.betas[i + 1:]:
            assert s.pairing(a, b) == 0
            assert s.sum_root(a, b) is None and s.diff_root(a, b) is None


@pytest.mark.parametrize("family,rank", ALL)
def test_sigma_is_involution_summing_to_beta(family, rank):
    c = cascade(family, rank)
    s = c.system
    for r, (beta, layer) in enumerate(zip(c.betas, c.layer_sets), start=1):
        for a in layer:
            b = sigma_r(c, r, a)
            assert b in layer
            assert sigma_r(c, r, b) == a
            assert s.sum_root(a, b) == beta
            # a + a' is a root exactly for the partner a' = sigma(a)
            for other in layer:
                if other != b and s.sum_root(a, other) is not None:
                    assert s.family.value == "BC" or False


@pytest.mark.parametrize("family,rank", UP_TO_5)
def test_maximality_against_brute_force(family, rank):
    c = cascade(family, rank)
    s = c.system
    pos = [r.ambient for r in s.positive if r in s.nonmultipliable]
    amb = {r.ambient for r in s.roots}
    assert longest_strongly_orthogonal(pos, lambda v: v in amb) == c.m


@pytest.mark.parametrize("family,rank", [x for x in ALL if x[0] in ("A", "C")])
def test_monotone_coefficients_a_c(family, rank):
    c = cascade(family, rank)
    for prev, nxt in zip(c.betas, c.betas[1:]):
        assert all(x >= y for x, y in zip(prev.simple_coords, nxt.simple_coords))


def test_monotone_coefficients_fail_for_b_and_d():
    b3 = cascade("B", 3)
    assert [x.simple_coords for x in b3.betas] == [(2, 2, 1), (1, 0, 0), (0, 0, 1)]
    d4 = cascade("D", 4)
    assert d4.betas[1].simple_coords == (1, 0, 0, 0)
    assert d4.betas[2].simple_coords == (0, 1, 0, 0)


def test_examples():
    a2 = cascade("A", 2)
    assert [b.simple_coords for b in a2.betas] == [(1, 1)]
    assert {a.simple_coords for a in a2.layer_sets[0]} == {(1, 0), (0, 1)}
    a3 = cascade("A", 3)
    assert [b.simple_coords for b in a3.betas] == [(1, 1, 1), (0, 1, 0)]
    assert {a.simple_coords for a in a3.layer_sets[0]} == {(1, 0, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)}
    assert a3.layer_sets[1] == ()
    a5 = cascade("A", 5)
    assert [b.simple_coords for b in a5.betas] == [(1, 1, 1, 1, 1), (0, 1, 1, 1, 0), (0, 0, 1, 0, 0)]


def test_sigma_examples():
    a2 = cascade("A", 2)
    s = a2.system
    assert sigma_r(a2, 1, s.root((1, 0))) == s.root((0, 1))
    a3 = cascade("A", 3)
    t = a3.system
    assert sigma_r(a3, 1, t.root((1, 0, 0))) == t.root((0, 1, 1))
    with pytest.raises(LayerMismatch):
        sigma_r(a3, 2, t.root((1, 0, 0)))
    with pytest.raises(LayerMismatch):
        sigma_r(a3, 1, t.root((1, 1, 1)))


@pytest.mark.parametrize("family,rank", [x for x in ALL if x[0] != "BC"])
def test_heisenberg_layers_split(family, rank):
    c = cascade(family, rank)
    assert all(heisenberg_check(c, r) for r in range(1, c.m + 1))


def test_heisenberg_requires_split():
    s = build_system(("BC", 2))
    mult = {r.simple_coords: 2 for r in s.positive}
    c = build_cascade(build_system(("BC", 2), mult))
    with pytest.raises(UnsupportedForm):
        heisenberg_check(c, 1)


def test_json_shape():
    data = json.loads(cascade("A", 3).to_json())
    assert data["betas"] == [[1, 1, 1], [0, 1, 0]]
    assert len(data["layers"]) == 2


def test_dominance_metadata_is_consistent():
    c = cascade("A", 5)
    assert all(s > r for s, r in c.dominance)
