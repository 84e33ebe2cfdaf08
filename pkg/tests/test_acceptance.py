"""Acceptance gate: one test per criterion, at the stated tolerances.

The terminal summary (see conftest.py) prints one PASS/FAIL line per criterion.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from stepwise.cascade import build_cascade
from stepwise.chevalley import bracket, build_constants
from stepwise.density import easy_tilde_check, layer_matrix, plancherel_data, stepwise_constant
from stepwise.heisenberg_numeric import (
    TOLERANCES,
    SchroedingerModel,
    coefficient_norm_check,
    inversion_check,
)
from stepwise.limits import (
    chain_from_dict,
    check_family,
    density_at,
    inversion_constant,
    renormalization_ratio,
    restrict_gamma,
)
from stepwise.parabolic import decompose, invariance_class, verify_structure
from stepwise.rootsys import build_system

from oracles import det_fraction

SWEEP = (
    [("A", n) for n in range(1, 7)]
    + [("B", n) for n in range(2, 7)]
    + [("C", n) for n in range(3, 7)]
    + [("D", n) for n in range(4, 7)]
)


def all_subsets(rank):
    for k in range(rank + 1):
        yield from itertools.combinations(range(1, rank + 1), k)


def sweep_contexts():
    for fam, rank in SWEEP:
        s = build_system((fam, rank))
        c = build_cascade(s)
        yield s, c, build_constants(s)


def test_criterion_1_structural_lemma_sweep():
    start = time.perf_counter()
    failures = []
    count = 0
    for fam, rank in SWEEP:
        s = build_system((fam, rank))
        c = build_cascade(s)
        for phi in all_subsets(rank):
            rep = verify_structure(s, c, phi)
            count += 1
            failures += [(fam, rank, phi, f.lemma) for f in rep.failures]
    elapsed = time.perf_counter() - start
    assert count == sum(2 ** r for _, r in SWEEP)
    assert failures == []
    assert elapsed < 60, f"sweep took {elapsed:.1f}s"


def test_criterion_2_weight_and_degree_ledger():
    for s, c, t in sweep_contexts():
        outside = lambda phi: [i for i in range(1, s.rank + 1) if i not in phi]  # noqa: E731
        for phi in all_subsets(s.rank):
            d = decompose(s, c, phi)
            data = plancherel_data(d, t, verify=False)
            w = data.ledger
            assert w.p_weight + w.det_weight == w.delta_weight
            # trace of ad on the nilradical, recomputed from simple coordinates
            trace = [
                sum(s.multiplicity(a) * a.simple_coords[i - 1] for a in d.phi_nil) for i in outside(phi)
            ]
            assert w.delta_weight.to_list() == trace
            half = Fraction(d.dim_n + d.dim_s, 2)
            assert data.density.degree() + data.det_sphi.degree() == half
            assert data.density.degree() == sum(g.d for g in d.groups)


def test_criterion_3_worked_example():
    s = build_system(("A", 5))
    c = build_cascade(s)
    assert [b.simple_coords for b in c.betas] == [(1, 1, 1, 1, 1), (0, 1, 1, 1, 0), (0, 0, 1, 0, 0)]
    d = decompose(s, c, (1, 4, 5))
    assert [g.I for g in d.groups] == [(1, 2), (3,)]
    assert d.groups[1].l == (s.root((0, 0, 1, 0, 0)),)
    (st1, _), (st2, cls) = invariance_class(s, c, d)[0]
    assert st1 == "invariant" and st2 == "not_invariant"
    assert sorted(r.simple_coords for r in cls) == [(0, 0, 1, 0, 0), (0, 0, 1, 1, 0), (0, 0, 1, 1, 1)]


def test_criterion_4_pfaffian_correctness():
    rng = random.Random(11)
    for s, c, t in sweep_contexts():
        for phi in all_subsets(s.rank):
            d = decompose(s, c, phi)
            # verify=True squares every Pfaffian against a symbolic determinant
            data = plancherel_data(d, t, verify=True)
            for g, gp in zip(d.groups, data.per_group):
                assert not gp.pf.is_zero()
                m = layer_matrix(d, t, g.j)
                point = {v: Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5)) for v in gp.pf.variables}
                num = [[e.evaluate({k: point[k] for k in e.variables}) for e in row] for row in m.entries]
                assert gp.pf.evaluate(point) ** 2 == det_fraction(num)
            for (status, _), g in zip(invariance_class(s, c, d)[0], d.groups):
                if status != "invariant":
                    assert easy_tilde_check(d, t, g.j, verify=False)


@pytest.mark.parametrize("family,rank", [(f, r) for f, r in SWEEP if r <= 4])
def test_criterion_5_chevalley_jacobi(family, rank):
    t = build_constants(build_system((family, rank)))
    pos = t.system.positive
    for x, y, z in itertools.product(pos, repeat=3):
        acc = {}
        for a, b, cc in ((x, y, z), (y, z, x), (z, x, y)):
            inner = bracket(t, (a, 1), (b, 1))
            if inner:
                for k, v in bracket(t, inner, (cc, 1)).items():
                    acc[k] = acc.get(k, 0) + v
        assert all(v == 0 for v in acc.values()), (x, y, z)


def test_criterion_6_coefficient_norm():
    start = time.perf_counter()
    configs = [
        (1.0, [1.0], [1.0]),
        (4.0, [1.0], [1.0]),
        (1.0, [1.0], [0.0, 1.0]),
        (-2.5, [0.3, 1.0], [1.0, 0.0, -0.5]),
        (0.25, [1.0], [1.0]),
    ]
    for lam, u, v in configs:
        r = coefficient_norm_check(SchroedingerModel(lam, u, v))
        assert r["rel_err"] < 1e-6, (lam, r)
    assert time.perf_counter() - start < 10


def test_criterion_7_fourier_inversion():
    for case in ("h3", "a3"):
        tol = TOLERANCES[case]
        assert inversion_check(case)["rel_err"] < tol
        assert inversion_check(case, c_scale=2.0)["rel_err"] >= 10 * tol
    assert TOLERANCES == {"h3": 1e-4, "a3": 1e-3}


def test_criterion_8_direct_limits():
    ranks = [3, 5, 7]
    chain = chain_from_dict({"family": "A", "ranks": ranks, "phi": {str(n): [1] for n in ranks},
                             "phi_labels": "centered"})
    rep = check_family(chain)
    assert rep.admissible["N"] and rep.admissible["U"] and rep.admissible["E"]
    assert rep.cascade_nested and rep.index_groups_nested and rep.passed
    rng = random.Random(2024)
    names = sorted(density_at(chain, 7).variables)
    for _ in range(5):
        gamma = {v: Fraction(rng.choice([-1, 1]) * rng.randint(1, 40), rng.randint(1, 9)) for v in names}
        r35 = renormalization_ratio(chain, 3, 5, restrict_gamma(chain, 7, 5, gamma))
        assert r35 * renormalization_ratio(chain, 5, 7, gamma) == renormalization_ratio(chain, 3, 7, gamma)
    for n in ranks:
        assert inversion_constant(chain, n) == stepwise_constant(chain.decomposition(n))
