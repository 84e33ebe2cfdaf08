import math

import numpy as np
import pytest

from stepwise.density import stepwise_constant
from stepwise.errors import QuadratureFailure, UnsupportedForm
from stepwise.heisenberg_numeric import (
    TOLERANCES,
    GaussianTestFunction,
    QuadratureConfig,
    SchroedingerModel,
    central_phase_check,
    coefficient_norm_check,
    hermite_functions,
    inversion_check,
    inversion_setup,
    public,
)

# round-off floor for the refinement comparison
FLOOR = 1e-12


def ground_coefficient_abs(lam, a, b):
    """|<pi(exp(a x + b y)) h0, h0>| in closed form (Gaussian integral)."""
    return math.exp(-a * a / 4) * math.exp(-(math.pi * lam * b) ** 2)


def test_hermite_functions_orthonormal():
    t = np.linspace(-20, 20, 4001)
    h = hermite_functions(6, t)
    gram = h @ h.T * (t[1] - t[0])
    assert np.allclose(gram, np.eye(h.shape[0]), atol=1e-10)


@pytest.mark.parametrize("lam", [1.0, 2.5, -0.5])
@pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.7, -0.2), (-1.5, 0.4)])
def test_coefficient_matches_closed_form(lam, a, b):
    m = SchroedingerModel(lam, [1.0], [1.0])
    assert abs(m.coefficient(a, b)) == pytest.approx(ground_coefficient_abs(lam, a, b), abs=1e-10)


@pytest.mark.parametrize(
    "lam,u,v,predicted",
    [(1.0, [1.0], [1.0], 1.0), (4.0, [1.0], [1.0], 0.25), (1.0, [1.0], [0, 1.0], 1.0), (-2.5, [1, 1j], [0.5, 0, 2], 2 * 4.25 / 2.5)],
)
def test_coefficient_norm(lam, u, v, predicted):
    r = coefficient_norm_check(SchroedingerModel(lam, u, v))
    assert r["predicted"] == pytest.approx(predicted)
    assert r["rel_err"] < 1e-6
    assert abs(r["refined"] - r["numeric"]) / r["predicted"] <= max(10 * r["rel_err"], FLOOR)


def test_coefficient_norm_two_pairs():
    m = SchroedingerModel(0.5, [[1.0], [0, 1.0]], [[1.0], [1.0]], d=2)
    r = coefficient_norm_check(m)
    assert r["predicted"] == pytest.approx(4.0)
    assert r["rel_err"] < 1e-6


def test_closed_form_norm_integral():
    # int |f|^2 = sqrt(2 pi) * 1/(sqrt(2 pi) |lam|) for the ground state
    lam = 3.0
    a = np.linspace(-30, 30, 6001)
    b = np.linspace(-3, 3, 6001)
    fa = np.exp(-a * a / 2).sum() * (a[1] - a[0])
    fb = np.exp(-2 * (math.pi * lam * b) ** 2).sum() * (b[1] - b[0])
    assert fa * fb == pytest.approx(1 / lam, rel=1e-9)


def test_coarse_grid_raises():
    with pytest.raises(QuadratureFailure):
        coefficient_norm_check(SchroedingerModel(1.0, [1.0], [1.0]), QuadratureConfig(n=15, sigmas=8, tol=1e-9))
    with pytest.raises(QuadratureFailure):
        inversion_check("h3", config=QuadratureConfig(n=9, sigmas=8, tol=1e-9))


def test_config_bounds():
    with pytest.raises(ValueError):
        QuadratureConfig(sigmas=5)
    with pytest.raises(ValueError):
        QuadratureConfig(n=3)
    with pytest.raises(ValueError):
        SchroedingerModel(0.0, [1.0], [1.0])


@pytest.mark.parametrize("case", ["h3", "a3"])
def test_inversion_at_identity(case):
    r = inversion_check(case)
    assert r["lhs"] == pytest.approx(1.0)
    assert r["rel_err"] < TOLERANCES[case]
    assert abs(r["rhs_imag"]) < TOLERANCES[case]
    assert abs(r["refined_rhs"] - r["rhs"]) / abs(r["lhs"]) <= max(10 * r["rel_err"], FLOOR)


def test_constant_comes_from_density():
    for case in ("h3", "a3"):
        setup = inversion_setup(case)
        assert setup.c == stepwise_constant(setup.decomp)
    assert inversion_setup("h3").c == 2 and inversion_setup("a3").c == 8


@pytest.mark.parametrize("case", ["h3", "a3"])
def test_wrong_constant_fails(case):
    r = inversion_check(case, c_scale=2.0)
    assert r["rel_err"] >= 10 * TOLERANCES[case]


def test_h3_general_translation():
    f = GaussianTestFunction((1.0, 0.8, 1.3))
    r = inversion_check("h3", f, x=[0.3, -0.4, 0.2])
    assert not r["central"]
    assert r["rel_err"] < TOLERANCES["h3"]


def test_a3_central_translation():
    setup = inversion_setup("a3")
    x = np.zeros(setup.dim)
    # only the highest root spans the center; the other quasi-center axis does not
    x[setup.s_axes[1]] = -0.2
    assert not setup.group.is_central(np.eye(6)[setup.s_axes[0]])
    r = inversion_check("a3", x=x)
    assert r["central"] and r["rel_err"] < TOLERANCES["a3"]


def test_a3_noncentral_unsupported():
    x = np.zeros(6)
    x[0] = 0.5
    with pytest.raises(UnsupportedForm):
        inversion_check("a3", x=x)


def test_central_translation_is_a_phase():
    r = central_phase_check(0.37)
    assert r["max_phase_dev"] < 1e-8
    assert r["modulus_dev"] < 1e-8
    assert r["rel_err"] < TOLERANCES["h3"]


def test_public_strips_arrays():
    out = public(inversion_check("h3"))
    assert not any(k.startswith("_") for k in out)
    assert {"case", "lhs", "rhs", "rel_err", "grid", "runtime_ms"} <= set(out)
