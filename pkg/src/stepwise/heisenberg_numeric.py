"""Quadrature checks of the coefficient-norm identity and Fourier inversion.

Conventions:
- Fourier transform: F^(xi) = int F(X) exp(-2 pi i <xi, X>) dX.
- Lebesgue measures come from Chevalley coordinates X = sum_a X_a x_a on the
  Lie algebra (and the dual coordinates on its dual); the group is
  parametrized by exp.
- Schroedinger model of the three-dimensional Heisenberg group with
  [x_1, x_2] = x_3 and central parameter lam:
      pi(exp(a x_1 + b x_2 + c x_3)) phi(t) = exp(2 pi i lam (c + b t + a b / 2)) phi(t + a).

All integrals are tensor-product trapezoid sums on truncated grids. Each
check is repeated with every step halved; if the two answers disagree by more
than the tolerance, QuadratureFailure is raised.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cascade import build_cascade
from .chevalley import StructureTable, build_constants
from .density import plancherel_data, variable_name
from .errors import QuadratureFailure, UnsupportedForm
from .parabolic import PhiDecomposition, decompose
from .rootsys import Family, Root, build_system

# -- Hermite functions ------------------------------------------------------------


def hermite_functions(n_max: int, t: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_{n_max} on L^2(R), rows indexed by order."""
    t = np.asarray(t, dtype=float)
    out = np.zeros((n_max + 1,) + t.shape)
    out[0] = math.pi ** -0.25 * np.exp(-t * t / 2)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * t * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * t * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_vector(coeffs: Sequence[complex], t: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.size == 0:
        return np.zeros_like(np.asarray(t, dtype=float), dtype=complex)
    return np.tensordot(coeffs, hermite_functions(len(coeffs) - 1, t), axes=1)


# -- configuration ----------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    """``n``: points per axis; ``sigmas``: half-width of every truncated axis in
    standard deviations of the widest Gaussian factor it carries."""

    n: int = 161
    sigmas: float = 10.0
    tol: float = 1e-6
    refine: bool = True

    def __post_init__(self):
        if self.n < 9:
            raise ValueError("at least 9 grid points per axis")
        if self.sigmas < 8:
            raise ValueError("grid extents must cover at least 8 standard deviations")

    def refined(self) -> QuadratureConfig:
        return QuadratureConfig(2 * self.n - 1, self.sigmas, self.tol, False)


def _trapezoid(lo: float, hi: float, n: int):
    x = np.linspace(lo, hi, n)
    w = np.full(n, (hi - lo) / (n - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def _midpoints(lo: float, hi: float, n: int):
    h = (hi - lo) / n
    x = lo + h * (np.arange(n) + 0.5)
    return x, np.full(n, h)


def _agree(a: complex, b: complex, tol: float, what: str):
    scale = max(abs(a), abs(b), 1e-300)
    if abs(a - b) / scale > tol:
        raise QuadratureFailure(f"{what}: refinement changed the result from {a} to {b}")


# -- coefficient norms -------------------------------------------------------------------


@dataclass(frozen=True)
class SchroedingerModel:
    """``d`` copies of the Heisenberg pair with one central parameter ``lam``.

    ``u`` and ``v`` are Hermite coefficient lists, one per pair (product
    vectors); for d = 1 a single flat list is accepted.
    """

    lam: float
    u: tuple
    v: tuple
    d: int = 1

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("central parameter must be nonzero")
        for name in ("u", "v"):
            val = getattr(self, name)
            if val and not isinstance(val[0], (list, tuple, np.ndarray)):
                val = (tuple(val),)
            val = tuple(tuple(complex(c) for c in part) for part in val)
            if len(val) != self.d:
                raise ValueError(f"{name} needs {self.d} coefficient lists")
            object.__setattr__(self, name, val)

    def norm2(self, which: str) -> float:
        return float(np.prod([sum(abs(c) ** 2 for c in part) for part in getattr(self, which)]))

    def pfaffian_abs(self) -> float:
        return abs(self.lam) ** self.d

    def predicted(self) -> float:
        return self.norm2("u") * self.norm2("v") / self.pfaffian_abs()

    def coefficient(self, a, b, pair: int = 0):
        """f(a, b) = <pi(exp(a x_1 + b x_2)) v, u> for one pair, by quadrature in t."""
        u, v = self.u[pair], self.v[pair]
        L = _hermite_extent(max(len(u), len(v)), 10.0) + abs(float(np.max(np.abs(a))))
        t, w = _trapezoid(-L, L, 801)
        a = np.asarray(a, dtype=float)[..., None]
        b = np.asarray(b, dtype=float)[..., None]
        integrand = (
            np.conj(hermite_vector(u, t))
            * hermite_vector(v, t + a)
            * np.exp(2j * math.pi * self.lam * (b * t + a * b / 2))
        )
        return integrand @ w


def _hermite_extent(order: int, sigmas: float) -> float:
    # h_k is negligible beyond its turning point sqrt(2k+1) plus a Gaussian tail
    return math.sqrt(2 * max(order - 1, 0) + 1) + sigmas / math.sqrt(2) * 1.2


def _pair_norm(lam: float, u, v, cfg: QuadratureConfig) -> float:
    """int |f(a, b)|^2 da db for one pair.

    f(a, b) = exp(pi i lam a b) int conj(u(t)) v(t + a) exp(2 pi i lam b t) dt.
    """
    order = max(len(u), len(v))
    L = _hermite_extent(order, cfg.sigmas)
    # frequency content of conj(u(t)) v(t+a): Hermite functions are their own
    # Fourier transforms up to a 2 pi rescaling
    omega = 2 * L / (2 * math.pi)
    B = omega / abs(lam)
    n = cfg.n
    t, wt = _trapezoid(-L, L, n)
    a, wa = _trapezoid(-2 * L, 2 * L, n)
    b, wb = _trapezoid(-B, B, n)
    U = np.conj(hermite_vector(u, t))
    V = hermite_vector(v, t[None, :] + a[:, None])  # (a, t)
    G = V * U[None, :] * wt[None, :]
    E = np.exp(2j * math.pi * lam * np.outer(t, b))  # (t, b)
    F = G @ E  # (a, b), phase exp(pi i lam a b) has modulus one
    return float(np.real(np.sum(np.abs(F) ** 2 * wa[:, None] * wb[None, :])))


def coefficient_norm_check(model: SchroedingerModel, config: QuadratureConfig | None = None) -> dict:
    """||f_{u,v}||^2 over N/Z against ||u||^2 ||v||^2 / |Pf(lam)|."""
    cfg = config or QuadratureConfig()
    start = time.perf_counter()

    def run(c: QuadratureConfig) -> float:
        return float(np.prod([_pair_norm(model.lam, u, v, c) for u, v in zip(model.u, model.v)]))

    numeric = run(cfg)
    refined = None
    if cfg.refine:
        refined = run(cfg.refined())
        _agree(numeric, refined, cfg.tol, "coefficient norm")
    predicted = model.predicted()
    return {
        "numeric": numeric,
        "predicted": predicted,
        "rel_err": abs(numeric - predicted) / predicted,
        "refined": refined,
        "grid": cfg.n,
        "runtime_ms": round(1000 * (time.perf_counter() - start), 3),
    }


# -- nilpotent groups in exponential coordinates -------------------------------------


class NilpotentGroup:
    """n_Phi for type A realized by strictly upper triangular matrices.

    The basis vector for the root psi_i + ... + psi_j is eps * E_(i, j+1) with
    signs eps chosen so that matrix commutators reproduce the Chevalley
    constants of ``table``.
    """

    def __init__(self, decomp: PhiDecomposition, table: StructureTable):
        system = decomp.system
        if system.family is not Family.A:
            raise UnsupportedForm("matrix realization implemented for type A only")
        self.decomp = decomp
        self.table = table
        self.basis: tuple[Root, ...] = tuple(
            sorted(decomp.phi_nil, key=lambda r: (r.height, r.simple_coords))
        )
        self.size = system.rank + 1
        self.index = {r: k for k, r in enumerate(self.basis)}
        self.eps: dict[Root, int] = {}
        for xi in system.positive:
            if xi.height == 1:
                self.eps[xi] = 1
                continue
            a, b = table.extraspecial[xi]
            # [E_a, E_b] = s E_xi with s = +1 if a sits left of b on the diagram
            s = 1 if self._span(a)[1] == self._span(b)[0] else -1
            self.eps[xi] = self.eps[a] * self.eps[b] * s * table.N(a, b)
        self._check_signs()

    @staticmethod
    def _span(r: Root) -> tuple[int, int]:
        nz = [i for i, c in enumerate(r.simple_coords) if c]
        return nz[0], nz[-1] + 1

    def unit(self, r: Root) -> np.ndarray:
        i, j = self._span(r)
        m = np.zeros((self.size, self.size))
        m[i, j] = self.eps[r]
        return m

    def _check_signs(self):
        system = self.decomp.system
        for a in system.positive:
            for b in system.positive:
                s = system.sum_root(a, b)
                comm = self.unit(a) @ self.unit(b) - self.unit(b) @ self.unit(a)
                want = self.table.N(a, b) * self.unit(s) if s is not None else 0 * comm
                if not np.array_equal(comm, want):
                    raise AssertionError("matrix realization disagrees with the structure table")

    def matrix(self, X: Sequence[float]) -> np.ndarray:
        m = np.zeros((self.size, self.size))
        for r, c in zip(self.basis, X):
            m = m + c * self.unit(r)
        return m

    def coords(self, m: np.ndarray) -> np.ndarray:
        out = np.zeros(len(self.basis))
        for k, r in enumerate(self.basis):
            i, j = self._span(r)
            out[k] = m[i, j] * self.eps[r]
        return out

    def exp(self, X) -> np.ndarray:
        m = self.matrix(X)
        out = np.eye(self.size)
        term = np.eye(self.size)
        for k in range(1, self.size):
            term = term @ m / k
            out = out + term
        return out

    def log(self, g: np.ndarray) -> np.ndarray:
        m = g - np.eye(self.size)
        out = np.zeros_like(m)
        power = np.eye(self.size)
        for k in range(1, self.size):
            power = power @ m
            out = out + ((-1) ** (k + 1)) * power / k
        return self.coords(out)

    def multiply(self, X, Y) -> np.ndarray:
        """Exponential coordinates of exp(X) exp(Y)."""
        return self.log(self.exp(X) @ self.exp(Y))

    def is_central(self, X) -> bool:
        m = self.matrix(X)
        return all(np.allclose(m @ self.unit(r) - self.unit(r) @ m, 0) for r in self.basis)


# -- inversion -------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianTestFunction:
    """f(exp X) = prod_k p_k(X_k) exp(-pi a_k X_k^2) in the group's basis order.

    ``polys[k]`` lists polynomial coefficients, constant term first.
    """

    widths: tuple
    polys: tuple = field(default=())

    def __post_init__(self):
        if any(a <= 0 for a in self.widths):
            raise ValueError("Gaussian widths must be positive")
        polys = self.polys or tuple((1.0,) for _ in self.widths)
        if len(polys) != len(self.widths):
            raise ValueError("one polynomial per coordinate")
        object.__setattr__(self, "polys", tuple(tuple(p) for p in polys))

    def factor(self, k: int, y):
        y = np.asarray(y, dtype=float)
        p = np.polynomial.polynomial.polyval(y, self.polys[k])
        return p * np.exp(-math.pi * self.widths[k] * y * y)

    def __call__(self, Y) -> float:
        return float(np.prod([self.factor(k, y) for k, y in enumerate(Y)]))

    def sigma(self, k: int) -> float:
        # Gaussian factor exp(-pi a y^2) has standard deviation 1/sqrt(2 pi a);
        # polynomial factors widen it, accounted for by the degree
        deg = len(self.polys[k]) - 1
        return (1.0 + 0.25 * deg) / math.sqrt(2 * math.pi * self.widths[k])

    def freq_sigma(self, k: int) -> float:
        deg = len(self.polys[k]) - 1
        return (1.0 + 0.25 * deg) * math.sqrt(self.widths[k] / (2 * math.pi))


CASES = {"h3": 2, "a3": 3}
TOLERANCES = {"h3": 1e-4, "a3": 1e-3}


@dataclass(frozen=True)
class InversionSetup:
    case: str
    decomp: PhiDecomposition
    group: NilpotentGroup
    s_axes: tuple  # basis positions of quasi-center coordinates
    v_axes: tuple
    c: int
    density: object

    @property
    def dim(self) -> int:
        return len(self.group.basis)


def inversion_setup(case: str) -> InversionSetup:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {sorted(CASES)}")
    system = build_system(("A", CASES[case]))
    decomp = decompose(system, build_cascade(system), ())
    table = build_constants(system)
    group = NilpotentGroup(decomp, table)
    zroots = {r for g in decomp.groups for r in g.z}
    s_axes = tuple(k for k, r in enumerate(group.basis) if r in zroots)
    v_axes = tuple(k for k, r in enumerate(group.basis) if r not in zroots)
    pd = plancherel_data(decomp, table)
    return InversionSetup(case, decomp, group, s_axes, v_axes, pd.c_const, pd.density)


def _axis_grids(f: GaussianTestFunction, k: int, shift: float, cfg: QuadratureConfig, freq_pad: float = 0.0):
    L = cfg.sigmas * f.sigma(k) + abs(shift)
    V = cfg.sigmas * f.freq_sigma(k) + freq_pad
    X, wX = _trapezoid(-L, L, cfg.n)
    nu, wnu = _trapezoid(-V, V, cfg.n)
    return X, wX, nu, wnu


def _orbit_kernel(X, nu, wnu):
    """K(X) = sum_nu w_nu exp(-2 pi i nu X): the truncated v*-integral acting on X."""
    return np.exp(-2j * math.pi * np.outer(X, nu)) @ wnu


def _lambda_grid(f: GaussianTestFunction, k: int, cfg: QuadratureConfig, pad: float = 0.0):
    Lam = cfg.sigmas * f.freq_sigma(k) + pad
    # cell-centred nodes: never 0, so |P(lambda)| > 0 at every node
    return _midpoints(-Lam, Lam, cfg.n - 1)


def _rhs_separable(setup: InversionSetup, f: GaussianTestFunction, x, cfg: QuadratureConfig, c_outer: float):
    """x central: F(X) = f(exp(X) x) = f(exp(X + x)) is a product over axes."""
    dim = setup.dim
    orbit_v = 1.0 + 0j
    for k in setup.v_axes:
        X, wX, nu, wnu = _axis_grids(f, k, x[k], cfg)
        orbit_v *= np.sum(f.factor(k, X + x[k]) * _orbit_kernel(X, nu, wnu) * wX)
    lam_grids = []
    s_hat = []
    for k in setup.s_axes:
        X, wX, _, _ = _axis_grids(f, k, x[k], cfg)
        lam, wl = _lambda_grid(f, k, cfg)
        ft = np.exp(-2j * math.pi * np.outer(lam, X)) @ (f.factor(k, X + x[k]) * wX)
        lam_grids.append((lam, wl))
        s_hat.append(ft)
    # Theta(lambda) = (c |P(lambda)|)^-1 * orbit integral; rhs = c_outer * sum w Theta |P|
    names = [variable_name(setup.group.basis[k]) for k in setup.s_axes]
    mesh = np.meshgrid(*[g for g, _ in lam_grids], indexing="ij")
    P = _evaluate_density(setup.density, names, mesh)
    orbit = orbit_v * _outer_product(s_hat)
    theta = orbit / (setup.c * np.abs(P))
    weights = _outer_product([w for _, w in lam_grids])
    rhs = c_outer * np.sum(weights * theta * np.abs(P))
    assert dim == len(setup.s_axes) + len(setup.v_axes)
    return rhs, theta, mesh


def _outer_product(vectors):
    out = np.asarray(vectors[0])
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out


def _evaluate_density(poly, names, mesh) -> np.ndarray:
    val = np.zeros(mesh[0].shape)
    for mono, coeff in poly.terms.items():
        term = np.full(mesh[0].shape, float(coeff))
        for var, e in mono:
            term = term * mesh[names.index(var)] ** e
        val = val + term
    return val


def _rhs_h3_general(setup: InversionSetup, f: GaussianTestFunction, x, cfg: QuadratureConfig, c_outer: float):
    """Non-central x on the three-dimensional group: F(X) = f(exp(X) x) via the
    two-step product formula, integrated slice by slice along the center."""
    (a1, a2), (a3,) = setup.v_axes, setup.s_axes
    N12 = setup.group.table.N(setup.group.basis[a1], setup.group.basis[a2])
    x = np.asarray(x, dtype=float)
    lam_pad = 0.0
    # translation couples the center to the v-coordinates: widen the grids
    L1 = cfg.sigmas * f.sigma(a1) + abs(x[a1])
    L2 = cfg.sigmas * f.sigma(a2) + abs(x[a2])
    Lam = cfg.sigmas * f.freq_sigma(a3)
    nu_pad = Lam * 0.5 * (abs(x[a1]) + abs(x[a2])) * abs(N12)
    X1, w1, nu1, wn1 = _axis_grids(f, a1, x[a1], cfg, nu_pad)
    X2, w2, nu2, wn2 = _axis_grids(f, a2, x[a2], cfg, nu_pad)
    L3 = cfg.sigmas * f.sigma(a3) + abs(x[a3]) + 0.5 * abs(N12) * (L1 * abs(x[a2]) + L2 * abs(x[a1]))
    X3, w3 = _trapezoid(-L3, L3, 2 * cfg.n - 1)
    K1 = _orbit_kernel(X1, nu1, wn1) * w1
    K2 = _orbit_kernel(X2, nu2, wn2) * w2
    g1, g2 = np.meshgrid(X1, X2, indexing="ij")
    f1 = f.factor(a1, g1 + x[a1])
    f2 = f.factor(a2, g2 + x[a2])
    cross = 0.5 * N12 * (g1 * x[a2] - g2 * x[a1])
    G = np.empty(len(X3), dtype=complex)
    for i, z in enumerate(X3):
        F = f1 * f2 * f.factor(a3, z + x[a3] + cross)
        G[i] = K1 @ F @ K2
    lam, wl = _midpoints(-Lam - lam_pad, Lam + lam_pad, cfg.n - 1)
    orbit = np.exp(-2j * math.pi * np.outer(lam, X3)) @ (G * w3)
    P = _evaluate_density(setup.density, [variable_name(setup.group.basis[a3])], [lam])
    theta = orbit / (setup.c * np.abs(P))
    rhs = c_outer * np.sum(wl * theta * np.abs(P))
    return rhs, theta, [lam]


def inversion_check(
    case: str,
    f: GaussianTestFunction | None = None,
    x: Sequence[float] | None = None,
    config: QuadratureConfig | None = None,
    c_scale: float = 1.0,
) -> dict:
    """f(x) against c * int_{s*} Theta_lambda(r_x f) |P(lambda)| d lambda.

    Theta_lambda(F) = (c |P(lambda)|)^-1 * int_{v*} (F o exp)^(lambda + nu) d nu.
    ``c_scale`` multiplies the outer constant only (negative control).
    """
    setup = inversion_setup(case)
    cfg = config or QuadratureConfig(tol=TOLERANCES[case])
    f = f or GaussianTestFunction(tuple(1.0 for _ in range(setup.dim)))
    if len(f.widths) != setup.dim:
        raise ValueError(f"test function needs {setup.dim} widths for case {case}")
    x = np.zeros(setup.dim) if x is None else np.asarray(x, dtype=float)
    start = time.perf_counter()
    central = setup.group.is_central(x)
    if central:
        method = _rhs_separable
    elif case == "h3":
        method = _rhs_h3_general
    else:
        raise UnsupportedForm("non-central translations are only implemented for case h3")
    c_outer = setup.c * c_scale
    rhs, theta, mesh = method(setup, f, x, cfg, c_outer)
    refined = None
    if cfg.refine:
        refined, _, _ = method(setup, f, x, cfg.refined(), c_outer)
        _agree(rhs, refined, cfg.tol, f"inversion rhs ({case})")
    lhs = f(x)
    rel = abs(rhs - lhs) / abs(lhs)
    return {
        "case": case,
        "lhs": lhs,
        "rhs": float(np.real(rhs)),
        "rhs_imag": float(np.imag(rhs)),
        "rel_err": float(rel),
        "refined_rhs": None if refined is None else float(np.real(refined)),
        "c": setup.c,
        "c_used": c_outer,
        "central": bool(central),
        "grid": cfg.n,
        "runtime_ms": round(1000 * (time.perf_counter() - start), 3),
        "_theta": theta,
        "_lambda": mesh,
    }


def central_phase_check(zeta: float, config: QuadratureConfig | None = None) -> dict:
    """Right translation by exp(zeta x_3) on the three-dimensional group
    multiplies Theta_lambda by exp(2 pi i lambda zeta)."""
    setup = inversion_setup("h3")
    cfg = config or QuadratureConfig(tol=TOLERANCES["h3"], refine=False)
    x = np.zeros(setup.dim)
    x[setup.s_axes[0]] = zeta
    f = GaussianTestFunction((1.0, 1.0, 1.0))
    base = inversion_check("h3", f, None, cfg)
    moved = inversion_check("h3", f, x, cfg)
    (lam,) = base["_lambda"]
    expected = base["_theta"] * np.exp(2j * math.pi * lam * zeta)
    scale = np.max(np.abs(base["_theta"]))
    return {
        "max_phase_dev": float(np.max(np.abs(moved["_theta"] - expected)) / scale),
        "modulus_dev": float(np.max(np.abs(np.abs(moved["_theta"]) - np.abs(base["_theta"]))) / scale),
        "lhs": moved["lhs"],
        "rhs": moved["rhs"],
        "rel_err": moved["rel_err"],
    }


def public(result: dict) -> dict:
    """Drop array-valued diagnostics (keys starting with an underscore)."""
    return {k: v for k, v in result.items() if not k.startswith("_")}
