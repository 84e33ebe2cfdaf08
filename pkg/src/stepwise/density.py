"""Layer Pfaffians, the Plancherel density polynomial, quasi-center determinant and weights.

A functional lambda on the quasi-center s = z_1 + ... + z_l is written in the
coordinates dual to the Chevalley root vectors: the variable ``z<coords>``
(for example ``z11111``) is the value of lambda on x_alpha for the z-root
alpha with those simple coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from .chevalley import StructureTable, build_constants
from .errors import StructureViolation, UnsupportedForm
from .parabolic import PhiDecomposition, RestrictedWeight, restriction_class
from .poly import AntisymmetricPolyMatrix, Polynomial, pfaffian
from .rootsys import Root


def variable_name(root: Root) -> str:
    return "z" + "".join(str(c) for c in root.simple_coords)


def _group(decomp: PhiDecomposition, j: int):
    if not 1 <= j <= len(decomp.groups):
        raise IndexError(f"group {j} out of range 1..{len(decomp.groups)}")
    return decomp.groups[j - 1]


def layer_matrix(decomp: PhiDecomposition, table: StructureTable, j: int, dual_roots=None) -> AntisymmetricPolyMatrix:
    """b_lambda(x_a, x_b) = lambda([x_a, x_b]) on the ordered basis of v_j.

    ``dual_roots`` are the roots carrying a variable; default z_j.
    """
    if not decomp.system.is_split:
        raise UnsupportedForm("Pfaffians need multiplicity-one root spaces")
    g = _group(decomp, j)
    dual = set(g.z if dual_roots is None else dual_roots)
    names = sorted(variable_name(r) for r in dual)
    system = decomp.system
    basis = g.v
    rows = []
    for a in basis:
        row = []
        for b in basis:
            s = system.sum_root(a, b)
            if s is not None and s in dual:
                row.append(Polynomial({((variable_name(s), 1),): table.N(a, b)}, names))
            else:
                row.append(Polynomial((), names))
        rows.append(row)
    return AntisymmetricPolyMatrix(rows)


def layer_pfaffian(decomp: PhiDecomposition, table: StructureTable, j: int, verify: bool | None = None) -> Polynomial:
    g = _group(decomp, j)
    names = [variable_name(r) for r in g.z]
    pf = pfaffian(layer_matrix(decomp, table, j), verify=verify)
    pf = Polynomial(pf.terms, names)
    if pf.is_zero():
        raise StructureViolation(f"group {j}: Pfaffian vanishes identically")
    if pf.degree() != g.d or not pf.is_homogeneous():
        raise StructureViolation(f"group {j}: Pfaffian {pf} is not homogeneous of degree {g.d}")
    return pf


def easy_tilde_check(decomp: PhiDecomposition, table: StructureTable, j: int, verify: bool | None = None) -> bool:
    """Give every root of the restriction class [beta_j0] a variable and
    confirm that the Pfaffian still only involves the z_j variables (and is
    unchanged)."""
    g = _group(decomp, j)
    cls = restriction_class(decomp.system, decomp.phi, decomp.cascade.betas[g.j0 - 1])
    big = pfaffian(layer_matrix(decomp, table, j, dual_roots=set(cls) | set(g.z)), verify=verify)
    zvars = {variable_name(r) for r in g.z}
    if not big.variables_used() <= zvars:
        return False
    return big == layer_pfaffian(decomp, table, j, verify=verify)


# -- weights -------------------------------------------------------------------


@dataclass(frozen=True)
class WeightLedger:
    delta_weight: RestrictedWeight
    p_weight: RestrictedWeight
    det_weight: RestrictedWeight
    aprime_dim: int
    trace_weight: RestrictedWeight  # delta recomputed root by root

    def holds(self) -> bool:
        return self.p_weight + self.det_weight == self.delta_weight == self.trace_weight

    def to_dict(self) -> dict:
        return {
            "delta": self.delta_weight.to_list(),
            "p": self.p_weight.to_list(),
            "det": self.det_weight.to_list(),
            "aprime_dim": self.aprime_dim,
        }


def rational_rank(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def weights(decomp: PhiDecomposition) -> WeightLedger:
    """Semi-invariance weights on a_Phi.

    delta: modular function, from traces of ad on each grouped layer;
    p: weight of the density polynomial P; det: weight of Det_s. The
    delta weight is recomputed as the trace of ad on n_Phi, root by root.
    """
    phi = decomp.phi
    n = len(phi.complement)
    zero = RestrictedWeight.zero(n)
    delta, p, det = zero, zero, zero
    for g in decomp.groups:
        b = g.restriction
        delta = delta + b.scale(Fraction(g.dims["l"] + g.dims["z"], 2))
        p = p + b.scale(Fraction(g.dims["v"], 2))
        det = det + b.scale(g.dims["z"])
    trace = zero
    for a in decomp.phi_nil:
        trace = trace + phi.restrict(a).scale(decomp.system.multiplicity(a))
    if trace != delta:
        raise StructureViolation(f"modular weight {delta.to_list()} != trace weight {trace.to_list()}")
    aprime = n - rational_rank([g.restriction.coeffs for g in decomp.groups])
    return WeightLedger(delta, p, det, aprime, trace)


def stepwise_constant(decomp: PhiDecomposition) -> int:
    ds = [g.d for g in decomp.groups]
    return 2 ** sum(ds) * prod(factorial(d) for d in ds)


# -- assembled data -----------------------------------------------------------------


@dataclass(frozen=True)
class GroupPfaffian:
    j: int
    pf: Polynomial
    d: int


@dataclass(frozen=True)
class PlancherelData:
    per_group: tuple[GroupPfaffian, ...]
    density: Polynomial
    c_const: int
    det_sphi: Polynomial
    degrees: dict = field(compare=False)
    ledger: WeightLedger | None = None

    def to_dict(self) -> dict:
        out = {
            "groups": [{"j": g.j, "pf": g.pf.text(), "d": g.d} for g in self.per_group],
            "P": self.density.text(),
            "Det": self.det_sphi.text(),
            "c": self.c_const,
            "degrees": dict(self.degrees),
        }
        if self.ledger is not None:
            led = self.ledger.to_dict()
            out["weights"] = {k: led[k] for k in ("delta", "p", "det")}
            out["aprime_dim"] = led["aprime_dim"]
        return out


def plancherel_data(decomp: PhiDecomposition, table: StructureTable | None = None, verify: bool | None = None) -> PlancherelData:
    if table is None:
        table = build_constants(decomp.system)
    groups = []
    density = Polynomial.const(1)
    for g in decomp.groups:
        pf = layer_pfaffian(decomp, table, g.j, verify=verify)
        groups.append(GroupPfaffian(g.j, pf, g.d))
        density = density * pf
    z_roots = [r for g in decomp.groups for r in g.z]
    det = Polynomial.const(1)
    for r in z_roots:
        det = det * Polynomial.var(variable_name(r))
    names = [variable_name(r) for r in z_roots]
    density = Polynomial(density.terms, names)
    det = Polynomial(det.terms, names)
    degrees = {
        "P": density.degree(),
        "Det": det.degree(),
        "half_dim_n_plus_s": Fraction(decomp.dim_n + decomp.dim_s, 2),
    }
    if degrees["P"] + degrees["Det"] != degrees["half_dim_n_plus_s"]:
        raise StructureViolation(f"degree identity fails: {degrees}")
    degrees["half_dim_n_plus_s"] = int(degrees["half_dim_n_plus_s"])
    return PlancherelData(tuple(groups), density, stepwise_constant(decomp), det, degrees, weights(decomp))
