"""Parabolic subsets, nilradical layers and root-level verification of their structure.

Root-space membership is the whole story here: a bracket [g_a, g_b] of split
root spaces is nonzero exactly when a + b is a root (checked separately in
``chevalley``), so every "bracket lands in subspace" statement reduces to a scan
of root sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .cascade import Cascade
from .rootsys import RestrictedRootSystem, Root


@dataclass(frozen=True)
class ParabolicSubset:
    phi: frozenset[int]
    rank: int

    def __post_init__(self):
        phi = frozenset(int(i) for i in self.phi)
        bad = [i for i in phi if not 1 <= i <= self.rank]
        if bad:
            raise ValueError(f"simple-root indices {sorted(bad)} outside 1..{self.rank}")
        object.__setattr__(self, "phi", phi)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.rank + 1) if i not in self.phi)

    def restrict(self, alpha: Root) -> RestrictedWeight:
        return RestrictedWeight(tuple(Fraction(alpha.simple_coords[i - 1]) for i in self.complement))

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.phi)) + "}"


def as_subset(system: RestrictedRootSystem, phi: Iterable[int] | ParabolicSubset) -> ParabolicSubset:
    if isinstance(phi, ParabolicSubset):
        return phi
    return ParabolicSubset(frozenset(phi), system.rank)


@dataclass(frozen=True)
class RestrictedWeight:
    """Linear functional on a_Phi, as coefficients along the simple roots outside Phi."""

    coeffs: tuple[Fraction, ...]

    def __add__(self, other: RestrictedWeight) -> RestrictedWeight:
        return RestrictedWeight(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: RestrictedWeight) -> RestrictedWeight:
        return RestrictedWeight(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, k) -> RestrictedWeight:
        return RestrictedWeight(tuple(Fraction(k) * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    @classmethod
    def zero(cls, n: int) -> RestrictedWeight:
        return cls(tuple(Fraction(0) for _ in range(n)))

    def to_list(self) -> list:
        return [int(a) if a.denominator == 1 else str(a) for a in self.coeffs]


@dataclass(frozen=True)
class LayerSplit:
    r: int
    beta: Root
    J: tuple[Root, ...]
    J1: tuple[Root, ...]  # J'_r: sigma-partner also in the nilradical
    J2: tuple[Root, ...]  # J''_r: partner falls into the Levi factor


@dataclass(frozen=True)
class Group:
    """Grouped layer l_{Phi,j}: the cascade indices I_j sharing one restriction."""

    j: int
    I: tuple[int, ...]
    restriction: RestrictedWeight
    z: tuple[Root, ...]
    v: tuple[Root, ...]
    lpp: tuple[Root, ...]
    dims: dict = field(hash=False, compare=False)

    @property
    def l(self) -> tuple[Root, ...]:
        return self.z + self.v

    @property
    def j0(self) -> int:
        return self.I[0]

    @property
    def d(self) -> int:
        return self.dims["v"] // 2


@dataclass(frozen=True)
class PhiDecomposition:
    system: RestrictedRootSystem
    cascade: Cascade
    phi: ParabolicSubset
    phi_red: frozenset[Root]
    phi_nil: tuple[Root, ...]
    surviving_layers: dict
    groups: tuple[Group, ...]

    def dim(self, roots: Iterable[Root]) -> int:
        return sum(self.system.multiplicity(a) for a in roots)

    @property
    def dim_n(self) -> int:
        return self.dim(self.phi_nil)

    @property
    def dim_s(self) -> int:
        return sum(g.dims["z"] for g in self.groups)

    def to_dict(self) -> dict:
        def coords(roots):
            return [list(a.simple_coords) for a in roots]

        return {
            "family": self.system.family.value,
            "rank": self.system.rank,
            "phi": sorted(self.phi.phi),
            "betas": coords(self.cascade.betas),
            "groups": [
                {
                    "j": g.j,
                    "I": list(g.I),
                    "restriction": g.restriction.to_list(),
                    "z": coords(g.z),
                    "v": coords(g.v),
                    "lpp": coords(g.lpp),
                    "dims": dict(sorted(g.dims.items())),
                }
                for g in self.groups
            ],
        }


def phi_split(system: RestrictedRootSystem, phi) -> tuple[frozenset[Root], tuple[Root, ...]]:
    """(Phi^red, Phi^nil): roots supported in Phi, and positive roots reaching outside Phi."""
    phi = as_subset(system, phi)
    outside = [i - 1 for i in phi.complement]
    red = frozenset(a for a in system.roots if all(a.simple_coords[i] == 0 for i in outside))
    nil = tuple(a for a in system.positive if any(a.simple_coords[i] > 0 for i in outside))
    return red, nil


def decompose(system: RestrictedRootSystem, cascade: Cascade, phi) -> PhiDecomposition:
    phi = as_subset(system, phi)
    red, nil = phi_split(system, phi)
    nil_set = frozenset(nil)

    layers: dict[int, LayerSplit] = {}
    for r, (beta, layer) in enumerate(zip(cascade.betas, cascade.layer_sets), start=1):
        if beta not in nil_set:
            continue
        J = tuple(a for a in layer if a in nil_set)
        Jset = set(J)
        J1 = tuple(a for a in J if cascade.sigma[r - 1][a] in Jset)
        J2 = tuple(a for a in J if cascade.sigma[r - 1][a] not in Jset)
        layers[r] = LayerSplit(r, beta, J, J1, J2)

    groups: list[Group] = []
    placed: set[int] = set()
    for q in sorted(layers):
        if q in placed:
            continue
        res = phi.restrict(cascade.betas[q - 1])
        I = tuple(i for i in sorted(layers) if phi.restrict(cascade.betas[i - 1]) == res)
        placed.update(I)
        z = tuple(x for i in I for x in (layers[i].beta,) + layers[i].J2)
        v = tuple(_paired_order(cascade, layers[i]) for i in I)
        v = tuple(x for part in v for x in part)
        lpp = tuple(x for i in I for x in layers[i].J2)
        dims = {
            "l": sum(system.multiplicity(a) for a in z + v),
            "z": sum(system.multiplicity(a) for a in z),
            "v": sum(system.multiplicity(a) for a in v),
            "lpp": sum(system.multiplicity(a) for a in lpp),
        }
        groups.append(Group(len(groups) + 1, I, res, z, v, lpp, dims))
    return PhiDecomposition(system, cascade, phi, red, nil, layers, tuple(groups))


def _paired_order(cascade: Cascade, split: LayerSplit) -> tuple[Root, ...]:
    """J'_r with each sigma-pair adjacent, lexicographically smaller member first."""
    sig = cascade.sigma[split.r - 1]
    out: list[Root] = []
    seen: set[Root] = set()
    for a in sorted(split.J1, key=lambda x: x.simple_coords):
        if a in seen:
            continue
        b = sig[a]
        out.append(a)
        seen.add(a)
        if b != a:
            out.append(b)
            seen.add(b)
    return tuple(out)


def restriction_class(system: RestrictedRootSystem, phi, alpha: Root) -> tuple[Root, ...]:
    """[alpha]_Phi: positive roots with the same restriction to a_Phi as alpha."""
    phi = as_subset(system, phi)
    res = phi.restrict(alpha)
    return tuple(d for d in system.positive if phi.restrict(d) == res)


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class Failure:
    lemma: str
    witness: tuple

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "witness": [list(w.simple_coords) if isinstance(w, Root) else w for w in self.witness],
        }


LEMMAS = (
    "inter_center",
    "inter_compl",
    "semidirect",
    "part_c",
    "some_brackets",
    "not_beta",
    "central_ideal",
    "stepwise_nondegen_roots",
    "gen_setup_a",
    "gen_setup_b",
    "gen_setup_c",
    "nzv_partition",
    "traces_even",
)


@dataclass
class VerificationReport:
    family: str
    rank: int
    phi: tuple[int, ...]
    results: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "phi": list(self.phi),
            "lemmas": {k: ("pass" if v else "fail") for k, v in sorted(self.results.items())},
            "failures": [f.to_dict() for f in self.failures],
            "notes": self.notes,
        }


class _Checker:
    def __init__(self, report: VerificationReport):
        self.report = report
        self._current = None

    def start(self, lemma: str):
        self._current = lemma
        self.report.results.setdefault(lemma, True)

    def fail(self, *witness):
        lemma = self._current
        if self.report.results.get(lemma, True):
            self.report.failures.append(Failure(lemma, tuple(witness)))
        self.report.results[lemma] = False


def verify_structure(system: RestrictedRootSystem, cascade: Cascade, phi) -> VerificationReport:
    """Exhaustive root-sum scans for every structural statement about the decomposition.

    Each lemma records at most one witness (the first failure found).
    """
    decomp = phi if isinstance(phi, PhiDecomposition) else decompose(system, cascade, phi)
    phi = decomp.phi
    nil = set(decomp.phi_nil)
    layers = decomp.surviving_layers
    groups = decomp.groups
    report = VerificationReport(system.family.value, system.rank, tuple(sorted(phi.phi)))
    ck = _Checker(report)
    add = system.sum_root

    ck.start("inter_center")
    for r, (beta, layer) in enumerate(zip(cascade.betas, cascade.layer_sets), start=1):
        if beta not in nil:
            for a in layer:
                if a in nil:
                    ck.fail(r, a)

    ck.start("inter_compl")
    for r, sp in layers.items():
        if set(sp.J1) & set(sp.J2) or set(sp.J1) | set(sp.J2) != set(sp.J):
            ck.fail(r, "J != J' + J''")
        for a in sp.J2:
            if phi.restrict(a) != phi.restrict(sp.beta):
                ck.fail(r, a)

    ck.start("semidirect")
    for r, sp in layers.items():
        piece = (sp.beta,) + sp.J
        center = (sp.beta,) + sp.J2
        for a in center:
            for g in piece:
                if add(a, g) is not None:
                    ck.fail(r, a, g)
        for a in sp.J1:
            if not any(add(a, g) is not None for g in piece):
                ck.fail(r, a, "central but not in the declared center")

    ck.start("part_c")
    for r, sp_r in layers.items():
        for s, sp_s in layers.items():
            if r <= s:
                continue
            for g in (sp_r.beta,) + sp_r.J:
                for a in (sp_s.beta,) + sp_s.J2:
                    if add(g, a) is not None:
                        ck.fail(r, s, g, a)
    # part (c) as literally stated also covers layer roots outside n_Phi being absent:
    for r, (beta, layer) in enumerate(zip(cascade.betas, cascade.layer_sets), start=1):
        for s, sp_s in layers.items():
            if r <= s:
                continue
            for g in [x for x in (beta,) + layer if x in nil]:
                for a in (sp_s.beta,) + sp_s.J2:
                    if add(g, a) is not None:
                        ck.fail(r, s, g, a)

    group_of: dict[Root, int] = {}
    for g in groups:
        for a in g.l:
            group_of[a] = g.j
    lsets = {g.j: set(g.l) for g in groups}
    zsets = {g.j: set(g.z) for g in groups}
    vsets = {g.j: set(g.v) for g in groups}
    lppsets = {g.j: set(g.lpp) for g in groups}

    ck.start("some_brackets")
    for gk in groups:
        for gj in groups:
            if gk.j < gj.j:
                continue
            for c in gk.l:
                for a in gj.l:
                    s = add(c, a)
                    if s is not None and s not in lsets[gj.j]:
                        ck.fail(gk.j, gj.j, c, a, s)
    # l_{Phi,j} and l^dagger_{Phi,j} are subalgebras
    for gj in groups:
        dagger = set().union(*(lsets[k.j] for k in groups if k.j >= gj.j))
        for c in dagger:
            for a in dagger:
                s = add(c, a)
                if s is not None and s not in dagger:
                    ck.fail(gj.j, "dagger", c, a, s)

    ck.start("not_beta")
    for gk in groups:
        for gj in groups:
            if gk.j <= gj.j:
                continue
            betas_j = {cascade.betas[i - 1] for i in gj.I}
            for c in gk.l:
                for a in gj.l:
                    s = add(c, a)
                    if s is not None and s in betas_j:
                        ck.fail(gk.j, gj.j, c, a, s)

    ck.start("central_ideal")
    for gj in groups:
        dagger = [x for k in groups if k.j >= gj.j for x in k.l]
        for a in gj.z:
            for c in dagger:
                if add(a, c) is not None:
                    ck.fail(gj.j, a, c)
        for a in gj.v:
            if not any(add(a, c) is not None for c in gj.l):
                ck.fail(gj.j, a, "center of l_{Phi,j} larger than z_{Phi,j}")

    ck.start("stepwise_nondegen_roots")
    # b_lambda pairs each v-root with its sigma-partner into z: the root-level
    # shadow of nondegeneracy, confirmed at the polynomial level in ``density``.
    for gj in groups:
        for i in gj.I:
            sp = layers[i]
            sig = cascade.sigma[i - 1]
            for a in sp.J1:
                if sig[a] not in sp.J1 or add(a, sig[a]) != sp.beta:
                    ck.fail(gj.j, i, a)

    ck.start("gen_setup_a")
    for gj in groups:
        if gj.dims["v"] % 2:
            ck.fail(gj.j, "odd dim v")
        if any(a in zsets[gj.j] for a in gj.v):
            ck.fail(gj.j, "z and v overlap")

    ck.start("gen_setup_b")
    for gj in groups:
        prefix = set().union(*(lsets[k.j] for k in groups if k.j <= gj.j))
        for c in prefix:
            for a in nil:
                s = add(c, a)
                if s is not None and s not in prefix:
                    ck.fail(gj.j, c, a, s)
        for c in gj.l:
            for a in gj.l:
                s = add(c, a)
                if s is not None and s not in lsets[gj.j]:
                    ck.fail(gj.j, c, a, s)

    ck.start("gen_setup_c")
    for gk in groups:
        for gj in groups:
            if gk.j <= gj.j:
                continue
            for c in gk.l:
                for a in gj.z:
                    if add(c, a) is not None:
                        ck.fail(gk.j, gj.j, c, a)
                for a in gj.l:
                    s = add(c, a)
                    if s is not None and s not in vsets[gj.j] | lppsets[gj.j]:
                        ck.fail(gk.j, gj.j, c, a, s)

    ck.start("nzv_partition")
    seen: list[Root] = [a for g in groups for a in g.l]
    if len(seen) != len(set(seen)) or set(seen) != nil:
        extra = sorted(set(seen) ^ nil)
        ck.fail(*extra[:3]) if extra else ck.fail("duplicate root across groups")

    ck.start("traces_even")
    for g in groups:
        if (g.dims["l"] + g.dims["z"]) % 2:
            ck.fail(g.j, g.dims["l"], g.dims["z"])

    report.notes["groups"] = len(groups)
    report.notes["invariance"] = [c for c, _ in invariance_class(system, cascade, decomp)[0]]
    return report


def invariance_class(system: RestrictedRootSystem, cascade: Cascade, phi):
    """Per group: ("invariant" | "not_invariant", class [beta_j0]_Phi); plus all classes [alpha]_Phi.

    Weak invariance needs the compact part of M_Phi and cannot be decided from
    roots alone; reports render "not_invariant" groups as
    "not-invariant / undetermined-weak".
    """
    decomp = phi if isinstance(phi, PhiDecomposition) else decompose(system, cascade, phi)
    per_group = []
    for g in decomp.groups:
        cls = restriction_class(system, decomp.phi, cascade.betas[g.j0 - 1])
        status = "invariant" if set(cls) == set(g.z) else "not_invariant"
        per_group.append((status, cls))
    classes: dict[RestrictedWeight, list[Root]] = {}
    for a in decomp.phi_nil:
        classes.setdefault(decomp.phi.restrict(a), []).append(a)
    return per_group, {k: tuple(v) for k, v in classes.items()}
