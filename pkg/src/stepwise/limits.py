"""Diagram propagation between ranks, admissible parabolic families and limit constants.

Type A labels. The diagrams of A_n are labelled from the center outward. A
node with internal index i (1..n, left to right) has offset
``i - (n // 2 + 1)``; the origin is the middle node for odd n and the
right-hand middle node for even n. Embeddings preserve offsets. Centered
labels are the offsets for odd n; for even n there is no label 0 and
nonnegative offsets shift up by one (so labels run -k..-1, 1..k).

Types B, C, D: psi_1 is the right end of the diagram and psi_i keeps its
index under every embedding; new nodes are added on the left.

Cascade order. Within one rank the cascade runs from the highest root down.
Along a chain the roots are listed bottom-up instead: the cascade of the
smallest rank in reverse, then at each new rank the newly appearing roots,
again in reverse cascade order. Every level's list is then a prefix of the
next level's list (``PropagationChain.part_two_betas``);
``part_one_position`` converts back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .cascade import Cascade, build_cascade
from .chevalley import build_constants
from .density import plancherel_data, stepwise_constant, variable_name
from .errors import FamilyViolation, IncompatibleFamily, SingularParameter
from .parabolic import PhiDecomposition, decompose, restriction_class
from .rootsys import Family, RestrictedRootSystem, Root, RootSystemType, build_system

# -- type A centered labels -----------------------------------------------------


def a_offset(rank: int, i: int) -> int:
    if not 1 <= i <= rank:
        raise ValueError(f"node {i} outside 1..{rank}")
    return i - (rank // 2 + 1)


def a_index(rank: int, offset: int) -> int:
    i = offset + rank // 2 + 1
    if not 1 <= i <= rank:
        raise ValueError(f"offset {offset} is not a node of A_{rank}")
    return i


def a_centered_label(rank: int, i: int) -> int:
    off = a_offset(rank, i)
    if rank % 2 or off < 0:
        return off
    return off + 1


def a_index_from_label(rank: int, label: int) -> int:
    if rank % 2 == 0:
        if label == 0:
            raise ValueError(f"A_{rank} has no node labelled 0")
        off = label if label < 0 else label - 1
    else:
        off = label
    return a_index(rank, off)


def a_side_distance(rank: int, i: int) -> tuple[int, int]:
    """(sign of offset, |offset|): -1 left of the origin, 0 at it, +1 right."""
    off = a_offset(rank, i)
    return (off > 0) - (off < 0), abs(off)


# -- propagation ------------------------------------------------------------


@dataclass(frozen=True)
class RootInjection:
    source: RestrictedRootSystem
    target: RestrictedRootSystem
    simple_map: dict  # 1-based index in source -> 1-based index in target

    def coords(self, c) -> tuple[int, ...]:
        out = [0] * self.target.rank
        for i, x in enumerate(c, start=1):
            out[self.simple_map[i] - 1] = x
        return tuple(out)

    def __call__(self, root: Root) -> Root:
        return self.target.root(self.coords(root.simple_coords))

    def is_identity(self) -> bool:
        return self.source.rank == self.target.rank and all(k == v for k, v in self.simple_map.items())

    def check(self) -> bool:
        """Injective on roots and pairing-preserving (exhaustive)."""
        images = [self(r) for r in self.source.roots]
        if len(set(images)) != len(images):
            return False
        for a, ia in zip(self.source.roots, images):
            for b, ib in zip(self.source.roots, images):
                if self.source.cartan_integer(a, b) != self.target.cartan_integer(ia, ib):
                    return False
        return True

    def compose(self, after: RootInjection) -> RootInjection:
        """``after`` applied after ``self``."""
        return RootInjection(
            self.source, after.target, {i: after.simple_map[j] for i, j in self.simple_map.items()}
        )


def propagate(system_n: RestrictedRootSystem, system_l: RestrictedRootSystem) -> RootInjection:
    if system_n.family is not system_l.family:
        raise IncompatibleFamily(f"cannot embed {system_n.type} into {system_l.type}")
    n, l = system_n.rank, system_l.rank
    if n > l:
        raise IncompatibleFamily(f"rank {n} does not embed into rank {l}")
    if system_n.family is Family.A:
        shift = l // 2 - n // 2
        mapping = {i: i + shift for i in range(1, n + 1)}
    else:
        mapping = {i: i for i in range(1, n + 1)}
    return RootInjection(system_n, system_l, mapping)


# -- chains -------------------------------------------------------------------------


@dataclass(frozen=True)
class Level:
    rank: int
    system: RestrictedRootSystem
    cascade: Cascade
    phi: frozenset | None
    decomp: PhiDecomposition | None


@dataclass
class PropagationChain:
    family: Family
    ranks: tuple[int, ...]
    levels: dict = field(repr=False)
    embeddings: dict = field(repr=False)  # (n, l) consecutive -> RootInjection

    @property
    def phis(self) -> dict:
        return {n: lv.phi for n, lv in self.levels.items()}

    def embedding(self, n: int, l: int) -> RootInjection:
        if n == l:
            s = self.levels[n].system
            return RootInjection(s, s, {i: i for i in range(1, n + 1)})
        seq = [r for r in self.ranks if n <= r <= l]
        if seq[0] != n or seq[-1] != l:
            raise KeyError(f"ranks {n}, {l} are not both in the chain")
        emb = self.embeddings[(seq[0], seq[1])]
        for a, b in zip(seq[1:], seq[2:]):
            emb = emb.compose(self.embeddings[(a, b)])
        return emb

    def decomposition(self, n: int) -> PhiDecomposition:
        d = self.levels[n].decomp
        if d is None:
            raise ValueError("chain has no parabolic family")
        return d

    def part_two_betas(self, n: int) -> list[Root]:
        """Cascade of level n in bottom-up chain order (see module docstring)."""
        out: list[Root] = []
        for r in self.ranks:
            if r > n:
                break
            emb = self.embedding(r, n)
            for b in reversed(self.levels[r].cascade.betas):
                x = emb(b)
                if x not in out:
                    out.append(x)
        return out

    def part_one_position(self, n: int, k: int) -> int:
        """1-based cascade index (highest root first) of the k-th root in chain order."""
        beta = self.part_two_betas(n)[k - 1]
        return self.levels[n].cascade.betas.index(beta) + 1

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "ranks": list(self.ranks),
            "phi": {str(n): sorted(lv.phi) for n, lv in self.levels.items() if lv.phi is not None},
        }


def build_chain(family, ranks, phis: Mapping[int, object] | None = None) -> PropagationChain:
    family = Family(family)
    ranks = tuple(int(r) for r in ranks)
    if not ranks or any(a >= b for a, b in zip(ranks, ranks[1:])):
        raise ValueError(f"ranks must be strictly increasing, got {list(ranks)}")
    levels = {}
    for n in ranks:
        system = build_system(RootSystemType(family, n))
        cascade = build_cascade(system)
        phi = None
        decomp = None
        if phis is not None:
            if n not in phis:
                raise ValueError(f"no parabolic subset given for rank {n}")
            phi = frozenset(int(i) for i in phis[n])
            decomp = decompose(system, cascade, phi)
        levels[n] = Level(n, system, cascade, phi, decomp)
    embeddings = {
        (a, b): propagate(levels[a].system, levels[b].system) for a, b in zip(ranks, ranks[1:])
    }
    return PropagationChain(family, ranks, levels, embeddings)


def chain_from_dict(data: Mapping) -> PropagationChain:
    """Chain spec: {family, ranks, phi: {rank: [indices]}, phi_labels?}.

    ``phi_labels`` is "internal" (1..rank, default) or "centered" (type A
    diagram labels, see module docstring).
    """
    family = Family(data["family"])
    ranks = [int(r) for r in data["ranks"]]
    labels = data.get("phi_labels", "internal")
    if labels not in ("internal", "centered"):
        raise ValueError(f"phi_labels must be 'internal' or 'centered', got {labels!r}")
    phis = None
    if "phi" in data and data["phi"] is not None:
        raw = {int(k): list(v) for k, v in data["phi"].items()}
        phis = {}
        for n in ranks:
            if n not in raw:
                raise ValueError(f"no parabolic subset given for rank {n}")
            if labels == "centered":
                if family is not Family.A:
                    raise ValueError("centered labels exist only for type A")
                phis[n] = [a_index_from_label(n, int(x)) for x in raw[n]]
            else:
                phis[n] = [int(x) for x in raw[n]]
    return build_chain(family, ranks, phis)


def load_chain(path) -> PropagationChain:
    with open(path) as fh:
        return chain_from_dict(json.load(fh))


# -- admissibility ---------------------------------------------------------------


@dataclass
class FamilyReport:
    admissible: dict  # "N", "A", "U", "E" -> bool
    cascade_nested: bool
    index_groups: dict  # rank -> list of sorted global-index lists
    index_groups_nested: bool
    index_groups_limit: list
    very_restricted: bool
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def raise_first(self):
        if self.violations:
            raise self.violations[0]

    def to_dict(self) -> dict:
        return {
            "admissible": dict(sorted(self.admissible.items())),
            "cascade_nested": self.cascade_nested,
            "index_groups": {str(k): v for k, v in sorted(self.index_groups.items())},
            "index_groups_nested": self.index_groups_nested,
            "index_groups_limit": self.index_groups_limit,
            "very_restricted": self.very_restricted,
            "violations": [v.to_dict() for v in self.violations],
        }


def _n_admissible(chain: PropagationChain, n: int, l: int):
    emb = chain.embedding(n, l)
    lo, hi = chain.levels[n], chain.levels[l]
    outside_n = {emb.simple_map[i] for i in range(1, n + 1) if i not in lo.phi}
    outside_l = {i for i in range(1, l + 1) if i not in hi.phi}
    return sorted(outside_n - outside_l)


def _u_admissible(chain: PropagationChain, n: int, l: int):
    emb = chain.embedding(n, l)
    lo, hi = chain.levels[n], chain.levels[l]
    return sorted(emb.simple_map[i] for i in lo.phi if emb.simple_map[i] not in hi.phi)


def global_index_groups(chain: PropagationChain, n: int) -> list[list[int]]:
    """Index groups at level n as sets of 1-based chain-order cascade indices,
    numbered by their smallest member."""
    order = {b: k for k, b in enumerate(chain.part_two_betas(n), start=1)}
    betas = chain.levels[n].cascade.betas
    groups = [sorted(order[betas[i - 1]] for i in g.I) for g in chain.decomposition(n).groups]
    return sorted(groups)


def check_family(chain: PropagationChain, strict: bool = False) -> FamilyReport:
    """Which limit groups the family defines, and the nesting statements
    the limit constructions rely on.

    Failed conditions are collected as FamilyViolation objects; ``strict``
    raises the first one instead of returning.
    """
    if any(lv.phi is None for lv in chain.levels.values()):
        raise ValueError("check_family needs a parabolic subset at every rank")
    viol: list[FamilyViolation] = []
    pairs = list(zip(chain.ranks, chain.ranks[1:]))

    n_ok = True
    u_ok = True
    for n, l in pairs:
        bad = _n_admissible(chain, n, l)
        if bad:
            n_ok = False
            viol.append(FamilyViolation("N", {"ranks": [n, l], "nodes": bad},
                                        f"simple roots outside Phi at rank {n} fall into Phi at rank {l}: {bad}"))
        bad = _u_admissible(chain, n, l)
        if bad:
            u_ok = False
            viol.append(FamilyViolation("U", {"ranks": [n, l], "nodes": bad},
                                        f"Phi at rank {n} is not contained in Phi at rank {l}: {bad}"))
    admissible = {"N": n_ok, "A": True, "U": u_ok, "E": n_ok and u_ok}

    nested = True
    for n, l in pairs:
        emb = chain.embedding(n, l)
        missing = [b for b in chain.levels[n].cascade.betas if emb(b) not in chain.levels[l].cascade.betas]
        if missing:
            nested = False
            viol.append(FamilyViolation("cascade", {"ranks": [n, l], "betas": [list(b.simple_coords) for b in missing]},
                                        f"cascade roots of rank {n} are not cascade roots at rank {l}"))
    if nested:
        for n, l in pairs:
            lo, hi = chain.part_two_betas(n), chain.part_two_betas(l)
            emb = chain.embedding(n, l)
            if [emb(b) for b in lo] != hi[: len(lo)]:
                nested = False
                viol.append(FamilyViolation("cascade", {"ranks": [n, l]}, "chain-order prefix not preserved"))

    groups = {}
    groups_nested = nested
    limit: list[list[int]] = []
    if nested:
        for n in chain.ranks:
            groups[n] = global_index_groups(chain, n)
        for n, l in pairs:
            for k, g in enumerate(groups[n]):
                if k >= len(groups[l]) or not set(g) <= set(groups[l][k]):
                    groups_nested = False
                    viol.append(FamilyViolation("I", {"ranks": [n, l], "k": k + 1, "I": g},
                                                f"I_({n},{k + 1}) not contained in I_({l},{k + 1})"))
        if groups_nested:
            top = max(len(g) for g in groups.values()) if groups else 0
            limit = [sorted(set().union(*(set(groups[n][k]) for n in chain.ranks if k < len(groups[n]))))
                     for k in range(top)]

    very = True
    if n_ok:
        for n, l in pairs:
            emb = chain.embedding(n, l)
            lo, hi = chain.levels[n], chain.levels[l]
            for a in lo.decomp.phi_nil:
                cls_n = {emb(d) for d in restriction_class(lo.system, lo.phi, a)}
                cls_l = set(restriction_class(hi.system, hi.phi, emb(a)))
                if not cls_n <= cls_l:
                    very = False
                    viol.append(FamilyViolation("very_restricted", {"ranks": [n, l], "alpha": list(a.simple_coords)},
                                                f"restriction class of {a.label()} grows out of its image class"))
                    break

    report = FamilyReport(admissible, nested, groups, groups_nested, limit, very, viol)
    if strict:
        report.raise_first()
    return report


# -- constants --------------------------------------------------------------------


def _require_n(chain: PropagationChain, n: int, l: int):
    if chain.levels[n].phi is None:
        raise ValueError("chain has no parabolic family")
    bad = _n_admissible(chain, n, l)
    if bad:
        raise FamilyViolation("N", {"ranks": [n, l], "nodes": bad}, "nilradicals do not form a direct system")


def density_at(chain: PropagationChain, n: int):
    lv = chain.levels[n]
    return plancherel_data(lv.decomp, build_constants(lv.system)).density


def restrict_gamma(chain: PropagationChain, l: int, n: int, gamma: Mapping[str, object]) -> dict:
    """gamma on s_(Phi,l) (by z-variable name) restricted to s_(Phi,n).

    A z-root at level n whose image is not a z-root at level l gets value 0.
    """
    emb = chain.embedding(n, l)
    zl = {variable_name(r) for g in chain.decomposition(l).groups for r in g.z}
    out = {}
    for g in chain.decomposition(n).groups:
        for r in g.z:
            name = variable_name(emb(r))
            out[variable_name(r)] = Fraction(gamma[name]) if name in zl else Fraction(0)
    return out


def renormalization_ratio(chain: PropagationChain, n: int, l: int, gamma: Mapping[str, object]) -> Fraction:
    """|P_n(gamma_n)| / |P_l(gamma_l)| with gamma_n the restriction of gamma_l = gamma."""
    _require_n(chain, n, l)
    if n == l:
        p = density_at(chain, l).evaluate(_only_z(chain, l, gamma))
        if p == 0:
            raise SingularParameter(f"P vanishes at gamma on rank {l}")
        return Fraction(1)
    pl = density_at(chain, l).evaluate(_only_z(chain, l, gamma))
    if pl == 0:
        raise SingularParameter(f"P vanishes at gamma on rank {l}")
    pn = density_at(chain, n).evaluate(restrict_gamma(chain, l, n, gamma))
    return abs(Fraction(pn)) / abs(Fraction(pl))


def _only_z(chain: PropagationChain, l: int, gamma: Mapping[str, object]) -> dict:
    names = {variable_name(r) for g in chain.decomposition(l).groups for r in g.z}
    missing = names - set(gamma)
    if missing:
        raise KeyError(f"gamma lacks values for {sorted(missing)}")
    return {k: Fraction(gamma[k]) for k in names}


def inversion_constant(chain: PropagationChain, n: int) -> int:
    for a, b in zip(chain.ranks, chain.ranks[1:]):
        _require_n(chain, a, b)
    return stepwise_constant(chain.decomposition(n))
