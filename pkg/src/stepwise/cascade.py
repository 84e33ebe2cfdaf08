"""Maximal strongly orthogonal cascade and the layer partition of the positive roots."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import LayerMismatch, UnsupportedForm
from .rootsys import RestrictedRootSystem, Root


@dataclass(frozen=True)
class Cascade:
    """``betas[r-1]`` is beta_r; ``layer_sets[r-1]`` is the layer root set of beta_r.

    ``sigma[r-1]`` maps each root of layer r to its partner ``beta_r - alpha``.
    ``simple_sets[r-1]`` holds the simple roots orthogonal to beta_1..beta_(r-1).
    ``dominance`` lists pairs (s, r), s > r, with beta_s above beta_r in the
    partial order of the remark after the inter-center lemma; informational only.
    """

    system: RestrictedRootSystem
    betas: tuple[Root, ...]
    layer_sets: tuple[tuple[Root, ...], ...]
    sigma: tuple[dict, ...]
    simple_sets: tuple[tuple[Root, ...], ...]
    dominance: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.betas)

    def layer_of(self, alpha: Root) -> int | None:
        """1-based cascade index r with alpha in layer r or alpha == beta_r."""
        for r, (beta, layer) in enumerate(zip(self.betas, self.layer_sets), start=1):
            if alpha == beta or alpha in self.sigma[r - 1]:
                return r
        return None

    def to_dict(self) -> dict:
        return {
            "betas": [list(b.simple_coords) for b in self.betas],
            "layers": [[list(a.simple_coords) for a in layer] for layer in self.layer_sets],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _below(system: RestrictedRootSystem, top: Root, pool) -> frozenset[Root]:
    return frozenset(
        a for a in pool if all(t >= c for t, c in zip(top.simple_coords, a.simple_coords))
    )


def build_cascade(system: RestrictedRootSystem) -> Cascade:
    """Cascade down from the highest root.

    Ties between maximal candidates (several simple factors after removing the
    roots not orthogonal to the chosen betas) go to the lexicographically
    largest simple-coordinate vector, which is always maximal in the root order.
    """
    candidates = [r for r in system.positive if r in system.nonmultipliable]
    betas: list[Root] = []
    domains: list[frozenset[Root]] = []
    while True:
        ortho = [a for a in candidates if all(system.pairing(a, b) == 0 for b in betas)]
        if not ortho:
            break
        pool = [a for a in system.positive if all(system.pairing(a, b) == 0 for b in betas)]
        beta = max(ortho, key=lambda r: r.simple_coords)
        domains.append(_below(system, beta, pool))
        betas.append(beta)

    positive_set = set(system.positive)
    assigned: set[Root] = set()
    layers: list[tuple[Root, ...]] = []
    sigmas: list[dict] = []
    for beta in betas:
        layer = tuple(
            a
            for a in system.positive
            if a not in assigned and a not in betas and system.diff_root(beta, a) in positive_set
        )
        assigned.update(layer)
        layers.append(layer)
        sigmas.append({a: system.diff_root(beta, a) for a in layer})

    simple_sets = []
    for r in range(len(betas)):
        simple_sets.append(
            tuple(p for p in system.simple if all(system.pairing(p, b) == 0 for b in betas[:r]))
        )
    dominance = tuple(
        (s + 1, r + 1)
        for r in range(len(betas))
        for s in range(r + 1, len(betas))
        if domains[s] <= domains[r]
    )
    return Cascade(system, tuple(betas), tuple(layers), tuple(sigmas), tuple(simple_sets), dominance)


def sigma_r(cascade: Cascade, r: int, alpha: Root) -> Root:
    """The involution alpha -> -s_(beta_r)(alpha) on layer r (1-based r)."""
    if not 1 <= r <= cascade.m or alpha not in cascade.sigma[r - 1]:
        raise LayerMismatch(f"{alpha.label()} is not in layer {r}")
    return -cascade.system.reflect(cascade.betas[r - 1], alpha)


def heisenberg_check(cascade: Cascade, r: int) -> bool:
    """True iff the only root sums inside layer r equal beta_r."""
    system = cascade.system
    if not system.is_split:
        raise UnsupportedForm("heisenberg_check needs multiplicity-one root spaces")
    beta = cascade.betas[r - 1]
    layer = cascade.layer_sets[r - 1]
    for a in layer:
        for b in layer:
            s = system.sum_root(a, b)
            if s is not None and s != beta:
                return False
    return True
