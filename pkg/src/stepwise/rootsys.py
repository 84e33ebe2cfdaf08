"""Restricted root systems of classical type.

Realizations (``e_i`` the standard basis):

* ``A_n``: ``e_i - e_j`` in the sum-zero hyperplane of Q^(n+1), with
  ``psi_i = e_i - e_(i+1)`` read left to right.
* ``B_n``, ``C_n``, ``BC_n``: ``psi_1`` is the right endpoint of the Dynkin
  diagram, ``psi_1 = e_1`` (B, BC) or ``2 e_1`` (C), and
  ``psi_i = e_i - e_(i-1)`` for ``i >= 2``.  Adding nodes on the left then
  just adds coordinates, so rank-n data embeds verbatim into rank l >= n.
* ``D_n``: ``psi_1 = e_2 - e_1``, ``psi_2 = e_2 + e_1`` (the fork),
  ``psi_i = e_i - e_(i-1)`` for ``i >= 3``.

Positive roots for B/C/D/BC are therefore ``e_i +- e_j`` with ``i > j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import IncompleteMultiplicity, InvalidRank, NotARoot


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    BC = "BC"


MIN_RANK = {Family.A: 1, Family.B: 2, Family.C: 3, Family.D: 4, Family.BC: 2}


@dataclass(frozen=True)
class RootSystemType:
    family: Family
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not isinstance(self.rank, int) or self.rank < MIN_RANK[self.family]:
            raise InvalidRank(
                f"{self.family.value}_{self.rank}: rank must be >= {MIN_RANK[self.family]}"
            )

    def __str__(self) -> str:
        return f"{self.family.value}{self.rank}"


@dataclass(frozen=True, order=True)
class Root:
    """A root, identified by its coefficients over the simple roots."""

    simple_coords: tuple[int, ...]
    ambient: tuple[Fraction, ...] = field(compare=False, repr=False)

    @property
    def height(self) -> int:
        return sum(self.simple_coords)

    def is_positive(self) -> bool:
        return all(c >= 0 for c in self.simple_coords)

    def __neg__(self) -> Root:
        return Root(tuple(-c for c in self.simple_coords), tuple(-a for a in self.ambient))

    def label(self) -> str:
        """Human-readable form such as ``psi1+2psi2``."""
        parts = []
        for i, c in enumerate(self.simple_coords, start=1):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{mag}psi{i}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __str__(self) -> str:
        return self.label()


def _unit(dim: int, i: int, scale: int = 1) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * dim
    v[i] = Fraction(scale)
    return tuple(v)


def _add(*vs: Sequence[Fraction], coeffs: Sequence[int] | None = None) -> tuple[Fraction, ...]:
    coeffs = coeffs or [1] * len(vs)
    out = [Fraction(0)] * len(vs[0])
    for c, v in zip(coeffs, vs):
        for k, x in enumerate(v):
            out[k] += c * x
    return tuple(out)


def _simple_ambient(family: Family, n: int) -> tuple[int, list[tuple[Fraction, ...]]]:
    if family is Family.A:
        dim = n + 1
        return dim, [_add(_unit(dim, i), _unit(dim, i + 1), coeffs=[1, -1]) for i in range(n)]
    dim = n
    simple = []
    for i in range(n):
        if i == 0:
            if family is Family.C:
                simple.append(_unit(dim, 0, 2))
            elif family is Family.D:
                simple.append(_add(_unit(dim, 1), _unit(dim, 0), coeffs=[1, -1]))
            else:
                simple.append(_unit(dim, 0))
        elif i == 1 and family is Family.D:
            simple.append(_add(_unit(dim, 1), _unit(dim, 0)))
        else:
            simple.append(_add(_unit(dim, i), _unit(dim, i - 1), coeffs=[1, -1]))
    return dim, simple


def _all_ambient(family: Family, n: int) -> list[tuple[Fraction, ...]]:
    if family is Family.A:
        dim = n + 1
        return [
            _add(_unit(dim, i), _unit(dim, j), coeffs=[1, -1])
            for i in range(dim)
            for j in range(dim)
            if i != j
        ]
    dim = n
    out = []
    for i in range(dim):
        for j in range(dim):
            if i == j:
                continue
            for s in (1, -1):
                for t in (1, -1):
                    if i < j:
                        out.append(_add(_unit(dim, i), _unit(dim, j), coeffs=[s, t]))
        for s in (1, -1):
            if family in (Family.B, Family.BC):
                out.append(_unit(dim, i, s))
            if family in (Family.C, Family.BC):
                out.append(_unit(dim, i, 2 * s))
    return out


def _solve_coords(simple: list[tuple[Fraction, ...]], v: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Exact coefficients c with sum c_i simple_i = v (the simple roots are independent)."""
    n = len(simple)
    dim = len(v)
    # augmented system: columns = simple roots, rows = ambient coordinates
    rows = [[simple[i][k] for i in range(n)] + [v[k]] for k in range(dim)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((k for k in range(r, dim) if rows[k][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for k in range(dim):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[k][n] != 0 for k in range(r, dim)):
        raise NotARoot(f"{v} is not in the span of the simple roots")
    out = [Fraction(0)] * n
    for k, c in enumerate(pivots):
        out[c] = rows[k][n]
    return tuple(out)


def dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


class RestrictedRootSystem:
    """Full root system with multiplicities; immutable after construction."""

    def __init__(self, type: RootSystemType, mult: Mapping[tuple[int, ...], int] | None = None):
        self.type = type
        dim, simple_amb = _simple_ambient(type.family, type.rank)
        self.ambient_dim = dim
        roots = []
        for v in _all_ambient(type.family, type.rank):
            c = _solve_coords(simple_amb, v)
            if any(x.denominator != 1 for x in c):
                raise AssertionError(f"non-integral root coordinates {c}")
            coords = tuple(int(x) for x in c)
            if not (all(x >= 0 for x in coords) or all(x <= 0 for x in coords)):
                raise AssertionError(f"mixed-sign root {coords}")
            roots.append(Root(coords, v))
        self._by_coords: dict[tuple[int, ...], Root] = {r.simple_coords: r for r in roots}
        self.simple: tuple[Root, ...] = tuple(
            self._by_coords[tuple(int(i == k) for i in range(type.rank))] for k in range(type.rank)
        )
        self.positive: tuple[Root, ...] = tuple(
            sorted((r for r in roots if r.is_positive()), key=lambda r: (r.height, r.simple_coords))
        )
        self.roots: tuple[Root, ...] = self.positive + tuple(-r for r in self.positive)
        self._by_coords = {r.simple_coords: r for r in self.roots}

        if mult is None:
            self.mult = {r: 1 for r in self.positive}
        else:
            missing = [r for r in self.positive if r.simple_coords not in mult]
            if missing:
                raise IncompleteMultiplicity(
                    f"no multiplicity for {', '.join(r.label() for r in missing)}"
                )
            self.mult = {r: int(mult[r.simple_coords]) for r in self.positive}
            if any(m < 1 for m in self.mult.values()):
                raise IncompleteMultiplicity("multiplicities must be positive integers")
        self.nonmultipliable: frozenset[Root] = frozenset(
            r for r in self.roots if not self.is_root(tuple(2 * c for c in r.simple_coords))
        )

    # -- queries -----------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def family(self) -> Family:
        return self.type.family

    @cached_property
    def is_split(self) -> bool:
        return all(m == 1 for m in self.mult.values())

    def multiplicity(self, root: Root) -> int:
        return self.mult[root if root.is_positive() else -root]

    def pairing(self, a: Root, b: Root) -> Fraction:
        return dot(a.ambient, b.ambient)

    def root(self, coords: Iterable[int]) -> Root:
        key = tuple(coords)
        try:
            return self._by_coords[key]
        except KeyError:
            raise NotARoot(f"{key} is not a root of {self.type}") from None

    def is_root(self, v: Iterable[int]) -> bool:
        return tuple(v) in self._by_coords

    def sum_root(self, a: Root, b: Root) -> Root | None:
        return self._by_coords.get(tuple(x + y for x, y in zip(a.simple_coords, b.simple_coords)))

    def diff_root(self, a: Root, b: Root) -> Root | None:
        return self._by_coords.get(tuple(x - y for x, y in zip(a.simple_coords, b.simple_coords)))

    def cartan_integer(self, a: Root, b: Root) -> Fraction:
        """2<a,b>/<b,b>."""
        return 2 * self.pairing(a, b) / self.pairing(b, b)

    def reflect(self, beta: Root, alpha: Root) -> Root:
        if alpha.simple_coords not in self._by_coords:
            raise NotARoot(f"{alpha.simple_coords} is not a root of {self.type}")
        if beta.simple_coords not in self._by_coords:
            raise NotARoot(f"{beta.simple_coords} is not a root of {self.type}")
        k = self.cartan_integer(alpha, beta)
        coords = tuple(a - k * b for a, b in zip(alpha.simple_coords, beta.simple_coords))
        if any(Fraction(c).denominator != 1 for c in coords):
            raise AssertionError("reflection left the root lattice")
        return self.root(int(c) for c in coords)

    def string(self, alpha: Root, beta: Root) -> tuple[int, int]:
        """(p, q) with beta - p*alpha, ..., beta + q*alpha the alpha-string through beta."""
        p = 0
        while self.is_root(b - (p + 1) * a for a, b in zip(alpha.simple_coords, beta.simple_coords)):
            p += 1
        q = 0
        while self.is_root(b + (q + 1) * a for a, b in zip(alpha.simple_coords, beta.simple_coords)):
            q += 1
        return p, q

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "rank": self.rank,
            "simple": [list(r.simple_coords) for r in self.simple],
            "positive": [
                {"coords": list(r.simple_coords), "mult": self.mult[r]} for r in self.positive
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> RestrictedRootSystem:
        t = RootSystemType(Family(data["family"]), int(data["rank"]))
        mult = {tuple(e["coords"]): int(e.get("mult", 1)) for e in data.get("positive", [])}
        return cls(t, mult or None)

    def __repr__(self) -> str:
        return f"RestrictedRootSystem({self.type})"


def build_system(
    type: RootSystemType | tuple[str, int],
    mult_preset: str | Mapping[tuple[int, ...], int] = "split_ones",
) -> RestrictedRootSystem:
    """Build the positive system, pairing and multiplicities for a classical type.

    ``mult_preset`` is ``"split_ones"`` (every root space one dimensional) or
    a mapping from positive-root simple coordinates to multiplicities.
    """
    if not isinstance(type, RootSystemType):
        type = RootSystemType(Family(type[0]), int(type[1]))
    if isinstance(mult_preset, str):
        if mult_preset != "split_ones":
            raise ValueError(f"unknown multiplicity preset {mult_preset!r}")
        return RestrictedRootSystem(type)
    return RestrictedRootSystem(type, mult_preset)


def reflect(system: RestrictedRootSystem, beta: Root, alpha: Root) -> Root:
    return system.reflect(beta, alpha)


def is_root(system: RestrictedRootSystem, v: Iterable[int]) -> bool:
    return system.is_root(v)


def sum_root(system: RestrictedRootSystem, a: Root, b: Root) -> Root | None:
    return system.sum_root(a, b)
