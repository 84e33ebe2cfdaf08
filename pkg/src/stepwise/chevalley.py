"""Chevalley structure constants N_{a,b} for split classical Lie algebras.

Signs are fixed by declaring N = +(p+1) on every extraspecial pair; all other
constants follow from the standard identities (Carter, Simple Groups of Lie
Type, 4.1-4.2). Arithmetic is exact and every constant is checked to be an
integer of absolute value p+1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .errors import CartanDirection, NotARoot, StructureViolation, UnsupportedForm
from .rootsys import Family, RestrictedRootSystem, Root


@dataclass(frozen=True)
class StructureTable:
    system: RestrictedRootSystem
    constants: dict  # (Root, Root) -> int, only for pairs whose sum is a root
    extraspecial: dict  # xi -> (alpha, beta)

    def N(self, a: Root, b: Root) -> int:
        """N_{a,b}; 0 when a+b is not a root (including a == b)."""
        if a == -b:
            raise CartanDirection(f"[x_{a.label()}, x_{(-a).label()}] lies in the Cartan subalgebra")
        return self.constants.get((a, b), 0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "beta", "N"])
        rows = sorted(
            (a.simple_coords, b.simple_coords, n) for (a, b), n in self.constants.items()
        )
        for a, b, n in rows:
            w.writerow([" ".join(map(str, a)), " ".join(map(str, b)), n])
        return buf.getvalue()


def build_constants(system: RestrictedRootSystem) -> StructureTable:
    if not system.is_split:
        raise UnsupportedForm("structure constants need multiplicity-one root spaces")
    if system.family is Family.BC:
        raise UnsupportedForm("BC is not the root system of a split Lie algebra")

    sq = {r: system.pairing(r, r) for r in system.roots}
    order = {r: i for i, r in enumerate(system.positive)}
    pos: dict[tuple[Root, Root], Fraction] = {}
    extraspecial: dict[Root, tuple[Root, Root]] = {}

    def n_any(a: Root, b: Root) -> Fraction:
        """N_{a,b} for arbitrary signs, from positive pairs of lower height."""
        c = system.sum_root(a, b)
        if c is None or a == -b:
            return Fraction(0)
        if a.is_positive() and b.is_positive():
            return pos[(a, b)]
        if not a.is_positive() and not b.is_positive():
            return -pos[(-a, -b)]
        if not a.is_positive():
            return -n_any(b, a)
        # a > 0 > b; write b = -bb
        bb = -b
        if c.is_positive():
            # a = bb + c; triple (a, -bb, -c) sums to zero
            return -sq[c] / sq[a] * pos[(bb, c)]
        # bb = a + cc with cc = -c > 0; triple (a, -bb, cc) sums to zero
        cc = -c
        return sq[cc] / sq[bb] * pos[(cc, a)]

    for xi in system.positive:
        if xi.height == 1:
            continue
        splits = [a for a in system.positive if system.diff_root(xi, a) in order and order[a] < order[xi]]
        splits = [a for a in splits if system.diff_root(xi, a).is_positive()]
        a1 = min(splits, key=order.__getitem__)
        b1 = system.diff_root(xi, a1)
        p, _ = system.string(a1, b1)
        extraspecial[xi] = (a1, b1)
        n1 = Fraction(p + 1)
        pos[(a1, b1)] = n1
        pos[(b1, a1)] = -n1
        for a in splits:
            b = system.diff_root(xi, a)
            if (a, b) in pos:
                continue
            t1 = Fraction(0)
            if system.diff_root(b, a1) is not None:
                t1 = n_any(b, -a1) * n_any(a, -b1) / sq[system.diff_root(b, a1)]
            t2 = Fraction(0)
            if system.diff_root(a, a1) is not None:
                t2 = n_any(-a1, a) * n_any(b, -b1) / sq[system.diff_root(a, a1)]
            val = sq[xi] / n1 * (t1 + t2)
            pos[(a, b)] = val
            pos[(b, a)] = -val

    constants: dict[tuple[Root, Root], int] = {}
    for a in system.roots:
        for b in system.roots:
            if a == -b or system.sum_root(a, b) is None:
                continue
            v = n_any(a, b)
            p, _ = system.string(a, b)
            if v.denominator != 1 or abs(v) != p + 1:
                raise StructureViolation(f"N({a.label()}, {b.label()}) = {v}, expected +-{p + 1}")
            constants[(a, b)] = int(v)
    return StructureTable(system, constants, extraspecial)


def _as_combination(x) -> dict:
    if isinstance(x, dict):
        return x
    root, coeff = x
    return {root: coeff}


def bracket(table: StructureTable, x, y) -> dict:
    """Bracket of root-vector combinations.

    ``x`` and ``y`` are ``(root, coefficient)`` pairs or ``{root: coefficient}``
    dicts. The result maps roots to coefficients with zero terms dropped.
    A pair of opposite roots raises CartanDirection.
    """
    system = table.system
    out: dict[Root, object] = {}
    for a, ca in _as_combination(x).items():
        for b, cb in _as_combination(y).items():
            for r in (a, b):
                if not system.is_root(r.simple_coords):
                    raise NotARoot(f"{r.simple_coords} is not a root of {system.type}")
            if ca == 0 or cb == 0:
                continue
            n = table.N(a, b)
            if n:
                s = system.sum_root(a, b)
                out[s] = out.get(s, 0) + n * ca * cb
    return {k: v for k, v in out.items() if v != 0}
