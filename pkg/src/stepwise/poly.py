"""Exact sparse multivariate polynomials over the integers, Pfaffians and determinants."""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArityError, NotAntisymmetric, OddDimension, StructureViolation

# Monomials are tuples of (variable, exponent) sorted by variable name, so
# equal polynomials have equal term dicts whatever order variables arrived in.


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Polynomial:
    __slots__ = ("terms", "variables", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None = None, variables: Iterable[str] = ()):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                if not isinstance(c, int):
                    raise TypeError(f"integer coefficients only, got {c!r}")
                clean[tuple(sorted(mono))] = c
        used = {v for mono in clean for v, _ in mono}
        self.terms: dict[tuple, int] = clean
        self.variables: tuple[str, ...] = tuple(sorted(set(variables) | used))
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c: int, variables: Iterable[str] = ()) -> Polynomial:
        return cls({(): int(c)}, variables)

    @classmethod
    def var(cls, name: str, variables: Iterable[str] = ()) -> Polynomial:
        return cls({((name, 1),): 1}, variables)

    @staticmethod
    def coerce(x) -> Polynomial:
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, int):
            return Polynomial.const(x)
        raise TypeError(f"cannot treat {x!r} as an integer polynomial")

    # -- arithmetic ---------------------------------------------------------

    def _vars_with(self, other: Polynomial) -> set:
        return set(self.variables) | set(other.variables)

    def __add__(self, other) -> Polynomial:
        other = Polynomial.coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Polynomial(t, self._vars_with(other))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self.terms.items()}, self.variables)

    def __sub__(self, other) -> Polynomial:
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return Polynomial.coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        other = Polynomial.coerce(other)
        t: dict[tuple, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Polynomial(t, self._vars_with(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Polynomial.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def variables_used(self) -> frozenset[str]:
        return frozenset(v for mono in self.terms for v, e in mono if e)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e for _, e in m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e for _, e in m) for m in self.terms}) <= 1

    def content(self) -> int:
        from math import gcd

        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def evaluate(self, point):
        """Exact value at ``point``: a mapping name -> number, or a sequence
        aligned with ``self.variables``. Returns a Fraction (an int when exact
        inputs are integers)."""
        if isinstance(point, Mapping):
            unknown = set(point) - set(self.variables)
            missing = self.variables_used() - set(point)
            if unknown or missing:
                raise ArityError(
                    f"point does not match variables {self.variables}: "
                    f"unknown {sorted(unknown)}, missing {sorted(missing)}"
                )
            values = {k: Fraction(v) for k, v in point.items()}
        else:
            seq = list(point)
            if len(seq) != len(self.variables):
                raise ArityError(f"expected {len(self.variables)} values, got {len(seq)}")
            values = {k: Fraction(v) for k, v in zip(self.variables, seq)}
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            for v, e in mono:
                term *= values[v] ** e
            total += term
        return total

    # -- output -------------------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(e for _, e in t[0]), t[0]))

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self._sorted_terms()):
            body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            mag = abs(c)
            if body:
                s = body if mag == 1 else f"{mag}*{body}"
            else:
                s = str(mag)
            if i == 0:
                parts.append(s if c > 0 else f"-{s}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {s}")
        return " ".join(parts)

    __str__ = text

    def __repr__(self) -> str:
        return f"Polynomial({self.text()!r})"

    def to_json(self) -> list:
        return [{"coeff": c, "monomial": {v: e for v, e in mono}} for mono, c in self._sorted_terms()]

    @classmethod
    def from_json(cls, data: Sequence[Mapping], variables: Iterable[str] = ()) -> Polynomial:
        return cls({tuple(sorted(t["monomial"].items())): int(t["coeff"]) for t in data}, variables)


class AntisymmetricPolyMatrix:
    """Square matrix of Polynomials with M = -M^T and zero diagonal."""

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[Polynomial.coerce(x) for x in row] for row in entries]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise NotAntisymmetric("matrix is not square")
        for i in range(n):
            if rows[i][i]:
                raise NotAntisymmetric(f"nonzero diagonal entry at {i}")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise NotAntisymmetric(f"entries ({i},{j}) and ({j},{i}) are not opposite")
        self.entries = rows

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def _verify_default() -> bool:
    return os.environ.get("STEPWISE_VERIFY_PF", "") not in ("", "0")


def pfaffian(M, verify: bool | None = None) -> Polynomial:
    """Pfaffian by first-row expansion with memoization on the remaining index set.

    With ``verify`` (default: environment variable STEPWISE_VERIFY_PF set),
    Pf(M)^2 is compared against an independent determinant and a mismatch
    raises StructureViolation.
    """
    if not isinstance(M, AntisymmetricPolyMatrix):
        M = AntisymmetricPolyMatrix(M)
    n = M.dimension
    if n % 2:
        raise OddDimension(f"Pfaffian of a {n}x{n} matrix")
    nz = [[(j, M.entries[i][j]) for j in range(n) if j != i and M.entries[i][j]] for i in range(n)]
    memo: dict[int, Polynomial] = {0: Polynomial.const(1)}

    def pf(mask: int) -> Polynomial:
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = Polynomial()
        for j, a in nz[i]:
            if not rest >> j & 1:
                continue
            # sign: (-1)^(number of indices in rest below j)
            below = bin(rest & ((1 << j) - 1)).count("1")
            sub = pf(rest & ~(1 << j))
            if sub:
                term = a * sub
                total = total - term if below % 2 else total + term
        memo[mask] = total
        return total

    result = pf((1 << n) - 1)
    allvars = set()
    for row in M.entries:
        for x in row:
            allvars |= set(x.variables)
    result = Polynomial(result.terms, allvars)
    if verify if verify is not None else _verify_default():
        if result * result != det_poly(M.entries):
            raise StructureViolation("Pf^2 != det")
    return result


def det_poly(entries: Sequence[Sequence]) -> Polynomial:
    """Determinant of a polynomial matrix by Laplace expansion along rows,
    memoized on the set of columns still available."""
    rows = [[Polynomial.coerce(x) for x in row] for row in entries]
    n = len(rows)
    nz = [[(j, rows[i][j]) for j in range(n) if rows[i][j]] for i in range(n)]
    memo: dict[int, Polynomial] = {}

    def d(k: int, cols: int) -> Polynomial:
        if k == n:
            return Polynomial.const(1)
        if cols in memo:
            return memo[cols]
        total = Polynomial()
        for j, a in nz[k]:
            if not cols >> j & 1:
                continue
            below = bin(cols & ((1 << j) - 1)).count("1")
            sub = d(k + 1, cols & ~(1 << j))
            if sub:
                term = a * sub
                total = total - term if below % 2 else total + term
        memo[cols] = total
        return total

    return d(0, (1 << n) - 1)


def det_bareiss(entries: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free Gaussian elimination."""
    a = [[int(x) for x in row] for row in entries]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1
