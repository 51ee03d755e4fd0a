"""Arithmetic in A = R(x; sigma, delta) and in the inverse-polynomial ring R[x^-1].

Elements of A are kept in left normal form ``r0 + r1 x + ... + rk x^k`` with the
commutation ``x r = sigma(r) x + x delta(r) x``, which under local nilpotency of
delta expands to the finite sum ``sum_i sigma(delta^(i-1)(r)) x^i``.

Moving x^-1 past a coefficient uses the dual maps ``sigma' = sigma^-1`` and
``delta' = -delta sigma^-1``::

    x^-k r = sum_{i=0..k} f_k^i(r) x^-i

where f_k^i is the sum of all words with i letters sigma' and k-i letters
delta'.  The operators are tabulated by the recurrence
``f_{j+1}^i = sigma' f_j^{i-1} + delta' f_j^i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError, LawViolationError
from .rings import (DualPair, FiniteRing, RingMap, dual_maps, nilpotency_table,
                    verify_endomorphism, verify_sigma_derivation)

DEFAULT_OPERATOR_DEPTH = 8


def _trim(coeffs, zero):
    coeffs = list(int(c) for c in coeffs)
    while coeffs and coeffs[-1] == zero:
        coeffs.pop()
    return tuple(coeffs)


def _render(coeffs, ring: FiniteRing, var: str) -> str:
    if not coeffs:
        return "0"
    parts = []
    for k, c in enumerate(coeffs):
        if c == ring.zero:
            continue
        lab = ring.label(c)
        if k == 0:
            parts.append(lab)
            continue
        mono = var if k == 1 else f"{var}^{k}" if var == "x" else f"x^-{k}"
        parts.append(f"({lab})*{mono}" if "+" in lab or " " in lab else f"{lab}*{mono}")
    return " + ".join(parts)


class OperatorTable:
    """Memoized maps f_j^i : R -> R for 0 <= i <= j <= depth.

    The whole table is filled at construction time, so concurrent readers only
    ever see a complete, immutable set of arrays.
    """

    def __init__(self, dual: DualPair, depth: int = DEFAULT_OPERATOR_DEPTH):
        ring = dual.sigma.ring
        self.depth = depth
        self.ring = ring
        s, d = dual.sigma.table, dual.delta.table
        zero = np.full(ring.size, ring.zero, dtype=np.int64)
        rows = [[np.arange(ring.size, dtype=np.int64)]]
        for j in range(depth):
            prev = rows[-1]
            row = []
            for i in range(j + 2):
                left = s[prev[i - 1]] if i >= 1 else zero
                right = d[prev[i]] if i <= j else zero
                row.append(ring.add[left, right])
            rows.append(row)
        for row in rows:
            for arr in row:
                arr.setflags(write=False)
        self._rows = rows

    def __call__(self, j: int, i: int) -> np.ndarray:
        if not (0 <= i <= j):
            raise IndexError(f"f_j^i needs 0 <= i <= j, got j={j}, i={i}")
        if j > self.depth:
            raise IndexError(f"f_{j}^{i} exceeds the configured operator depth {self.depth}")
        return self._rows[j][i]


class SkewOreRing:
    """The ring A = R(x; sigma, delta) over a finite coefficient ring.

    ``sigma`` must be an automorphism and ``delta`` a locally nilpotent
    sigma-derivation; both are re-verified here.
    """

    def __init__(self, ring: FiniteRing, sigma: RingMap, delta: RingMap,
                 operator_depth: int = DEFAULT_OPERATOR_DEPTH):
        for rep in (verify_endomorphism(ring, sigma), verify_sigma_derivation(ring, sigma, delta)):
            if not rep.ok:
                raise LawViolationError(f"{rep.subject} law {rep.violations[0].law} fails", rep)
        if not sigma.bijective:
            raise InvalidSpecError("sigma must be an automorphism")
        self.ring = ring
        self.sigma = sigma
        self.delta = delta
        if delta.nilpotency is None:
            delta.nilpotency = nilpotency_table(delta)
        self.nilpotency = delta.nilpotency
        self.dual = dual_maps(sigma, delta)
        self.operators = OperatorTable(self.dual, operator_depth)
        self._xpow_cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def __repr__(self):
        return f"SkewOreRing({self.ring.family}, sigma={self.sigma.name}, delta={self.delta.name})"

    @property
    def commuting(self) -> bool:
        """True when sigma o delta = delta o sigma."""
        return bool(np.array_equal(self.sigma.compose(self.delta), self.delta.compose(self.sigma)))

    # -- constructors -----------------------------------------------------

    def poly(self, coeffs) -> "SkewPoly":
        return SkewPoly(self, _trim([self.ring.element(c) for c in coeffs], self.ring.zero))

    def const(self, r: int) -> "SkewPoly":
        return self.poly([r])

    def x(self, k: int = 1) -> "SkewPoly":
        return self.poly([self.ring.zero] * k + [self.ring.one])

    def inv_poly(self, coeffs) -> "InverseRingPoly":
        return InverseRingPoly(self, _trim([self.ring.element(c) for c in coeffs], self.ring.zero))

    def inv_monomial(self, r: int, k: int) -> "InverseRingPoly":
        return self.inv_poly([self.ring.zero] * k + [r])

    # -- A ------------------------------------------------------------------

    def commute_right(self, r: int) -> "SkewPoly":
        """x r = sigma(r) x + sigma(delta(r)) x^2 + ... + sigma(delta^(n-1)(r)) x^n."""
        ring = self.ring
        n = int(self.nilpotency[r])
        coeffs = [ring.zero]
        cur = int(r)
        for _ in range(n):
            coeffs.append(int(self.sigma.table[cur]))
            cur = int(self.delta.table[cur])
        return SkewPoly(self, _trim(coeffs, ring.zero))

    def _xpow_times(self, k: int, r: int) -> tuple[int, ...]:
        """Normal form of x^k r, rewriting the leftmost x first."""
        key = (k, r)
        hit = self._xpow_cache.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        if k == 0:
            out = _trim([r], ring.zero)
        else:
            # x^k r = x^(k-1) (x r) = sum_l (x^(k-1) c_l) x^l
            acc: list[int] = []
            for l, c in enumerate(self.commute_right(r).coeffs):
                if c == ring.zero:
                    continue
                acc = _add_coeffs(ring, acc, (ring.zero,) * l + self._xpow_times(k - 1, c))
            out = _trim(acc, ring.zero)
        self._xpow_cache[key] = out
        return out

    def mul(self, f: "SkewPoly", g: "SkewPoly") -> "SkewPoly":
        ring = self.ring
        acc: list[int] = []
        for i, a in enumerate(f.coeffs):
            if a == ring.zero:
                continue
            for j, b in enumerate(g.coeffs):
                if b == ring.zero:
                    continue
                term = self._xpow_times(i, b)
                shifted = (ring.zero,) * j + tuple(int(ring.mul[a, c]) for c in term)
                acc = _add_coeffs(ring, acc, shifted)
        return SkewPoly(self, _trim(acc, ring.zero))

    # -- R[x^-1] --------------------------------------------------------------

    def f_op(self, j: int, i: int) -> np.ndarray:
        return self.operators(j, i)

    def inv_monomial_times(self, k: int, r: int) -> "InverseRingPoly":
        """x^-k r = sum_i f_k^i(r) x^-i."""
        if k < 0:
            raise IndexError("depth must be non-negative")
        return InverseRingPoly(self, _trim([self.operators(k, i)[r] for i in range(k + 1)], self.ring.zero))

    def inv_poly_mul(self, f: "InverseRingPoly", g: "InverseRingPoly") -> "InverseRingPoly":
        """(r x^-k)(s x^-k') = sum_i r f_k^i(s) x^-(i+k'), extended bilinearly."""
        ring = self.ring
        acc: list[int] = []
        for k, r in enumerate(f.coeffs):
            if r == ring.zero:
                continue
            for kk, s in enumerate(g.coeffs):
                if s == ring.zero:
                    continue
                terms = [ring.zero] * (k + kk + 1)
                for i in range(k + 1):
                    terms[i + kk] = int(ring.mul[r, self.operators(k, i)[s]])
                acc = _add_coeffs(ring, acc, terms)
        return InverseRingPoly(self, _trim(acc, ring.zero))

    def collapsed_exponent_product(self, r: int, k: int, s: int, kk: int) -> "InverseRingPoly":
        """Variant that places every summand r f_k^i(s) at x^-(k+k').

        Kept only so reports can show where it departs from ``inv_poly_mul``.
        """
        ring = self.ring
        total = ring.sum(int(ring.mul[r, self.operators(k, i)[s]]) for i in range(k + 1))
        return self.inv_monomial(total, k + kk)


def _add_coeffs(ring: FiniteRing, a, b) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [ring.zero] * (n - len(a))
    b = list(b) + [ring.zero] * (n - len(b))
    return [int(ring.add[x, y]) for x, y in zip(a, b)]


@dataclass(frozen=True, eq=False)
class SkewPoly:
    """r0 + r1 x + ... + rk x^k in left normal form (trailing zeros trimmed)."""

    parent: SkewOreRing
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and other.parent is self.parent and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        ring = self.parent.ring
        return SkewPoly(self.parent, _trim(_add_coeffs(ring, self.coeffs, other.coeffs), ring.zero))

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        return self.parent.mul(self, other)

    def __repr__(self):
        return _render(self.coeffs, self.parent.ring, "x")


@dataclass(frozen=True, eq=False)
class InverseRingPoly:
    """r0 + r1 x^-1 + ... + rk x^-k in R[x^-1]."""

    parent: SkewOreRing
    coeffs: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, InverseRingPoly) and other.parent is self.parent and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "InverseRingPoly") -> "InverseRingPoly":
        ring = self.parent.ring
        return InverseRingPoly(self.parent, _trim(_add_coeffs(ring, self.coeffs, other.coeffs), ring.zero))

    def __mul__(self, other: "InverseRingPoly") -> "InverseRingPoly":
        return self.parent.inv_poly_mul(self, other)

    def __repr__(self):
        return _render(self.coeffs, self.parent.ring, "x^-1")
