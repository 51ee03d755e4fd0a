"""Finite coefficient rings and the maps sigma, delta that parameterize R(x; sigma, delta).

Elements are canonical indices ``0..n-1``.  Family rings use a little-endian
positional encoding of their coordinate tuple:

* ``Z/n``                 index = residue
* ``GF(p^e)``             coefficients of ``a_0 + a_1 a + ... `` -> sum a_i p^i
* ``F_p[t]/(t^m)``        coefficients of ``c_0 + c_1 t + ...`` -> sum c_i p^i
* ``R1 x R2``             (r1, r2) -> r1 + |R1| r2
* ``UT_2(F_p)``           [[a, b], [0, d]] -> a + p b + p^2 d

Maps are dense ``int64`` arrays over that universe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidSpecError, LawViolationError

__all__ = [
    "FiniteRing", "RingMap", "DualPair", "LawReport", "Violation",
    "build_ring", "zmod", "galois_field", "truncated_poly", "product_ring",
    "upper_triangular", "from_tables", "verify_ring",
    "verify_endomorphism", "verify_sigma_derivation", "nilpotency_index",
    "nilpotency_table", "dual_maps", "identity_map", "frobenius_map",
    "scale_map", "endomorphism_from_table", "zero_derivation",
    "truncated_derivative", "inner_derivation", "derivation_from_table",
]


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    law: str
    count: int
    witness: tuple

    def to_dict(self):
        return {"law": self.law, "count": self.count, "witness": list(self.witness)}


@dataclass
class LawReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, law: str, count: int, witness) -> None:
        if count:
            self.violations.append(Violation(law, int(count), tuple(witness)))

    def first(self, law: str) -> Violation | None:
        for v in self.violations:
            if v.law == law:
                return v
        return None

    def to_dict(self):
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "flags": dict(sorted(self.flags.items())),
        }


def _first_mismatch(lhs, rhs):
    bad = np.argwhere(np.asarray(lhs) != np.asarray(rhs))
    if len(bad) == 0:
        return 0, ()
    return len(bad), tuple(int(v) for v in bad[0])


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

class FiniteRing:
    """A finite associative unital ring stored as dense operation tables."""

    def __init__(self, family: str, params: dict, add, mul, zero: int, one: int,
                 labels: Sequence[str] | None = None, characteristic: int | None = None,
                 encode=None):
        self.family = family
        self.params = dict(params)
        self.add = np.ascontiguousarray(add, dtype=np.int64)
        self.mul = np.ascontiguousarray(mul, dtype=np.int64)
        self.add.setflags(write=False)
        self.mul.setflags(write=False)
        self.size = self.add.shape[0]
        self.zero = int(zero)
        self.one = int(one)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.size)]
        self._encode = encode
        neg = np.full(self.size, -1, dtype=np.int64)
        zeros = np.argwhere(self.add == self.zero)
        for a, b in zeros:
            if neg[a] < 0:
                neg[a] = b
        self.neg = neg
        self.neg.setflags(write=False)
        self.characteristic = characteristic if characteristic is not None else self._additive_order(self.one)

    def __repr__(self):
        return f"FiniteRing({self.family}, {self.params}, size={self.size})"

    def __len__(self):
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def _additive_order(self, a: int) -> int:
        acc, k = a, 1
        while acc != self.zero:
            acc = int(self.add[acc, a])
            k += 1
            if k > self.size + 1:
                return 0
        return k

    def element(self, value) -> int:
        """Canonical index for an int index or a family coordinate list."""
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            if not 0 <= int(value) < self.size:
                raise InvalidSpecError(f"element index {value} out of range for {self.family} of size {self.size}")
            return int(value)
        if self._encode is None:
            raise InvalidSpecError(f"ring family {self.family!r} only accepts integer element indices")
        return self._encode(value)

    def label(self, r: int) -> str:
        return self.labels[int(r)]

    def sum(self, items: Iterable[int]) -> int:
        acc = self.zero
        for r in items:
            acc = int(self.add[acc, r])
        return acc

    def power(self, r: int, k: int) -> int:
        acc = self.one
        for _ in range(k):
            acc = int(self.mul[acc, r])
        return acc

    def scalar(self, k: int) -> int:
        """The image of the integer k (k >= 0) in R."""
        acc = self.zero
        for _ in range(k):
            acc = int(self.add[acc, self.one])
        return acc

    def units(self) -> list[int]:
        return [r for r in self.elements
                if np.any((self.mul[r] == self.one) & (self.mul[:, r] == self.one))]


def _digits(index: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(index % base)
        index //= base
    return out


def _from_digits(digits: Sequence[int], base: int) -> int:
    return sum(int(d) * base ** i for i, d in enumerate(digits))


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if q % p == 0:
            if not _is_prime(p):
                return None
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            return (p, e) if q == 1 else None
    return None


def _poly_label(coeffs: Sequence[int], var: str) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


def _coord_encoder(base: int, width: int, family: str):
    def encode(value):
        if not isinstance(value, (list, tuple)) or len(value) > width:
            raise InvalidSpecError(f"{family} element must be a coordinate list of length <= {width}, got {value!r}")
        digits = [int(v) % base for v in value]
        return _from_digits(digits, base)
    return encode


def zmod(n: int) -> FiniteRing:
    if n < 2:
        raise InvalidSpecError(f"Z/n needs n >= 2, got {n}")
    a = np.arange(n)
    return FiniteRing("zmod", {"n": n}, (a[:, None] + a[None, :]) % n,
                      (a[:, None] * a[None, :]) % n, 0, 1, characteristic=n)


def _poly_mulmod(f, g, p, modulus=None, trunc=None):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    if trunc is not None:
        return (out + [0] * trunc)[:trunc]
    deg = len(modulus) - 1
    for k in range(len(out) - 1, deg - 1, -1):
        c = out[k]
        if c:
            for i, m in enumerate(modulus):
                out[k - deg + i] = (out[k - deg + i] - c * m) % p
    return (out + [0] * deg)[:deg]


def _is_irreducible(poly, p):
    """True when the monic poly over F_p is irreducible (trial division)."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            rem = list(poly)
            for k in range(len(rem) - 1, d - 1, -1):
                c = rem[k]
                if c:
                    for i, m in enumerate(divisor):
                        rem[k - d + i] = (rem[k - d + i] - c * m) % p
            if not any(rem[:d]):
                return False
    return True


def _least_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically least monic irreducible of degree e over F_p."""
    for index in range(p ** e):
        poly = _digits(index, p, e) + [1]
        if _is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")


def galois_field(q: int) -> FiniteRing:
    pe = _prime_power(q)
    if pe is None:
        raise InvalidSpecError(f"GF(q) needs q a prime power, got {q}")
    p, e = pe
    modulus = _least_irreducible(p, e) if e > 1 else [0, 1]
    coords = [_digits(i, p, e) for i in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for i, a in enumerate(coords):
        for j, b in enumerate(coords):
            add[i, j] = _from_digits([(x + y) % p for x, y in zip(a, b)], p)
            mul[i, j] = _from_digits(_poly_mulmod(a, b, p, modulus=modulus), p)
    labels = [_poly_label(c, "a") for c in coords]
    return FiniteRing("gf", {"q": q, "modulus": modulus}, add, mul, 0, 1, labels,
                      characteristic=p, encode=_coord_encoder(p, e, "GF"))


def truncated_poly(p: int, m: int) -> FiniteRing:
    if not _is_prime(p) or m < 1:
        raise InvalidSpecError(f"F_p[t]/(t^m) needs p prime and m >= 1, got p={p}, m={m}")
    n = p ** m
    coords = [_digits(i, p, m) for i in range(n)]
    add = np.zeros((n, n), dtype=np.int64)
    mul = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(coords):
        for j, b in enumerate(coords):
            add[i, j] = _from_digits([(x + y) % p for x, y in zip(a, b)], p)
            mul[i, j] = _from_digits(_poly_mulmod(a, b, p, trunc=m), p)
    labels = [_poly_label(c, "t") for c in coords]
    return FiniteRing("truncated_poly", {"p": p, "m": m}, add, mul, 0, 1, labels,
                      characteristic=p, encode=_coord_encoder(p, m, "F_p[t]/(t^m)"))


def product_ring(r1: FiniteRing, r2: FiniteRing) -> FiniteRing:
    n1, n2 = r1.size, r2.size
    idx = np.arange(n1 * n2)
    a, b = idx % n1, idx // n1
    add = r1.add[a[:, None], a[None, :]] + n1 * r2.add[b[:, None], b[None, :]]
    mul = r1.mul[a[:, None], a[None, :]] + n1 * r2.mul[b[:, None], b[None, :]]
    labels = [f"({r1.label(x)},{r2.label(y)})" for x, y in zip(a, b)]

    def encode(value):
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise InvalidSpecError(f"product-ring element must be a pair, got {value!r}")
        return r1.element(value[0]) + n1 * r2.element(value[1])

    params = {"factors": [dict(r1.params, family=r1.family), dict(r2.params, family=r2.family)]}
    return FiniteRing("product", params, add, mul, r1.zero + n1 * r2.zero,
                      r1.one + n1 * r2.one, labels, encode=encode)


def upper_triangular(p: int) -> FiniteRing:
    if not _is_prime(p):
        raise InvalidSpecError(f"UT_2(F_p) needs p prime, got {p}")
    n = p ** 3
    coords = [_digits(i, p, 3) for i in range(n)]   # (a, b, d)
    add = np.zeros((n, n), dtype=np.int64)
    mul = np.zeros((n, n), dtype=np.int64)
    for i, (a, b, d) in enumerate(coords):
        for j, (a2, b2, d2) in enumerate(coords):
            add[i, j] = _from_digits([(a + a2) % p, (b + b2) % p, (d + d2) % p], p)
            mul[i, j] = _from_digits([a * a2 % p, (a * b2 + b * d2) % p, d * d2 % p], p)
    labels = [f"[{a} {b}; 0 {d}]" for a, b, d in coords]
    one = _from_digits([1, 0, 1], p)
    return FiniteRing("upper_triangular", {"p": p}, add, mul, 0, one, labels,
                      characteristic=p, encode=_coord_encoder(p, 3, "UT_2"))


def from_tables(add, mul, zero: int = 0, one: int = 1, labels=None) -> FiniteRing:
    """Build a ring from explicit tables; raises LawViolationError unless every law holds."""
    add = np.asarray(add, dtype=np.int64)
    mul = np.asarray(mul, dtype=np.int64)
    n = add.shape[0] if add.ndim == 2 else 0
    if n == 0 or add.shape != (n, n) or mul.shape != (n, n):
        raise InvalidSpecError("ring tables must be square and of equal size")
    if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
        raise InvalidSpecError("ring table entries out of range")
    if not (0 <= zero < n and 0 <= one < n):
        raise InvalidSpecError("zero/one index out of range")
    ring = FiniteRing("tables", {"size": n}, add, mul, zero, one, labels)
    report = verify_ring(ring)
    if not report.ok:
        raise LawViolationError(f"ring tables violate {report.violations[0].law}", report)
    return ring


def build_ring(spec: dict) -> FiniteRing:
    """Construct a ring from a fixture-style description."""
    family = spec.get("family")
    try:
        if family == "zmod":
            return zmod(int(spec["n"]))
        if family == "gf":
            return galois_field(int(spec["q"]))
        if family == "truncated_poly":
            return truncated_poly(int(spec["p"]), int(spec["m"]))
        if family == "product":
            left, right = spec["factors"]
            return product_ring(build_ring(left), build_ring(right))
        if family == "upper_triangular":
            return upper_triangular(int(spec["p"]))
        if family == "tables":
            return from_tables(spec["add"], spec["mul"], spec.get("zero", 0),
                               spec.get("one", 1), spec.get("labels"))
    except KeyError as exc:
        raise InvalidSpecError(f"ring family {family!r} is missing parameter {exc}") from None
    raise InvalidSpecError(f"unknown ring family {family!r}")


def verify_ring(ring: FiniteRing) -> LawReport:
    """Exhaustively check the ring axioms on the tables."""
    rep = LawReport(f"ring:{ring.family}")
    n = ring.size
    add, mul = ring.add, ring.mul
    rep.record("add_associative", *_kernels.assoc_violations(add))
    rep.record("add_commutative", *_first_mismatch(add, add.T))
    rep.record("add_identity", *_first_mismatch(add[ring.zero], np.arange(n)))
    missing = np.flatnonzero(~np.any(add == ring.zero, axis=1))
    rep.record("add_inverse", len(missing), tuple(int(v) for v in missing[:1]))
    count, wit = _kernels.assoc_violations(mul)
    rep.record("mul_associative", count, wit or ())
    (lc, lw), (rc, rw) = _kernels.distrib_violations(add, mul)
    rep.record("left_distributive", lc, lw or ())
    rep.record("right_distributive", rc, rw or ())
    rep.record("left_identity", *_first_mismatch(mul[ring.one], np.arange(n)))
    rep.record("right_identity", *_first_mismatch(mul[:, ring.one], np.arange(n)))
    rep.flags["commutative"] = ring.is_commutative
    rep.flags["size"] = n
    return rep


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class RingMap:
    """A tabulated endomorphism or sigma-derivation of a FiniteRing."""

    kind: str                       # "endomorphism" | "sigma-derivation"
    ring: FiniteRing
    table: np.ndarray
    sigma: "RingMap | None" = None
    name: str = ""
    nilpotency: np.ndarray | None = None

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table, dtype=np.int64)
        self.table.setflags(write=False)

    def __call__(self, r):
        return self.table[r]

    @property
    def bijective(self) -> bool:
        return len(np.unique(self.table)) == self.ring.size

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.table == self.ring.zero))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.ring.size)))

    def compose(self, other: "RingMap") -> np.ndarray:
        """Table of self o other."""
        return self.table[other.table]

    def power(self, k: int) -> np.ndarray:
        out = np.arange(self.ring.size)
        for _ in range(k):
            out = self.table[out]
        return out

    def order(self) -> int | None:
        """Smallest k >= 1 with map^k = id, or None if there is none."""
        ident = np.arange(self.ring.size)
        out = self.table.copy()
        for k in range(1, self.ring.size + 2):
            if np.array_equal(out, ident):
                return k
            out = self.table[out]
        return None


@dataclass(eq=False)
class DualPair:
    """sigma' = sigma^{-1} and delta' = -delta o sigma^{-1}."""

    sigma: RingMap
    delta: RingMap


def _check_table(ring: FiniteRing, table) -> np.ndarray:
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (ring.size,) or table.min() < 0 or table.max() >= ring.size:
        raise InvalidSpecError(f"map table must list {ring.size} element indices")
    return table


def verify_endomorphism(ring: FiniteRing, f) -> LawReport:
    table = _check_table(ring, f.table if isinstance(f, RingMap) else f)
    rep = LawReport("endomorphism")
    add, mul = ring.add, ring.mul
    rep.record("additive", *_first_mismatch(table[add], add[table[:, None], table[None, :]]))
    rep.record("multiplicative", *_first_mismatch(table[mul], mul[table[:, None], table[None, :]]))
    rep.record("unital", int(table[ring.one] != ring.one), (ring.one,))
    rep.flags["bijective"] = len(np.unique(table)) == ring.size
    return rep


def verify_sigma_derivation(ring: FiniteRing, sigma, d) -> LawReport:
    s = _check_table(ring, sigma.table if isinstance(sigma, RingMap) else sigma)
    table = _check_table(ring, d.table if isinstance(d, RingMap) else d)
    rep = LawReport("sigma-derivation")
    add, mul = ring.add, ring.mul
    rep.record("additive", *_first_mismatch(table[add], add[table[:, None], table[None, :]]))
    # delta(rs) = sigma(r) delta(s) + delta(r) s
    rhs = add[mul[s[:, None], table[None, :]], mul[table[:, None], np.arange(ring.size)[None, :]]]
    rep.record("leibniz", *_first_mismatch(table[mul], rhs))
    return rep


def nilpotency_index(delta, r: int, bound: int | None = None) -> int | None:
    """Smallest n >= 1 with delta^n(r) = 0, or None when the orbit never reaches 0.

    The default bound |R| + 1 is complete: an orbit on a finite carrier either
    hits 0 or revisits a value within |R| steps.
    """
    ring = delta.ring
    table = delta.table
    bound = ring.size + 1 if bound is None else bound
    cur = int(r)
    for n in range(1, bound + 1):
        cur = int(table[cur])
        if cur == ring.zero:
            return n
    return None


def nilpotency_table(delta: RingMap, bound: int | None = None) -> np.ndarray:
    out = np.zeros(delta.ring.size, dtype=np.int64)
    for r in delta.ring.elements:
        n = nilpotency_index(delta, r, bound)
        if n is None:
            raise LawViolationError(
                f"delta is not locally nilpotent: orbit of {delta.ring.label(r)} never reaches 0",
                LawReport("local-nilpotency", [Violation("nilpotent", 1, (r,))]))
        out[r] = n
    return out


def dual_maps(sigma: RingMap, delta: RingMap) -> DualPair:
    ring = sigma.ring
    if not sigma.bijective:
        raise InvalidSpecError("dual maps need sigma to be bijective")
    inv = np.empty(ring.size, dtype=np.int64)
    inv[sigma.table] = np.arange(ring.size)
    s_dual = RingMap("endomorphism", ring, inv, name=f"{sigma.name}'")
    d_dual = RingMap("sigma-derivation", ring, ring.neg[delta.table[inv]], sigma=s_dual,
                     name=f"{delta.name}'")
    rep = verify_sigma_derivation(ring, s_dual, d_dual)
    if not rep.ok:
        raise LawViolationError("delta' failed the sigma'-derivation law", rep)
    return DualPair(s_dual, d_dual)


# ---------------------------------------------------------------------------
# map constructors
# ---------------------------------------------------------------------------

def _endo(ring, table, name):
    table = _check_table(ring, table)
    rep = verify_endomorphism(ring, table)
    if not rep.ok:
        raise LawViolationError(f"sigma is not an endomorphism ({rep.violations[0].law})", rep)
    return RingMap("endomorphism", ring, table, name=name)


def identity_map(ring: FiniteRing) -> RingMap:
    return _endo(ring, np.arange(ring.size), "id")


def frobenius_map(ring: FiniteRing, power: int = 1) -> RingMap:
    """a -> a^(p^power) where p is the characteristic."""
    e = ring.characteristic ** power
    table = [ring.power(r, e) for r in ring.elements]
    return _endo(ring, table, "frobenius" if power == 1 else f"frobenius^{power}")


def scale_map(ring: FiniteRing, unit: int) -> RingMap:
    """t -> b t on F_p[t]/(t^m), i.e. c_i -> b^i c_i."""
    if ring.family != "truncated_poly":
        raise InvalidSpecError("scale-by-unit sigma is defined on F_p[t]/(t^m) only")
    p, m = ring.params["p"], ring.params["m"]
    b = int(unit) % p
    if b == 0:
        raise InvalidSpecError("scale factor must be a unit of F_p")
    table = []
    for r in ring.elements:
        c = _digits(r, p, m)
        table.append(_from_digits([ci * pow(b, i, p) % p for i, ci in enumerate(c)], p))
    return _endo(ring, table, f"t->{b}t")


def endomorphism_from_table(ring: FiniteRing, table) -> RingMap:
    return _endo(ring, [ring.element(v) for v in table], "table")


def _deriv(ring, sigma, table, name):
    table = _check_table(ring, table)
    rep = verify_sigma_derivation(ring, sigma, table)
    if not rep.ok:
        raise LawViolationError(f"delta is not a sigma-derivation ({rep.violations[0].law})", rep)
    d = RingMap("sigma-derivation", ring, table, sigma=sigma, name=name)
    return d


def zero_derivation(ring: FiniteRing, sigma: RingMap) -> RingMap:
    return _deriv(ring, sigma, np.full(ring.size, ring.zero), "0")


def truncated_derivative(ring: FiniteRing, sigma: RingMap, power: int) -> RingMap:
    """t^power d/dt on F_p[t]/(t^m): t^i -> i t^(i-1+power), dropping terms past t^(m-1)."""
    if ring.family != "truncated_poly":
        raise InvalidSpecError("t^a d/dt is defined on F_p[t]/(t^m) only")
    p, m = ring.params["p"], ring.params["m"]
    table = []
    for r in ring.elements:
        c = _digits(r, p, m)
        out = [0] * m
        for i, ci in enumerate(c):
            k = i - 1 + power
            if i and ci and 0 <= k < m:
                out[k] = (out[k] + i * ci) % p
        table.append(_from_digits(out, p))
    return _deriv(ring, sigma, table, f"t^{power}d/dt")


def inner_derivation(ring: FiniteRing, sigma: RingMap, c: int) -> RingMap:
    """r -> c r - sigma(r) c."""
    c = ring.element(c)
    table = [int(ring.add[ring.mul[c, r], ring.neg[ring.mul[sigma.table[r], c]]]) for r in ring.elements]
    return _deriv(ring, sigma, table, f"inner({ring.label(c)})")


def derivation_from_table(ring: FiniteRing, sigma: RingMap, table) -> RingMap:
    return _deriv(ring, sigma, [ring.element(v) for v in table], "table")
