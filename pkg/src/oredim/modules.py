"""Finite right R-modules, the inverse-polynomial module M[x^-1] and its truncations.

M[x^-1] is a right A-module via

    m x^-1 r = m sigma'(r) x^-1 + m delta'(r)
    x^-i x^j = x^(j-i)  if j <= i, else 0

and the closed form ``m x^-k r = sum_i m f_k^i(r) x^-i``.  The depth-d slice
M[x^-1]_{<=d} is A-stable (the ring action never raises depth, x lowers it),
so it is a finite A-module that the lattice engine can analyse exhaustively.
Tuples (m_0, ..., m_d) are encoded little-endian: index = sum m_k |M|^k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CapExceededError, InvalidSpecError, LawViolationError
from .rings import FiniteRing, LawReport, _first_mismatch
from .skew import SkewOreRing, SkewPoly, _trim

DEFAULT_TRUNCATION_CAP = 256


class FiniteModule:
    """A finite right R-module: abelian group table plus ``act[m, r] = m r``."""

    def __init__(self, ring: FiniteRing, add, act, zero: int = 0, labels=None, name: str = "M"):
        self.ring = ring
        self.add = np.ascontiguousarray(add, dtype=np.int64)
        self.act = np.ascontiguousarray(act, dtype=np.int64)
        self.size = self.add.shape[0]
        if self.add.shape != (self.size, self.size) or self.act.shape != (self.size, ring.size):
            raise InvalidSpecError(
                f"module tables have shapes {self.add.shape} and {self.act.shape}; "
                f"expected ({self.size}, {self.size}) and ({self.size}, {ring.size})")
        if self.size and (self.add.min() < 0 or self.add.max() >= self.size
                          or self.act.min() < 0 or self.act.max() >= self.size):
            raise InvalidSpecError("module table entries out of range")
        self.add.setflags(write=False)
        self.act.setflags(write=False)
        self.zero = int(zero)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.size)]
        self.name = name
        self.actions = np.ascontiguousarray(self.act.T)

    def __repr__(self):
        return f"FiniteModule({self.name}, size={self.size}, over {self.ring.family})"

    def __len__(self):
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    def label(self, m: int) -> str:
        return self.labels[int(m)]

    # -- constructions ----------------------------------------------------

    @classmethod
    def regular(cls, ring: FiniteRing) -> "FiniteModule":
        return cls(ring, ring.add, ring.mul, ring.zero, ring.labels, name="R_R")

    @classmethod
    def zero_module(cls, ring: FiniteRing) -> "FiniteModule":
        return cls(ring, [[0]], np.zeros((1, ring.size), dtype=np.int64), 0, ["0"], name="0")

    def submodule_mask(self, generators) -> np.ndarray:
        seed = np.zeros(self.size, dtype=np.bool_)
        seed[self.zero] = True
        for g in generators:
            seed[int(g)] = True
        return _kernels.closure(seed, self.add, self.actions)

    def quotient(self, mask, name: str | None = None) -> "FiniteModule":
        """M / N for a submodule mask N; cosets are ordered by least representative."""
        mask = np.asarray(mask, dtype=np.bool_)
        if not mask[self.zero]:
            raise InvalidSpecError("quotient needs a submodule containing zero")
        members = np.flatnonzero(mask)
        coset_of = np.full(self.size, -1, dtype=np.int64)
        reps = []
        for m in self.elements:
            if coset_of[m] >= 0:
                continue
            coset = self.add[m, members]
            coset_of[coset] = len(reps)
            reps.append(m)
        reps = np.array(reps, dtype=np.int64)
        add = coset_of[self.add[reps[:, None], reps[None, :]]]
        act = coset_of[self.act[reps]]
        labels = [f"[{self.label(r)}]" for r in reps]
        return FiniteModule(self.ring, add, act, int(coset_of[self.zero]), labels,
                            name=name or f"{self.name}/N")

    def quotient_by(self, generators, name: str | None = None) -> "FiniteModule":
        return self.quotient(self.submodule_mask(generators), name)

    def restrict(self, mask, name: str | None = None) -> "FiniteModule":
        """The submodule N (given by mask) as a module in its own right."""
        members = np.flatnonzero(np.asarray(mask, dtype=np.bool_))
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[members] = np.arange(len(members))
        add = pos[self.add[members[:, None], members[None, :]]]
        act = pos[self.act[members]]
        if add.min() < 0 or act.min() < 0:
            raise InvalidSpecError("mask is not a submodule")
        return FiniteModule(self.ring, add, act, int(pos[self.zero]),
                            [self.labels[m] for m in members], name=name or f"N<{self.name}")

    def direct_sum(self, other: "FiniteModule") -> "FiniteModule":
        """M1 (+) M2 with (a, b) -> a + |M1| b."""
        if other.ring is not self.ring:
            raise InvalidSpecError("direct sum needs modules over the same ring")
        n1, n2 = self.size, other.size
        idx = np.arange(n1 * n2)
        a, b = idx % n1, idx // n1
        add = self.add[a[:, None], a[None, :]] + n1 * other.add[b[:, None], b[None, :]]
        act = self.act[a] + n1 * other.act[b]
        labels = [f"({self.label(x)},{other.label(y)})" for x, y in zip(a, b)]
        return FiniteModule(self.ring, add, act, self.zero + n1 * other.zero, labels,
                            name=f"{self.name}+{other.name}")

    @classmethod
    def from_tables(cls, ring: FiniteRing, add, act, zero: int = 0, labels=None) -> "FiniteModule":
        mod = cls(ring, add, act, zero, labels, name="tables")
        rep = verify_module(mod)
        if not rep.ok:
            raise LawViolationError(f"module tables violate {rep.violations[0].law}", rep)
        return mod


def verify_module(mod: FiniteModule) -> LawReport:
    """Exhaustive module axioms: abelian group, m(rs) = (mr)s, m1 = m, both distributive laws."""
    rep = LawReport(f"module:{mod.name}")
    ring = mod.ring
    add, act = mod.add, mod.act
    n = mod.size
    count, wit = _kernels.assoc_violations(add)
    rep.record("add_associative", count, wit or ())
    rep.record("add_commutative", *_first_mismatch(add, add.T))
    rep.record("add_identity", *_first_mismatch(add[mod.zero], np.arange(n)))
    missing = np.flatnonzero(~np.any(add == mod.zero, axis=1))
    rep.record("add_inverse", len(missing), tuple(int(v) for v in missing[:1]))
    # m(rs) = (mr)s
    rhs = act[act[:, :, None], np.arange(ring.size)[None, None, :]]
    rep.record("action_associative", *_first_mismatch(act[:, ring.mul], rhs))
    rep.record("unital", *_first_mismatch(act[:, ring.one], np.arange(n)))
    rep.record("distributive_module", *_first_mismatch(act[add], add[act[:, None, :], act[None, :, :]]))
    rep.record("distributive_ring", *_first_mismatch(act[:, ring.add], add[act[:, :, None], act[:, None, :]]))
    rep.flags["size"] = n
    return rep


# ---------------------------------------------------------------------------
# inverse polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InversePoly:
    """m_0 + m_1 x^-1 + ... + m_k x^-k with coefficients in a FiniteModule."""

    module: FiniteModule
    coeffs: tuple[int, ...]

    @classmethod
    def of(cls, module: FiniteModule, coeffs) -> "InversePoly":
        return cls(module, _trim(coeffs, module.zero))

    def __eq__(self, other):
        return isinstance(other, InversePoly) and other.module is self.module and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def depth(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int | None:
        """Negative degree -k of a nonzero element; None for zero."""
        return None if not self.coeffs else -self.depth

    @property
    def leading_monomial(self) -> int | None:
        """Exponent k of lm = x^-k."""
        return None if not self.coeffs else self.depth

    @property
    def leading_coefficient(self) -> int | None:
        return None if not self.coeffs else self.coeffs[-1]

    @property
    def leading_term(self) -> "InversePoly":
        if not self.coeffs:
            return self
        return InversePoly(self.module, (self.module.zero,) * self.depth + (self.coeffs[-1],))

    @property
    def coefficient_set(self) -> frozenset:
        return frozenset(self.coeffs)

    def __add__(self, other: "InversePoly") -> "InversePoly":
        return InversePoly.of(self.module, _add_module(self.module, self.coeffs, other.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, m in enumerate(self.coeffs):
            if m == self.module.zero:
                continue
            lab = self.module.label(m)
            parts.append(lab if k == 0 else f"{lab}*x^-{k}")
        return " + ".join(parts)


def _add_module(mod: FiniteModule, a, b) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [mod.zero] * (n - len(a))
    b = list(b) + [mod.zero] * (n - len(b))
    return [int(mod.add[x, y]) for x, y in zip(a, b)]


def act_ring(A: SkewOreRing, p: InversePoly, r: int) -> InversePoly:
    """p r via m x^-k r = sum_i m f_k^i(r) x^-i, termwise."""
    mod = p.module
    out = [mod.zero] * len(p.coeffs)
    for k, m in enumerate(p.coeffs):
        if m == mod.zero:
            continue
        for i in range(k + 1):
            out[i] = int(mod.add[out[i], mod.act[m, A.operators(k, i)[r]]])
    return InversePoly.of(mod, out)


def act_ring_iterated(A: SkewOreRing, m: int, k: int, r: int, mod: FiniteModule) -> InversePoly:
    """m x^-k r by peeling one x^-1 at a time with m x^-1 r = m sigma'(r) x^-1 + m delta'(r).

    x^-k r = x^-(k-1) (x^-1 r) = x^-(k-1) (sigma'(r) x^-1 + delta'(r)), recursing on
    each coefficient; used to cross-check the closed form.
    """
    s, d = A.dual.sigma.table, A.dual.delta.table
    ring = A.ring

    def expand(j, c):
        # x^-j c as a coefficient list over R
        if j == 0:
            return [int(c)]
        head = expand(j - 1, int(s[c]))          # x^-(j-1) sigma'(c), then times x^-1
        tail = expand(j - 1, int(d[c]))          # x^-(j-1) delta'(c)
        out = [ring.zero] * (j + 1)
        for i, v in enumerate(head):
            out[i + 1] = int(ring.add[out[i + 1], v])
        for i, v in enumerate(tail):
            out[i] = int(ring.add[out[i], v])
        return out

    coeffs = [int(mod.act[m, c]) for c in expand(k, r)]
    return InversePoly.of(mod, coeffs)


def act_x_power(p: InversePoly, j: int) -> InversePoly:
    """m x^-i x^j = m x^-(i-j) when j <= i, otherwise 0."""
    if j < 0:
        raise ValueError("x exponent must be non-negative")
    return InversePoly.of(p.module, p.coeffs[j:])


def act(A: SkewOreRing, p: InversePoly, a: SkewPoly) -> InversePoly:
    """p a for a = sum r_j x^j: ring coefficient first, then the x-power."""
    mod = p.module
    out: list[int] = []
    for j, r in enumerate(a.coeffs):
        if r == A.ring.zero:
            continue
        out = _add_module(mod, out, act_x_power(act_ring(A, p, r), j).coeffs)
    return InversePoly.of(mod, out)


# ---------------------------------------------------------------------------
# truncations
# ---------------------------------------------------------------------------

class TruncatedInverseModule:
    """M[x^-1]_{<=d} as a finite A-module.

    ``actions`` stacks the right action of every ring element followed by the
    action of x, which together generate the A-action.
    """

    def __init__(self, A: SkewOreRing, module: FiniteModule, depth: int,
                 cap: int = DEFAULT_TRUNCATION_CAP):
        if module.ring is not A.ring:
            raise InvalidSpecError("module and skew ring must share the coefficient ring")
        if depth < 0:
            raise InvalidSpecError("depth must be non-negative")
        size = module.size ** (depth + 1)
        if size > cap:
            raise CapExceededError(f"|M|^(d+1) = {size} exceeds the truncation cap {cap}")
        if depth > A.operators.depth:
            raise CapExceededError(f"depth {depth} exceeds the operator depth {A.operators.depth}")
        self.A = A
        self.base = module
        self.ring = A.ring
        self.depth = depth
        self.size = size
        nm = module.size
        digits = np.zeros((size, depth + 1), dtype=np.int64)
        rest = np.arange(size)
        for k in range(depth + 1):
            digits[:, k] = rest % nm
            rest //= nm
        self.digits = digits
        self._weights = nm ** np.arange(depth + 1)
        self.zero = int(self.encode([module.zero] * (depth + 1)))
        self.add = self._encode_rows(module.add[digits[:, None, :], digits[None, :, :]])
        self.ring_action = self._build_ring_action()
        shifted = np.concatenate([digits[:, 1:], np.full((size, 1), module.zero)], axis=1)
        self.x_action = self._encode_rows(shifted)
        self.actions = np.ascontiguousarray(np.vstack([self.ring_action.T, self.x_action[None, :]]))
        for arr in (self.add, self.ring_action, self.x_action, self.actions, self.digits):
            arr.setflags(write=False)

    def __repr__(self):
        return f"TruncatedInverseModule({self.base.name}, depth={self.depth}, size={self.size})"

    def __len__(self):
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    def encode(self, coeffs) -> int:
        coeffs = list(coeffs) + [self.base.zero] * (self.depth + 1 - len(coeffs))
        if len(coeffs) > self.depth + 1:
            raise ValueError("inverse polynomial deeper than the truncation")
        return int(np.dot(np.asarray(coeffs, dtype=np.int64), self._weights))

    def _encode_rows(self, digits) -> np.ndarray:
        return np.ascontiguousarray((digits * self._weights).sum(axis=-1), dtype=np.int64)

    def poly(self, index: int) -> InversePoly:
        return InversePoly.of(self.base, self.digits[int(index)])

    def label(self, index: int) -> str:
        return repr(self.poly(index))

    def _build_ring_action(self) -> np.ndarray:
        mod, ring, ops = self.base, self.ring, self.A.operators
        d = self.depth
        out = np.empty((self.size, ring.size), dtype=np.int64)
        for r in ring.elements:
            res = np.full((self.size, d + 1), mod.zero, dtype=np.int64)
            for k in range(d + 1):
                mk = self.digits[:, k]
                for i in range(k + 1):
                    res[:, i] = mod.add[res[:, i], mod.act[mk, ops(k, i)[r]]]
            out[:, r] = self._encode_rows(res)
        return out

    def act_ring(self, index: int, r: int) -> int:
        return int(self.ring_action[index, r])

    def act_x(self, index: int, j: int = 1) -> int:
        for _ in range(j):
            index = int(self.x_action[index])
        return index

    def act(self, index: int, a: SkewPoly) -> int:
        acc = self.zero
        for j, r in enumerate(a.coeffs):
            if r == self.ring.zero:
                continue
            acc = int(self.add[acc, self.act_x(self.act_ring(index, r), j)])
        return acc

    def depth_of(self, index: int) -> int:
        """Depth of the element (-1 for zero)."""
        nz = np.flatnonzero(self.digits[int(index)] != self.base.zero)
        return int(nz[-1]) if len(nz) else -1

    def lift_mask(self, base_mask) -> np.ndarray:
        """N[x^-1]_{<=d} for a submodule mask N of the base module."""
        base_mask = np.asarray(base_mask, dtype=np.bool_)
        return np.all(base_mask[self.digits], axis=1)

    def slice_mask(self, k: int) -> np.ndarray:
        """All elements of depth <= k."""
        return np.all(self.digits[:, k + 1:] == self.base.zero, axis=1)

    def monomial(self, m: int, k: int) -> int:
        return self.encode([self.base.zero] * k + [m])

    def r_module(self) -> FiniteModule:
        """The same carrier viewed as a right R-module (x forgotten)."""
        return FiniteModule(self.ring, self.add, self.ring_action, self.zero,
                            name=f"{self.base.name}[x^-1]<={self.depth}|R")


def truncate(A: SkewOreRing, module: FiniteModule, depth: int,
             cap: int = DEFAULT_TRUNCATION_CAP) -> TruncatedInverseModule:
    return TruncatedInverseModule(A, module, depth, cap)
