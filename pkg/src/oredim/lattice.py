"""Exhaustive submodule lattices of finite modules and the dimension theory built on them.

The engine works on anything exposing ``size``, ``zero``, an ``add`` table and
an ``actions`` array (one row per generator of the acting ring), so the same
code handles R-modules and truncated A-modules.

Submodules are boolean masks.  For finite abelian groups the sum of two
subgroups has order |A||B| / |A n B|, which turns most lattice questions into
arithmetic on the intersection-size matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import CapExceededError, InvalidSpecError
from .modules import FiniteModule, TruncatedInverseModule
from .rings import FiniteRing

DEFAULT_LATTICE_CAP = 256
SURJECTION_ORACLE_CAP = 16


def _key(mask) -> bytes:
    return np.packbits(mask).tobytes()


class SubmoduleLattice:
    """All submodules of a finite module, in canonical order.

    Order is by size, then lexicographically by sorted element indices, so
    index 0 is the zero submodule and the last index is the whole module.
    """

    def __init__(self, module, masks: list[np.ndarray]):
        self.module = module
        order = sorted(range(len(masks)),
                       key=lambda i: (int(masks[i].sum()), tuple(np.flatnonzero(masks[i]))))
        self.masks = np.array([masks[i] for i in order], dtype=np.bool_).reshape(len(masks), module.size)
        self.masks.setflags(write=False)
        self.sizes = self.masks.sum(axis=1).astype(np.int64)
        as_int = self.masks.astype(np.int32)
        self.inter = as_int @ as_int.T
        # contains[i, j]  <=>  masks[j] is a subset of masks[i]
        self.contains = self.inter == self.sizes[None, :]
        self._index = {_key(m): i for i, m in enumerate(self.masks)}
        self.bottom = 0
        self.top = len(self.masks) - 1
        self._join: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.masks)

    def __repr__(self):
        return f"SubmoduleLattice({len(self)} submodules of a module of size {self.module.size})"

    @property
    def order(self) -> int:
        return int(self.module.size)

    def find(self, mask) -> int:
        """Index of a submodule given by mask; InvalidSpecError if it is not one."""
        mask = np.asarray(mask, dtype=np.bool_)
        idx = self._index.get(_key(mask))
        if idx is None:
            raise InvalidSpecError("subset is not a submodule")
        return idx

    def resolve(self, sub) -> int:
        if sub is None:
            return self.top
        if isinstance(sub, (int, np.integer)):
            if not 0 <= int(sub) < len(self):
                raise InvalidSpecError(f"submodule index {sub} out of range")
            return int(sub)
        return self.find(sub)

    def elements(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.masks[i])

    def meet(self, i: int, j: int) -> int:
        return self._index[_key(self.masks[i] & self.masks[j])]

    def join(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        hit = self._join.get((i, j))
        if hit is None:
            hit = self._index[_key(_kernels.join(self.masks[i], self.masks[j], self.module.add))]
            self._join[(i, j)] = hit
        return hit

    def join_size(self, i, j):
        """|N_i + N_j| from the subgroup order formula (vectorizes over arrays)."""
        return self.sizes[i] * self.sizes[j] // self.inter[i, j]

    def below(self, i: int) -> np.ndarray:
        """Indices of submodules contained in N_i."""
        return np.flatnonzero(self.contains[i])

    def above(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.contains[:, i])

    def atoms(self) -> list[int]:
        """Minimal nonzero submodules."""
        out = []
        for i in range(1, len(self)):
            if np.count_nonzero(self.contains[i]) == 2:   # {0, itself}
                out.append(i)
        return out

    def coatoms(self) -> list[int]:
        """Maximal proper submodules."""
        out = []
        for i in range(len(self) - 1):
            if np.count_nonzero(self.contains[:, i]) == 2:   # {itself, M}
                out.append(i)
        return out

    def join_table(self) -> np.ndarray:
        n = len(self)
        return np.array([[self.join(i, j) for j in range(n)] for i in range(n)], dtype=np.int64)

    def meet_table(self) -> np.ndarray:
        n = len(self)
        return np.array([[self.meet(i, j) for j in range(n)] for i in range(n)], dtype=np.int64)

    def flags(self) -> dict[str, np.ndarray]:
        """Per-submodule predicate flags."""
        n = len(self)
        atoms, coatoms = set(self.atoms()), set(self.coatoms())
        return {
            "essential": np.array([is_essential(self, i) for i in range(n)]),
            "small": np.array([is_small(self, i) for i in range(n)]),
            "maximal": np.array([i in coatoms for i in range(n)]),
            "minimal": np.array([i in atoms for i in range(n)]),
        }


def submodules(module, cap: int = DEFAULT_LATTICE_CAP) -> SubmoduleLattice:
    """Enumerate every submodule by closing the cyclic submodules under sums."""
    n = module.size
    if n > cap:
        raise CapExceededError(f"module of size {n} exceeds the lattice cap {cap}")
    add, actions = module.add, module.actions
    zero = np.zeros(n, dtype=np.bool_)
    zero[module.zero] = True
    found = {_key(zero): zero}
    cyclic = []
    for m in range(n):
        if m == module.zero:
            continue
        seed = zero.copy()
        seed[m] = True
        c = _kernels.closure(seed, add, actions)
        k = _key(c)
        if k not in found:
            found[k] = c
            cyclic.append(c)
    queue = deque(cyclic)
    while queue:
        s = queue.popleft()
        for c in cyclic:
            if not np.any(c & ~s):
                continue
            j = _kernels.join(s, c, add)
            k = _key(j)
            if k not in found:
                found[k] = j
                queue.append(j)
    return SubmoduleLattice(module, list(found.values()))


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def is_essential(lat: SubmoduleLattice, n=None) -> bool:
    """N meets every nonzero submodule nontrivially."""
    i = lat.resolve(n)
    return bool(np.all(lat.inter[i, 1:] > 1))


def is_uniform(lat: SubmoduleLattice, n=None) -> bool:
    """N is nonzero and any two of its nonzero submodules intersect nontrivially."""
    i = lat.resolve(n)
    if lat.sizes[i] == 1:
        return False
    sub = lat.below(i)
    sub = sub[sub != 0]
    return bool(np.all(lat.inter[np.ix_(sub, sub)] > 1))


def is_small(lat: SubmoduleLattice, n=None) -> bool:
    """N' + N = M forces N' = M."""
    i = lat.resolve(n)
    total = lat.join_size(np.arange(len(lat)), i) == lat.order
    total[lat.top] = False
    return not bool(np.any(total))


def is_hollow(lat: SubmoduleLattice) -> bool:
    """M is nonzero and the sum of two proper submodules is proper."""
    if lat.order == 1:
        return False
    proper = np.arange(lat.top)
    sizes = lat.join_size(proper[:, None], proper[None, :])
    return bool(np.all(sizes < lat.order))


def maximal_submodules(lat: SubmoduleLattice) -> list[int]:
    return lat.coatoms()


def radical(lat: SubmoduleLattice) -> int:
    """J(M): intersection of the maximal submodules (M itself when there are none)."""
    mask = np.ones(lat.order, dtype=np.bool_)
    for c in lat.coatoms():
        mask &= lat.masks[c]
    return lat.find(mask)


def socle(lat: SubmoduleLattice) -> int:
    acc = lat.bottom
    for a in lat.atoms():
        acc = lat.join(acc, a)
    return acc


def is_semisimple(lat: SubmoduleLattice) -> bool:
    """M is a sum of simple submodules."""
    return socle(lat) == lat.top


def quotient_is_semisimple(lat: SubmoduleLattice, n) -> bool:
    """M/N is semisimple iff every L in [N, M] has a complement in [N, M]."""
    i = lat.resolve(n)
    interval = lat.above(i)
    for l in interval:
        ok = False
        for c in interval:
            if lat.inter[l, c] == lat.sizes[i] and lat.join_size(l, c) == lat.order:
                ok = True
                break
        if not ok:
            return False
    return True


def is_bass(lat: SubmoduleLattice) -> bool:
    """Every proper submodule lies in a maximal submodule."""
    coatoms = lat.coatoms()
    for i in range(lat.top):
        if not any(lat.contains[c, i] for c in coatoms):
            return False
    return True


# ---------------------------------------------------------------------------
# uniform dimension
# ---------------------------------------------------------------------------

@dataclass
class DimensionResult:
    value: int
    witness: list[int]
    check_value: int
    check_witness: list[int]
    notes: dict = field(default_factory=dict)

    def to_dict(self, lat: SubmoduleLattice | None = None):
        def fam(idxs):
            if lat is None:
                return idxs
            return [[int(e) for e in lat.elements(i)] for i in idxs]
        return {"value": self.value, "witness": fam(self.witness),
                "check_value": self.check_value, "check_witness": fam(self.check_witness),
                **self.notes}


def _independent(lat: SubmoduleLattice, family) -> bool:
    acc, prod = lat.bottom, 1
    for i in family:
        acc = lat.join(acc, i)
        prod *= int(lat.sizes[i])
    return int(lat.sizes[acc]) == prod


def _max_independent(lat: SubmoduleLattice, candidates: list[int]) -> list[int]:
    best: list[int] = []

    def dfs(start, chosen, acc):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        for pos in range(start, len(candidates)):
            c = candidates[pos]
            if len(chosen) + (len(candidates) - pos) <= len(best):
                return
            # adding c keeps the sum direct iff c meets the current sum in 0
            if lat.inter[acc, c] != 1:
                continue
            chosen.append(c)
            dfs(pos + 1, chosen, lat.join(acc, c))
            chosen.pop()

    dfs(0, [], lat.bottom)
    return best


def uniform_dimension(lat: SubmoduleLattice) -> DimensionResult:
    """rudim(M) by two independent routes that must agree.

    Route 1: largest independent family of nonzero submodules.  Any such
    family can be shrunk to minimal submodules without losing independence,
    so the search ranges over the atoms.
    Route 2: a maximal independent family of uniform submodules (largest
    first); maximality forces the sum to be essential, and its length is
    the uniform dimension.
    """
    if lat.order == 1:
        return DimensionResult(0, [], 0, [], {"essential_sum": True})
    atoms = lat.atoms()
    fam1 = _max_independent(lat, atoms)
    uniform = [i for i in range(1, len(lat)) if is_uniform(lat, i)]
    uniform.sort(key=lambda i: (-int(lat.sizes[i]), i))
    fam2: list[int] = []
    acc = lat.bottom
    for u in uniform:
        if lat.inter[acc, u] == 1:
            fam2.append(u)
            acc = lat.join(acc, u)
    essential = is_essential(lat, acc)
    if not essential or len(fam1) != len(fam2):
        raise AssertionError(f"uniform dimension routes disagree: {len(fam1)} vs {len(fam2)} "
                             f"(essential sum: {essential})")
    return DimensionResult(len(fam1), fam1, len(fam2), fam2, {"essential_sum": essential})


def rudim(lat: SubmoduleLattice) -> int:
    return uniform_dimension(lat).value


def max_independent_family(lat: SubmoduleLattice, candidates=None) -> list[int]:
    """Largest independent family drawn from ``candidates`` (all nonzero submodules by default)."""
    if candidates is None:
        candidates = list(range(1, len(lat)))
    return _max_independent(lat, list(candidates))


# ---------------------------------------------------------------------------
# couniform dimension
# ---------------------------------------------------------------------------

def is_coindependent(lat: SubmoduleLattice, family) -> bool:
    """Proper K_1..K_k with K_i + (intersection of the others) = M for every i."""
    family = list(family)
    if any(k == lat.top for k in family):
        return False
    for pos, k in enumerate(family):
        rest = np.ones(lat.order, dtype=np.bool_)
        for other in family[:pos] + family[pos + 1:]:
            rest &= lat.masks[other]
        r = lat.find(rest)
        if lat.join_size(k, r) != lat.order:
            return False
    return True


def corank(lat: SubmoduleLattice) -> DimensionResult:
    """Couniform dimension by coindependent-family search.

    Enlarging each member of a coindependent family to a maximal submodule
    keeps it coindependent, so the search ranges over maximal submodules
    only (lexicographic order, so witnesses are reproducible).  The
    cross-check is the length of the semisimple top M/J(M).
    """
    if lat.order == 1:
        return DimensionResult(0, [], 0, [], {})
    coatoms = lat.coatoms()
    best: list[int] = []

    def dfs(start, chosen):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        for pos in range(start, len(coatoms)):
            if len(chosen) + (len(coatoms) - pos) <= len(best):
                return
            chosen.append(coatoms[pos])
            if is_coindependent(lat, chosen):
                dfs(pos + 1, chosen)
            chosen.pop()

    dfs(0, [])
    j = radical(lat)
    top_length = _composition_length_above(lat, j)
    if top_length != len(best):
        raise AssertionError(f"corank routes disagree: {len(best)} vs length of M/J(M) = {top_length}")
    return DimensionResult(len(best), best, top_length, [j], {"radical_semisimple_top": quotient_is_semisimple(lat, j)})


def _composition_length_above(lat: SubmoduleLattice, i: int) -> int:
    """Length of M/N_i, via a maximal chain N_i < ... < M."""
    length, cur = 0, i
    while cur != lat.top:
        ups = [u for u in lat.above(cur) if u != cur]
        cur = min(ups, key=lambda u: (int(lat.sizes[u]), u))
        length += 1
    return length


def corank_by_surjections(lat: SubmoduleLattice, cap: int = SURJECTION_ORACLE_CAP) -> tuple[int, dict]:
    """Definitional corank: the largest k with M -> P_1 (+) ... (+) P_k onto, P_i nonzero.

    Every surjection factors as M -> M/K ~ (+) L_i/K with K < L_i, the L_i
    independent modulo K and summing to M.  Exhaustive over K and families.
    """
    if lat.order > cap:
        raise CapExceededError(f"surjection oracle refuses |M| = {lat.order} > {cap}")
    if lat.order == 1:
        return 0, {}
    best, witness = 0, {}
    for k in range(len(lat)):
        ks = int(lat.sizes[k])
        over = [l for l in lat.above(k) if l != k]
        target = lat.order // ks

        def dfs(start, chosen, acc, prod):
            nonlocal best, witness
            if acc == lat.top and len(chosen) > best:
                best = len(chosen)
                witness = {"kernel": k, "summands": list(chosen)}
            for pos in range(start, len(over)):
                l = over[pos]
                q = int(lat.sizes[l]) // ks
                if prod * q > target:
                    continue
                nxt = lat.join(acc, l)
                if int(lat.sizes[nxt]) // ks != prod * q:
                    continue
                chosen.append(l)
                dfs(pos + 1, chosen, nxt, prod * q)
                chosen.pop()

        dfs(0, [], k, 1)
    return best, witness


# ---------------------------------------------------------------------------
# ring-level checks
# ---------------------------------------------------------------------------

def right_perfect_report(ring: FiniteRing) -> dict:
    """R/J(R) semisimple and J(R) nilpotent (nilpotent implies T-nilpotent)."""
    reg = FiniteModule.regular(ring)
    lat = submodules(reg, cap=max(DEFAULT_LATTICE_CAP, ring.size))
    j = radical(lat)
    jmask = lat.masks[j]
    top_semisimple = quotient_is_semisimple(lat, j)
    jel = np.flatnonzero(jmask)
    power = jmask.copy()
    index = None
    for k in range(1, ring.size + 2):
        if np.count_nonzero(power) == 1:
            index = k
            break
        pel = np.flatnonzero(power)
        seed = np.zeros(ring.size, dtype=np.bool_)
        seed[ring.zero] = True
        seed[ring.mul[np.ix_(pel, jel)].ravel()] = True
        power = _kernels.closure(seed, ring.add, np.zeros((0, ring.size), dtype=np.int64))
    return {
        "radical": [int(e) for e in jel],
        "radical_labels": [ring.label(e) for e in jel],
        "top_semisimple": bool(top_semisimple),
        "radical_nilpotency_index": index,
        "right_perfect": bool(top_semisimple and index is not None),
    }


def is_right_perfect(ring: FiniteRing) -> bool:
    return right_perfect_report(ring)["right_perfect"]


def section_submodule(trunc: TruncatedInverseModule, p_mask, k: int) -> np.ndarray:
    """<P_k>: the R-submodule of M generated by {m | m x^-k in P}."""
    if not 0 <= k <= trunc.depth:
        raise InvalidSpecError(f"section depth {k} outside 0..{trunc.depth}")
    p_mask = np.asarray(p_mask, dtype=np.bool_)
    base = trunc.base
    hits = [m for m in base.elements if p_mask[trunc.monomial(m, k)]]
    return base.submodule_mask(hits)
