"""(sigma, delta)-compatibility of finite modules, decided exhaustively.

sigma-compatible:  m r = 0  <=>  m sigma(r) = 0
delta-compatible:  m r = 0   => m delta(r) = 0      (one direction only)

"Completely" means the condition holds in every quotient M/N.  In M/N the
statement ``m r = 0`` reads ``m r in N``, so quotients never have to be built
for the sweep itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import SubmoduleLattice, submodules
from .modules import FiniteModule
from .rings import RingMap


@dataclass(frozen=True)
class Witness:
    m: int
    r: int
    submodule: tuple[int, ...]      # elements of N; (zero,) for plain compatibility

    def to_dict(self):
        return {"m": self.m, "r": self.r, "N": list(self.submodule)}


@dataclass
class CompatReport:
    sigma_compatible: bool
    delta_compatible: bool
    completely_sigma_compatible: bool
    completely_delta_compatible: bool
    witnesses: dict[str, Witness] = field(default_factory=dict)
    quotients_checked: int = 0

    @property
    def compatible(self) -> bool:
        return self.sigma_compatible and self.delta_compatible

    @property
    def completely_compatible(self) -> bool:
        return self.completely_sigma_compatible and self.completely_delta_compatible

    def to_dict(self):
        return {
            "sigma_compatible": self.sigma_compatible,
            "delta_compatible": self.delta_compatible,
            "completely_sigma_compatible": self.completely_sigma_compatible,
            "completely_delta_compatible": self.completely_delta_compatible,
            "completely_compatible": self.completely_compatible,
            "quotients_checked": self.quotients_checked,
            "witnesses": {k: w.to_dict() for k, w in sorted(self.witnesses.items())},
        }


def _zero_mask(mod: FiniteModule) -> np.ndarray:
    mask = np.zeros(mod.size, dtype=np.bool_)
    mask[mod.zero] = True
    return mask


def _sigma_violation(mod, sigma_table, in_n):
    """First (m, r) with [m r in N] != [m sigma(r) in N]."""
    lhs = in_n[mod.act]
    rhs = in_n[mod.act[:, sigma_table]]
    bad = np.argwhere(lhs != rhs)
    return None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))


def _delta_violation(mod, delta_table, in_n):
    """First (m, r) with m r in N but m delta(r) not in N."""
    bad = np.argwhere(in_n[mod.act] & ~in_n[mod.act[:, delta_table]])
    return None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))


def is_sigma_compatible(mod: FiniteModule, sigma: RingMap, n_mask=None) -> tuple[bool, Witness | None]:
    in_n = _zero_mask(mod) if n_mask is None else np.asarray(n_mask, dtype=np.bool_)
    hit = _sigma_violation(mod, sigma.table, in_n)
    if hit is None:
        return True, None
    return False, Witness(hit[0], hit[1], tuple(int(e) for e in np.flatnonzero(in_n)))


def is_delta_compatible(mod: FiniteModule, delta: RingMap, n_mask=None) -> tuple[bool, Witness | None]:
    in_n = _zero_mask(mod) if n_mask is None else np.asarray(n_mask, dtype=np.bool_)
    hit = _delta_violation(mod, delta.table, in_n)
    if hit is None:
        return True, None
    return False, Witness(hit[0], hit[1], tuple(int(e) for e in np.flatnonzero(in_n)))


def is_completely_compatible(mod: FiniteModule, sigma: RingMap, delta: RingMap,
                             lattice: SubmoduleLattice | None = None) -> CompatReport:
    """Run both checks on M and on every quotient M/N (witnesses are first in canonical order)."""
    lat = lattice if lattice is not None else submodules(mod)
    s_ok, s_wit = is_sigma_compatible(mod, sigma)
    d_ok, d_wit = is_delta_compatible(mod, delta)
    rep = CompatReport(s_ok, d_ok, True, True, quotients_checked=len(lat))
    if s_wit:
        rep.witnesses["sigma"] = s_wit
    if d_wit:
        rep.witnesses["delta"] = d_wit
    for i in range(len(lat)):
        mask = lat.masks[i]
        if rep.completely_sigma_compatible:
            ok, wit = is_sigma_compatible(mod, sigma, mask)
            if not ok:
                rep.completely_sigma_compatible = False
                rep.witnesses["completely_sigma"] = wit
        if rep.completely_delta_compatible:
            ok, wit = is_delta_compatible(mod, delta, mask)
            if not ok:
                rep.completely_delta_compatible = False
                rep.witnesses["completely_delta"] = wit
    return rep


def revalidate(mod: FiniteModule, sigma: RingMap, delta: RingMap, kind: str, wit: Witness) -> bool:
    """Independently re-evaluate a reported witness; True when it is a genuine violation."""
    in_n = set(wit.submodule)
    mr = int(mod.act[wit.m, wit.r]) in in_n
    if kind.endswith("sigma"):
        return mr != (int(mod.act[wit.m, int(sigma.table[wit.r])]) in in_n)
    return mr and int(mod.act[wit.m, int(delta.table[wit.r])]) not in in_n


# ---------------------------------------------------------------------------
# consequences of complete compatibility
# ---------------------------------------------------------------------------

def _powers(table: np.ndarray, count: int) -> list[np.ndarray]:
    out = [np.arange(len(table))]
    for _ in range(count - 1):
        out.append(table[out[-1]])
    return out


def _sigma_orbit_length(sigma: RingMap) -> int:
    return sigma.order() or sigma.ring.size


def _delta_span(delta: RingMap) -> int:
    """Number of powers delta^0..delta^k that can be nonzero, plus the first zero power."""
    if delta.nilpotency is not None:
        return int(delta.nilpotency.max()) + 1
    return delta.ring.size + 1


@dataclass
class PropositionItem:
    ok: bool
    checked: int
    witness: dict | None = None

    def to_dict(self):
        return {"ok": self.ok, "checked": self.checked, "witness": self.witness}


def _first_failure(premise, conclusion, N, labels):
    bad = np.argwhere(premise & ~conclusion)
    if len(bad) == 0:
        return None
    return {**dict(zip(labels, (int(v) for v in bad[0]))), "N": [int(e) for e in N]}


def check_compat_propositions(mod: FiniteModule, sigma: RingMap, delta: RingMap,
                              dual_sigma: RingMap | None = None, dual_delta: RingMap | None = None,
                              lattice: SubmoduleLattice | None = None) -> dict:
    """Exhaustively test the standard consequences of complete (sigma, delta)-compatibility.

    a1: m r in N  =>  m sigma^i(r), m delta^j(r) in N
    a2: m r r' in N  =>  m sigma(delta^j(r)) delta(r'),  m sigma^i(delta(r)) delta^j(r') in N,
        and in particular m r delta^j(r'), m delta^j(r) r' in N
    a3: m r r' in N or m sigma(r) r' in N  =>  m delta(r) r' in N
    b1: completely compatible => compatible
    b2: every quotient M/N is again completely compatible
    c:  with sigma bijective, M is completely (sigma', delta')-compatible

    Returns {"applicable": bool, "items": {...}}; items are only evaluated when M
    is completely compatible.
    """
    lat = lattice if lattice is not None else submodules(mod)
    base = is_completely_compatible(mod, sigma, delta, lat)
    out = {"applicable": base.completely_compatible, "items": {}}
    if not base.completely_compatible:
        return out
    ring = mod.ring
    act, mul = mod.act, ring.mul
    s_pows = _powers(sigma.table, _sigma_orbit_length(sigma))
    d_pows = _powers(delta.table, _delta_span(delta))
    s, d = sigma.table, delta.table
    items = {k: PropositionItem(True, 0) for k in ("a1", "a2", "a3")}

    def note(key, premise, conclusion, N, labels):
        item = items[key]
        item.checked += int(premise.sum())
        if item.ok:
            wit = _first_failure(premise, conclusion, N, labels)
            if wit is not None:
                item.ok = False
                item.witness = wit

    for i in range(len(lat)):
        in_n = lat.masks[i]
        N = lat.elements(i)
        mr = in_n[act]                                    # [m, r]
        for sp in s_pows:
            note("a1", mr, in_n[act[:, sp]], N, ("m", "r"))
        for dp in d_pows:
            note("a1", mr, in_n[act[:, dp]], N, ("m", "r"))

        mrr = in_n[act[:, mul]]                           # [m, r, r']
        for dp in d_pows:
            note("a2", mrr, in_n[act[:, mul[s[dp][:, None], d[None, :]]]], N, ("m", "r", "r'"))
            note("a2", mrr, in_n[act[:, mul[np.arange(ring.size)[:, None], dp[None, :]]]], N, ("m", "r", "r'"))
            note("a2", mrr, in_n[act[:, mul[dp[:, None], np.arange(ring.size)[None, :]]]], N, ("m", "r", "r'"))
            for sp in s_pows:
                note("a2", mrr, in_n[act[:, mul[sp[d][:, None], dp[None, :]]]], N, ("m", "r", "r'"))

        msr = in_n[act[:, mul[s[:, None], np.arange(ring.size)[None, :]]]]
        mdr = in_n[act[:, mul[d[:, None], np.arange(ring.size)[None, :]]]]
        note("a3", mrr | msr, mdr, N, ("m", "r", "r'"))

    result = {k: v.to_dict() for k, v in items.items()}
    result["b1"] = PropositionItem(base.compatible, 1).to_dict()

    b2_ok, b2_wit = True, None
    for i in range(len(lat)):
        q = mod.quotient(lat.masks[i])
        rep = is_completely_compatible(q, sigma, delta)
        if not rep.completely_compatible:
            b2_ok, b2_wit = False, {"N": [int(e) for e in lat.elements(i)]}
            break
    result["b2"] = PropositionItem(b2_ok, len(lat), b2_wit).to_dict()

    if dual_sigma is not None and dual_delta is not None:
        rep = is_completely_compatible(mod, dual_sigma, dual_delta, lat)
        wit = None if rep.completely_compatible else rep.to_dict()["witnesses"]
        result["c"] = PropositionItem(rep.completely_compatible, len(lat), wit).to_dict()

    out["items"] = result
    out["ok"] = all(v["ok"] for v in result.values())
    return out
