"""Truncated-shadow checks of the uniform and couniform dimension results.

Every check compares two independently computed lattice facts (one about M,
one about the depth-d truncation T = M[x^-1]_{<=d}).  A check whose hypothesis
fails on a fixture is reported as ``skip`` with the reason, never as ``fail``.
These runs verify finite truncations only, not the statements about the full
infinite module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import lattice as L
from .compat import check_compat_propositions, revalidate
from .errors import CapExceededError
from .fixtures import Instance
from .lattice import SubmoduleLattice

PASS, FAIL, SKIP = "pass", "fail", "skip"
SCOPE_NOTE = "verified on finite truncations M[x^-1]_{<=d} only"


@dataclass
class TheoremRun:
    fixture: str
    theorem: str
    depths: list[int]
    verdicts: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        states = {v["status"] for v in self.verdicts}
        if FAIL in states:
            return FAIL
        if PASS in states:
            return PASS
        return SKIP

    def skip(self, reason: str, depth: int | None = None, **extra) -> None:
        self.verdicts.append({"depth": depth, "status": SKIP, "reason": reason, **extra})

    def to_dict(self) -> dict:
        return {"fixture": self.fixture, "theorem": self.theorem, "depths": self.depths,
                "status": self.status, "verdicts": self.verdicts, "notes": self.notes,
                "summary": self.summary}


def _depths(depths) -> list[int]:
    if isinstance(depths, (int, np.integer)):
        return [int(depths)]
    return [int(d) for d in depths]


def _elems(lat: SubmoduleLattice, i: int) -> list[int]:
    return [int(e) for e in lat.elements(i)]


def _candidates(inst: Instance, n, pred: Callable[[int], bool], what: str, run: TheoremRun) -> list[int]:
    """Submodules N of M to test: the given one (if it satisfies the hypothesis) or all that do."""
    lat = inst.lattice
    if n is None and inst.submodule_mask is not None:
        n = inst.submodule_mask
    if n is None:
        return [i for i in range(len(lat)) if pred(i)]
    i = lat.resolve(n)
    if not pred(i):
        run.notes.append(f"hypothesis fails: N = {_elems(lat, i)} is not {what} in M")
        return []
    return [i]


def _truncated(inst: Instance, d: int, run: TheoremRun):
    try:
        return inst.truncation(d), inst.truncation_lattice(d)
    except CapExceededError as exc:
        run.skip(f"cap exceeded: {exc}", d)
        return None, None


def _lift(trunc, tlat: SubmoduleLattice, lat: SubmoduleLattice, i: int) -> int:
    return tlat.find(trunc.lift_mask(lat.masks[i]))


def _stability(values: dict[int, int]) -> dict:
    seq = [values[d] for d in sorted(values)]
    return {"values": {str(d): values[d] for d in sorted(values)}, "stable": len(set(seq)) <= 1}


# ---------------------------------------------------------------------------
# essential submodules
# ---------------------------------------------------------------------------

def _module_neg(mod) -> np.ndarray:
    return np.argmax(mod.add == mod.zero, axis=1)


def audit_essential_witness(inst: Instance, n, d: int) -> dict:
    """Evaluate the candidate witness m(x) (x^(k-1) sigma(r)) on every nonzero element.

    For m(x) of depth k >= 1 with leading coefficient m_k, r is the first ring
    element with 0 != m_k r in N.  Records whether the product lies in N[x^-1]
    and whether it equals m_k r x^-1 - m_k delta(r).  Informational only.
    """
    lat, A, M = inst.lattice, inst.A, inst.module
    i = lat.resolve(n)
    nmask = lat.masks[i]
    trunc = inst.truncation(d)
    lifted = trunc.lift_mask(nmask)
    neg = _module_neg(M)
    counts = {"elements": 0, "depth_zero": 0, "no_r": 0, "in_N": 0, "not_in_N": 0,
              "matches_claim": 0, "differs_from_claim": 0}
    first_miss = None
    first_diff = None
    for p in trunc.elements:
        if p == trunc.zero:
            continue
        counts["elements"] += 1
        k = trunc.depth_of(p)
        if k == 0:
            counts["depth_zero"] += 1
            continue
        mk = int(trunc.digits[p, k])
        hits = [r for r in inst.ring.elements
                if M.act[mk, r] != M.zero and nmask[M.act[mk, r]]]
        if not hits:
            counts["no_r"] += 1
            continue
        r = hits[0]
        a = A.mul(A.x(k - 1), A.const(int(inst.sigma.table[r])))
        w = trunc.act(p, a)
        claim = trunc.encode([int(neg[M.act[mk, inst.delta.table[r]]]), int(M.act[mk, r])])
        if lifted[w]:
            counts["in_N"] += 1
        else:
            counts["not_in_N"] += 1
            if first_miss is None:
                first_miss = {"m": trunc.label(p), "r": inst.ring.label(r), "product": trunc.label(w)}
        if w == claim:
            counts["matches_claim"] += 1
        else:
            counts["differs_from_claim"] += 1
            if first_diff is None:
                first_diff = {"m": trunc.label(p), "r": inst.ring.label(r),
                              "product": trunc.label(w), "claimed": trunc.label(claim)}
    return {"depth": d, "N": _elems(lat, i), **counts,
            "first_not_in_N": first_miss, "first_claim_mismatch": first_diff}


def check_lemma_essential(inst: Instance, depths, n=None, audit: bool = True) -> TheoremRun:
    """N essential in M (M completely compatible) => N[x^-1] essential in the truncation."""
    ds = _depths(depths)
    run = TheoremRun(inst.id, "essential", ds)
    if not inst.compat.completely_compatible:
        run.skip("M is not completely (sigma, delta)-compatible")
        return run
    lat = inst.lattice
    cands = _candidates(inst, n, lambda i: L.is_essential(lat, i), "essential", run)
    if not cands:
        run.skip("no submodule satisfies the hypothesis")
        return run
    for d in ds:
        trunc, tlat = _truncated(inst, d, run)
        if tlat is None:
            continue
        for i in cands:
            li = _lift(trunc, tlat, lat, i)
            ok = L.is_essential(tlat, li)
            v = {"depth": d, "N": _elems(lat, i), "status": PASS if ok else FAIL,
                 "lifted_size": int(tlat.sizes[li])}
            if not ok:
                bad = int(np.flatnonzero(tlat.inter[li, 1:] == 1)[0]) + 1
                v["witness"] = [trunc.label(e) for e in tlat.elements(bad)]
            if audit:
                v["proof_witness_audit"] = audit_essential_witness(inst, i, d)
            run.verdicts.append(v)
    run.notes.append("essentiality decided by lattice search; the proof's witness is logged only")
    return run


# ---------------------------------------------------------------------------
# uniform submodules and rudim
# ---------------------------------------------------------------------------

def check_lemma_uniform(inst: Instance, depths, n=None) -> TheoremRun:
    """N uniform => N[x^-1] uniform."""
    ds = _depths(depths)
    run = TheoremRun(inst.id, "uniform", ds)
    lat = inst.lattice
    cands = _candidates(inst, n, lambda i: L.is_uniform(lat, i), "uniform", run)
    if not cands:
        run.skip("no submodule satisfies the hypothesis")
        return run
    for d in ds:
        trunc, tlat = _truncated(inst, d, run)
        if tlat is None:
            continue
        for i in cands:
            li = _lift(trunc, tlat, lat, i)
            ok = L.is_uniform(tlat, li)
            v = {"depth": d, "N": _elems(lat, i), "status": PASS if ok else FAIL,
                 "lifted_size": int(tlat.sizes[li])}
            if not ok:
                sub = [s for s in tlat.below(li) if s != 0]
                pair = next((a, b) for a in sub for b in sub if tlat.inter[a, b] == 1)
                v["witness"] = [[trunc.label(e) for e in tlat.elements(s)] for s in pair]
            run.verdicts.append(v)
    return run


def check_theorem_rudim(inst: Instance, depths) -> TheoremRun:
    """rudim(truncation) = rudim(M) for completely compatible M."""
    ds = _depths(depths)
    run = TheoremRun(inst.id, "rudim", ds)
    if not inst.compat.completely_compatible:
        run.skip("M is not completely (sigma, delta)-compatible")
        return run
    lat = inst.lattice
    base = L.uniform_dimension(lat)
    values = {}
    for d in ds:
        trunc, tlat = _truncated(inst, d, run)
        if tlat is None:
            continue
        res = L.uniform_dimension(tlat)
        values[d] = res.value
        # the lifts of a uniform family with essential sum should again be one
        lifts = [_lift(trunc, tlat, lat, u) for u in base.check_witness]
        lifted_ok = (L._independent(tlat, lifts)
                     and all(L.is_uniform(tlat, u) for u in lifts))
        acc = tlat.bottom
        for u in lifts:
            acc = tlat.join(acc, u)
        lifted_ok = lifted_ok and L.is_essential(tlat, acc)
        ok = res.value == base.value and lifted_ok
        run.verdicts.append({
            "depth": d, "status": PASS if ok else FAIL,
            "rudim_M": base.value, "rudim_truncation": res.value,
            "lifted_family_uniform_essential": bool(lifted_ok),
            "family_M": [_elems(lat, u) for u in base.check_witness],
            "family_truncation": [[trunc.label(e) for e in tlat.elements(u)] for u in res.witness],
        })
    run.summary["stabilization"] = _stability(values)
    if values and not run.summary["stabilization"]["stable"]:
        run.notes.append("rudim of the truncations varies with d; flagged for investigation")
    return run


# ---------------------------------------------------------------------------
# small submodules and hollowness
# ---------------------------------------------------------------------------

def _maximal_r_submodule_over(trunc, q_mask) -> np.ndarray:
    """Greedy maximal R-submodule of the truncation containing q_mask (as an R-module)."""
    rmod = trunc.r_module()
    cur = rmod.submodule_mask(np.flatnonzero(q_mask))
    for m in trunc.elements:
        if cur[m]:
            continue
        grown = rmod.submodule_mask(np.concatenate([np.flatnonzero(cur), [m]]))
        if not grown.all():
            cur = grown
    return cur


def _section_argument(inst: Instance, trunc, tlat, lat, i: int, li: int) -> dict:
    """Reconstruct the converse direction: from Q + N[x^-1] = T with Q proper, find
    a maximal R-submodule P over Q and a depth k with N not in <P_k>, <P_k> + N = M, <P_k> != M."""
    n_total = trunc.size
    qs = [q for q in range(tlat.top) if tlat.join_size(q, li) == n_total]
    q = qs[0]
    p_mask = _maximal_r_submodule_over(trunc, tlat.masks[q])
    nmask = lat.masks[i]
    for k in range(trunc.depth + 1):
        pk = L.section_submodule(trunc, p_mask, k)
        pi = lat.find(pk)
        if lat.contains[pi, i]:
            continue
        if lat.join_size(pi, i) == lat.order and pi != lat.top:
            return {"found": True, "k": k, "Q": [trunc.label(e) for e in tlat.elements(q)],
                    "P_size": int(p_mask.sum()), "P_k": [int(e) for e in np.flatnonzero(pk)]}
    return {"found": False, "Q": [trunc.label(e) for e in tlat.elements(q)],
            "P_size": int(p_mask.sum()), "N": [int(e) for e in np.flatnonzero(nmask)]}


def _bass_record(inst: Instance, d: int, tlat) -> dict:
    rec = {"M_bass": L.is_bass(inst.lattice), "truncation_A_bass": L.is_bass(tlat)}
    try:
        rlat = L.submodules(inst.truncation(d).r_module(), inst.caps.lattice)
        rec["truncation_R_bass"] = L.is_bass(rlat)
    except CapExceededError:
        rec["truncation_R_bass"] = None
    return rec


def check_lemma_small(inst: Instance, depths, n=None) -> TheoremRun:
    """N small in M <=> N[x^-1] small in the truncation, with the section argument for <=."""
    ds = _depths(depths)
    run = TheoremRun(inst.id, "small", ds)
    lat = inst.lattice
    cands = _candidates(inst, n, lambda i: True, "a submodule", run)
    for d in ds:
        trunc, tlat = _truncated(inst, d, run)
        if tlat is None:
            continue
        bass = _bass_record(inst, d, tlat)
        for i in cands:
            li = _lift(trunc, tlat, lat, i)
            small_m, small_t = L.is_small(lat, i), L.is_small(tlat, li)
            v = {"depth": d, "N": _elems(lat, i), "small_in_M": small_m,
                 "small_in_truncation": small_t, "hypotheses": bass}
            ok = small_m == small_t
            if not small_t:
                v["section_argument"] = _section_argument(inst, trunc, tlat, lat, i, li)
                ok = ok and v["section_argument"]["found"]
            v["status"] = PASS if ok else FAIL
            run.verdicts.append(v)
    run.summary["right_perfect"] = inst.perfect["right_perfect"]
    return run


def check_lemma_hollow_simple(inst: Instance, depths) -> TheoremRun:
    """M simple => truncation hollow, and any submodule reaching depth d is everything."""
    ds = _depths(depths)
    run = TheoremRun(inst.id, "hollow-simple", ds)
    lat = inst.lattice
    if len(lat) != 2:
        run.skip("M is not simple")
        return run
    for d in ds:
        trunc, tlat = _truncated(inst, d, run)
        if tlat is None:
            continue
        hollow = L.is_hollow(tlat)
        shallow = trunc.slice_mask(d - 1) if d >= 1 else np.zeros(trunc.size, dtype=np.bool_)
        shallow = shallow.copy()
        shallow[trunc.zero] = True
        offenders = [s for s in range(tlat.top) if np.any(tlat.masks[s] & ~shallow)]
        ok = hollow and not offenders
        v = {"depth": d, "status": PASS if ok else FAIL, "hollow": hollow,
             "proper_submodules": int(tlat.top), "proper_reaching_depth_d": len(offenders)}
        if offenders:
            v["witness"] = [trunc.label(e) for e in tlat.elements(offenders[0])]
        run.verdicts.append(v)
    return run


def check_lemma_hollow(inst: Instance, depths) -> TheoremRun:
    """M hollow <=> truncation hollow."""
    ds = _depths(depths)
    run = TheoremRun(inst.id, "hollow", ds)
    lat = inst.lattice
    hollow_m = L.is_hollow(lat)
    for d in ds:
        trunc, tlat = _truncated(inst, d, run)
        if tlat is None:
            continue
        hollow_t = L.is_hollow(tlat)
        v = {"depth": d, "status": PASS if hollow_m == hollow_t else FAIL,
             "hollow_M": hollow_m, "hollow_truncation": hollow_t,
             "hypotheses": _bass_record(inst, d, tlat)}
        if not hollow_t and tlat.top > 0:
            proper = np.arange(tlat.top)
            sizes = tlat.join_size(proper[:, None], proper[None, :])
            a, b = np.argwhere(sizes == tlat.order)[0]
            v["sum_to_whole"] = [[trunc.label(e) for e in tlat.elements(int(s))] for s in (a, b)]
        run.verdicts.append(v)
    return run


# ---------------------------------------------------------------------------
# corank
# ---------------------------------------------------------------------------

def check_theorem_corank(inst: Instance, depths) -> TheoremRun:
    """corank(truncation) = corank(M); both tops M/J(M) semisimple."""
    ds = _depths(depths)
    run = TheoremRun(inst.id, "corank", ds)
    perfect = inst.perfect
    run.summary["right_perfect"] = perfect["right_perfect"]
    lat = inst.lattice
    base = L.corank(lat)
    values = {}
    for d in ds:
        trunc, tlat = _truncated(inst, d, run)
        if tlat is None:
            continue
        bass = _bass_record(inst, d, tlat)
        if not (perfect["right_perfect"] or bass["truncation_R_bass"]):
            run.skip("neither right perfect R nor a Bass truncation", d)
            continue
        res = L.corank(tlat)
        values[d] = res.value
        top_m = L.quotient_is_semisimple(lat, L.radical(lat))
        top_t = L.quotient_is_semisimple(tlat, L.radical(tlat))
        ok = res.value == base.value and top_m and top_t
        run.verdicts.append({
            "depth": d, "status": PASS if ok else FAIL,
            "corank_M": base.value, "corank_truncation": res.value,
            "M_mod_J_semisimple": top_m, "truncation_mod_J_semisimple": top_t,
            "coindependent_M": [_elems(lat, k) for k in base.witness],
            "coindependent_truncation_sizes": [int(tlat.sizes[k]) for k in res.witness],
            "hypotheses": bass,
        })
    run.summary["stabilization"] = _stability(values)
    if values and not run.summary["stabilization"]["stable"]:
        run.notes.append("corank of the truncations varies with d; flagged for investigation")
    return run


THEOREMS = {
    "essential": check_lemma_essential,
    "uniform": check_lemma_uniform,
    "rudim": check_theorem_rudim,
    "small": check_lemma_small,
    "hollow-simple": check_lemma_hollow_simple,
    "hollow": check_lemma_hollow,
    "corank": check_theorem_corank,
}


def run_theorem(inst: Instance, theorem: str, depths) -> TheoremRun:
    return THEOREMS[theorem](inst, depths)


# ---------------------------------------------------------------------------
# per-fixture aggregates
# ---------------------------------------------------------------------------

def exponent_audit(inst: Instance, max_depth: int = 2) -> dict:
    """Compare the inverse-ring product with the variant placing all terms at x^-(k+k')."""
    A, ring = inst.A, inst.ring
    total = differ = 0
    example = None
    for k in range(max_depth + 1):
        for kk in range(max_depth + 1):
            for r in ring.elements:
                for s in ring.elements:
                    total += 1
                    good = A.inv_monomial(r, k) * A.inv_monomial(s, kk)
                    bad = A.collapsed_exponent_product(r, k, s, kk)
                    if good != bad:
                        differ += 1
                        if example is None:
                            example = {"r": ring.label(r), "k": k, "s": ring.label(s), "k'": kk,
                                       "product": repr(good), "collapsed": repr(bad)}
    return {"pairs": total, "differ": differ, "first_difference": example}


def dimension_table(inst: Instance, depth: int) -> list[dict]:
    """rudim, corank, J and semisimplicity of M and of each truncation d = 1..depth."""
    rows = []
    for d in [None] + list(range(1, depth + 1)):
        if d is None:
            lat, name = inst.lattice, "M"
        else:
            try:
                lat, name = inst.truncation_lattice(d), f"M[x^-1]<={d}"
            except CapExceededError as exc:
                rows.append({"object": f"M[x^-1]<={d}", "skipped": str(exc)})
                continue
        j = L.radical(lat)
        rows.append({
            "object": name, "depth": d, "size": lat.order, "submodules": len(lat),
            "rudim": L.rudim(lat), "corank": L.corank(lat).value,
            "radical": _elems(lat, j), "semisimple": L.is_semisimple(lat),
            "top_semisimple": L.quotient_is_semisimple(lat, j),
        })
    return rows


def compat_section(inst: Instance) -> dict:
    rep = inst.compat
    out = rep.to_dict()
    out["witnesses_revalidate"] = all(revalidate(inst.module, inst.sigma, inst.delta, k, w)
                                      for k, w in rep.witnesses.items())
    dual = inst.A.dual
    out["propositions"] = check_compat_propositions(inst.module, inst.sigma, inst.delta,
                                                    dual.sigma, dual.delta, inst.lattice)
    return out


def run_fixture(inst: Instance, depth: int, theorems: Iterable[str] | None = None) -> dict:
    ds = list(range(1, depth + 1))
    names = list(theorems) if theorems is not None else list(THEOREMS)
    runs = [run_theorem(inst, t, ds) for t in names]
    comp = compat_section(inst)
    laws = {k: v.to_dict() for k, v in inst.laws.items()}
    failed = [r.theorem for r in runs if r.status == FAIL]
    props = comp["propositions"]
    if props["applicable"] and not props["ok"]:
        failed.append("compat-propositions")
    if not comp["witnesses_revalidate"]:
        failed.append("compat-witnesses")
    if not all(v["ok"] for v in laws.values()):
        failed.append("laws")
    return {
        "id": inst.id,
        "fixture": inst.spec,
        "laws": laws,
        "compat": comp,
        "right_perfect": inst.perfect,
        "dimensions": dimension_table(inst, depth),
        "exponent_audit": exponent_audit(inst, min(depth, 2)),
        "theorem_runs": [r.to_dict() for r in runs],
        "failed": failed,
        "status": FAIL if failed else PASS,
    }


def run_suite(instances: Iterable[Instance], depth: int = 2) -> dict:
    """All checks for d = 1..depth on every fixture, sorted by fixture id."""
    fixtures = [run_fixture(inst, depth) for inst in sorted(instances, key=lambda i: i.id)]
    counts = {PASS: 0, FAIL: 0, SKIP: 0}
    for fx in fixtures:
        for r in fx["theorem_runs"]:
            counts[r["status"]] += 1
    return {
        "scope": SCOPE_NOTE,
        "depth": depth,
        "fixtures": fixtures,
        "run_counts": counts,
        "status": FAIL if any(f["status"] == FAIL for f in fixtures) else PASS,
    }
