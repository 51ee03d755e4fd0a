"""Hot loops over dense index tables.

Every kernel has a pure-numpy implementation and, when numba is importable,
an ``@njit`` twin with identical semantics.  The active backend is chosen once
at import time:

    OREDIM_NUMBA=0   force the numpy path
    OREDIM_NUMBA=1   use numba when available (default)

Both implementations stay importable as ``numpy_backend`` and
``numba_backend`` so tests and the benchmark can compare them directly.

Conventions: binary operation tables are ``int64[n, n]``; unary maps and
action tables are ``int64[n]`` / ``int64[k, n]``; subsets are ``bool[n]``
masks.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an install dependency
    numba = None


# ---------------------------------------------------------------------------
# numpy path
# ---------------------------------------------------------------------------

def _np_first(bad):
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return 0, None
    return int(len(hits)), tuple(int(v) for v in hits[0])


def np_assoc_violations(op):
    """Count triples with (ab)c != a(bc); return (count, first triple)."""
    n = op.shape[0]
    left = op[op, :]                      # left[a, b, c] = (ab)c
    right = op[np.arange(n)[:, None, None], op[None, :, :]]   # a(bc)
    return _np_first(left != right)


def np_distrib_violations(add, mul):
    """Left law a(b+c) = ab+ac and right law (a+b)c = ac+bc."""
    n = add.shape[0]
    a = np.arange(n)[:, None, None]
    lhs = mul[a, add[None, :, :]]
    rhs = add[mul[:, :, None], mul[:, None, :]]
    left = _np_first(lhs != rhs)
    c = np.arange(n)[None, None, :]
    lhs = mul[add[:, :, None], c]
    rhs = add[mul[:, None, :], mul[None, :, :]]
    right = _np_first(lhs != rhs)
    return left, right


def np_closure(seed, add, actions):
    mask = seed.copy()
    count = int(mask.sum())
    while True:
        idx = np.flatnonzero(mask)
        mask[add[np.ix_(idx, idx)].ravel()] = True
        if actions.shape[0]:
            mask[actions[:, idx].ravel()] = True
        new = int(mask.sum())
        if new == count:
            return mask
        count = new


def np_join(a, b, add):
    out = np.zeros(a.shape[0], dtype=np.bool_)
    out[add[np.ix_(np.flatnonzero(a), np.flatnonzero(b))].ravel()] = True
    return out


numpy_backend = SimpleNamespace(
    name="numpy",
    assoc_violations=np_assoc_violations,
    distrib_violations=np_distrib_violations,
    closure=np_closure,
    join=np_join,
)


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

def _build_numba_backend():
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def _assoc(op):
        n = op.shape[0]
        count = 0
        fa = fb = fc = -1
        for a in range(n):
            for b in range(n):
                ab = op[a, b]
                for c in range(n):
                    if op[ab, c] != op[a, op[b, c]]:
                        if count == 0:
                            fa, fb, fc = a, b, c
                        count += 1
        return count, fa, fb, fc

    @njit
    def _distrib(add, mul):
        n = add.shape[0]
        lc = rc = 0
        l0 = l1 = l2 = r0 = r1 = r2 = -1
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]:
                        if lc == 0:
                            l0, l1, l2 = a, b, c
                        lc += 1
                    if mul[add[a, b], c] != add[mul[a, c], mul[b, c]]:
                        if rc == 0:
                            r0, r1, r2 = a, b, c
                        rc += 1
        return lc, l0, l1, l2, rc, r0, r1, r2

    @njit
    def _closure(seed, add, actions):
        n = seed.shape[0]
        mask = seed.copy()
        members = np.empty(n, dtype=np.int64)
        size = 0
        for i in range(n):
            if mask[i]:
                members[size] = i
                size += 1
        # every ordered pair of members is summed once; no commutativity assumed
        i = 0
        while i < size:
            e = members[i]
            for j in range(i + 1):
                f = members[j]
                for s in (add[e, f], add[f, e]):
                    if not mask[s]:
                        mask[s] = True
                        members[size] = s
                        size += 1
            for k in range(actions.shape[0]):
                t = actions[k, e]
                if not mask[t]:
                    mask[t] = True
                    members[size] = t
                    size += 1
            i += 1
        return mask

    @njit
    def _join(a, b, add):
        n = a.shape[0]
        out = np.zeros(n, dtype=np.bool_)
        for i in range(n):
            if a[i]:
                for j in range(n):
                    if b[j]:
                        out[add[i, j]] = True
        return out

    def assoc_violations(op):
        count, a, b, c = _assoc(op)
        return int(count), ((int(a), int(b), int(c)) if count else None)

    def distrib_violations(add, mul):
        lc, l0, l1, l2, rc, r0, r1, r2 = _distrib(add, mul)
        return ((int(lc), (int(l0), int(l1), int(l2)) if lc else None),
                (int(rc), (int(r0), int(r1), int(r2)) if rc else None))

    return SimpleNamespace(
        name="numba",
        assoc_violations=assoc_violations,
        distrib_violations=distrib_violations,
        closure=_closure,
        join=_join,
    )


numba_backend = _build_numba_backend() if numba is not None else None

_want_numba = os.environ.get("OREDIM_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")
backend = numba_backend if (_want_numba and numba_backend is not None) else numpy_backend

assoc_violations = backend.assoc_violations
distrib_violations = backend.distrib_violations
closure = backend.closure
join = backend.join
