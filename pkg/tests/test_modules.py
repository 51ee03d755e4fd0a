from functools import lru_cache
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import iterate_inverse_action
from oredim.errors import CapExceededError, InvalidSpecError, LawViolationError
from oredim.fixtures import load_bundled
from oredim.modules import (FiniteModule, InversePoly, act, act_ring, act_ring_iterated,
                            act_x_power, truncate, verify_module)
from oredim.rings import zmod


def generating_set(A):
    R = A.ring
    gens = [A.const(r) for r in R.elements]
    gens += [A.x(), A.x(2)]
    gens += [A.poly([R.zero, r]) for r in R.elements]
    return gens


def test_jordan_regular_action(bundled):
    A = bundled["jordan4"].A
    R = A.ring
    M = FiniteModule.regular(R)
    p = InversePoly.of(M, [M.zero, R.one])
    got = act_ring(A, p, R.element([0, 1]))
    assert repr(got) == "t^2 + t*x^-1"


def test_action_by_one_and_x(bundled, fixture_id):
    inst = bundled[fixture_id]
    T = inst.truncation(2)
    one = inst.A.const(inst.ring.one)
    for i in T.elements:
        assert T.act(i, one) == i
        # x drops the constant term and shifts
        d = T.digits[i]
        assert T.act_x(i) == T.encode(list(d[1:]))


def test_x_power_beyond_depth_is_zero():
    R = zmod(4)
    M = FiniteModule.regular(R)
    p = InversePoly.of(M, [1, 2])
    assert act_x_power(p, 1).coeffs == (2,)
    assert act_x_power(p, 3).is_zero()
    with pytest.raises(ValueError):
        act_x_power(p, -1)


def test_closed_form_matches_iterated_rule(bundled, weyl3):
    for inst in list(bundled.values()) + [weyl3]:
        A, M = inst.A, inst.module
        sd, dd = A.dual.sigma.table, A.dual.delta.table
        for m, r, k in product(M.elements, inst.ring.elements, range(5)):
            closed = act_ring(A, InversePoly.of(M, [M.zero] * k + [m]), r)
            assert closed.coeffs == iterate_inverse_action(M, sd, dd, m, k, r)
            assert closed == act_ring_iterated(A, m, k, r, M)


@pytest.mark.parametrize("fid", ["zmod4", "jordan4", "qplane3"])
def test_well_defined_on_generating_set(bundled, fid):
    inst = bundled[fid]
    A = inst.A
    T = inst.truncation(2)
    gens = generating_set(A)
    for a, b in product(gens, repeat=2):
        ab = a * b
        for p in T.elements:
            assert T.act(T.act(p, a), b) == T.act(p, ab)


def test_well_defined_on_noncommuting_example(weyl3):
    A = weyl3.A
    T = weyl3.truncation(1)
    gens = generating_set(A)
    for a, b in product(gens, repeat=2):
        ab = a * b
        for p in T.elements:
            assert T.act(T.act(p, a), b) == T.act(p, ab)


def test_table_action_matches_polynomial_action(bundled):
    inst = bundled["jordan4"]
    T = inst.truncation(2)
    A = inst.A
    for i in T.elements:
        p = T.poly(i)
        for a in generating_set(A):
            assert T.poly(T.act(i, a)) == act(A, p, a)


def test_truncations_are_modules(bundled, fixture_id):
    inst = bundled[fixture_id]
    for d in range(3):
        T = inst.truncation(d)
        assert T.size == inst.module.size ** (d + 1)
        assert verify_module(T.r_module()).ok


def test_truncation_sizes(bundled):
    assert len(bundled["jordan4"].truncation(2)) == 8
    assert len(bundled["zmod4"].truncation(1)) == 16


def test_depth_zero_is_the_base(bundled):
    inst = bundled["zmod4"]
    T = inst.truncation(0)
    assert np.array_equal(T.add, inst.module.add)
    assert np.array_equal(T.ring_action, inst.module.act)
    assert np.all(T.x_action == T.zero)


def test_tower_embedding(bundled, fixture_id):
    inst = bundled[fixture_id]
    T1, T2 = inst.truncation(1), inst.truncation(2)
    embed = np.array([T2.encode(T1.digits[i]) for i in T1.elements])
    for r in inst.ring.elements:
        assert np.array_equal(embed[T1.ring_action[:, r]], T2.ring_action[embed, r])
    assert np.array_equal(embed[T1.x_action], T2.x_action[embed])
    assert np.array_equal(T2.slice_mask(1).nonzero()[0], np.sort(embed))


def test_lifted_submodules_are_stable(bundled, fixture_id):
    inst = bundled[fixture_id]
    T = inst.truncation(1)
    for mask in inst.lattice.masks:
        lifted = T.lift_mask(mask)
        assert lifted.sum() == mask.sum() ** 2
        for row in T.actions:
            assert np.all(lifted[row[lifted]])


def test_depth_slices_are_stable_under_r(bundled, fixture_id):
    inst = bundled[fixture_id]
    T = inst.truncation(2)
    for k in range(3):
        sl = T.slice_mask(k)
        assert np.all(sl[T.ring_action[sl]])
        assert np.all(sl[T.x_action[sl]])


def test_depth_of(bundled):
    T = bundled["zmod4"].truncation(2)
    assert T.depth_of(T.zero) == -1
    assert T.depth_of(T.monomial(3, 2)) == 2
    assert T.depth_of(T.encode([1, 1])) == 1
    assert T.label(T.encode([1, 0, 2])) == "1 + 2*x^-2"


def test_truncation_cap(bundled):
    inst = bundled["zmod4"]
    with pytest.raises(CapExceededError):
        truncate(inst.A, inst.module, 4)
    assert len(truncate(inst.A, inst.module, 4, cap=1024)) == 1024
    with pytest.raises(InvalidSpecError):
        truncate(inst.A, inst.module, -1)


def test_mismatched_ring_rejected(bundled):
    with pytest.raises(InvalidSpecError):
        truncate(bundled["zmod4"].A, bundled["gf4-frob"].module, 1)


def test_module_constructions():
    R = zmod(4)
    M = FiniteModule.regular(R)
    two = M.submodule_mask([2])
    assert list(np.flatnonzero(two)) == [0, 2]
    Q = M.quotient(two)
    assert Q.size == 2 and verify_module(Q).ok
    N = M.restrict(two)
    assert N.size == 2 and verify_module(N).ok
    S = M.direct_sum(Q)
    assert S.size == 8 and verify_module(S).ok
    assert FiniteModule.zero_module(R).size == 1
    with pytest.raises(InvalidSpecError):
        M.restrict(np.array([True, True, False, False]))
    with pytest.raises(InvalidSpecError):
        M.direct_sum(FiniteModule.regular(zmod(2)))


def test_bad_module_tables_rejected():
    R = zmod(2)
    add = [[0, 1], [1, 0]]
    with pytest.raises(LawViolationError) as exc:
        FiniteModule.from_tables(R, add, [[0, 1], [1, 1]])
    assert exc.value.report.first("unital").witness == (0,)
    assert exc.value.report.first("action_associative").witness == (0, 0, 1)
    with pytest.raises(InvalidSpecError):
        FiniteModule(R, add, [[0, 0, 0], [1, 1, 1]])


def test_truncation_lattice_grows(bundled):
    inst = bundled["zmod4"]
    sizes = [len(inst.truncation_lattice(d)) for d in range(3)]
    assert sizes == [3, 7, 13]


@lru_cache(maxsize=None)
def _zmod4_depth2():
    inst = next(x for x in load_bundled() if x.id == "zmod4")
    return inst.A, inst.truncation(2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 63), st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))
def test_action_is_additive_and_associative(p, r, s, i, j):
    A, T = _zmod4_depth2()
    a = A.poly([0] * i + [r])
    b = A.poly([0] * j + [s])
    assert T.act(p, a + b) == T.add[T.act(p, a), T.act(p, b)]
    assert T.act(T.act(p, a), b) == T.act(p, a * b)

