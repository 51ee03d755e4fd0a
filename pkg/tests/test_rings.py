import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oredim.errors import InvalidSpecError, LawViolationError
from oredim.rings import (build_ring, dual_maps, endomorphism_from_table, frobenius_map,
                          galois_field, identity_map, inner_derivation, nilpotency_index,
                          nilpotency_table, product_ring, truncated_derivative, truncated_poly,
                          upper_triangular, verify_endomorphism, verify_ring,
                          verify_sigma_derivation, zero_derivation, zmod, derivation_from_table)


def test_zmod4():
    R = zmod(4)
    assert R.size == 4 and R.one == 1 and R.zero == 0
    assert verify_ring(R).ok


def test_gf4_characteristic_two():
    F = galois_field(4)
    assert F.size == 4 and F.characteristic == 2
    assert all(F.add[a, a] == F.zero for a in F.elements)
    assert verify_ring(F).ok
    # a field: every nonzero element is a unit
    assert len(F.units()) == 3


def test_truncated_poly_t4_vanishes():
    R = truncated_poly(2, 4)
    t = R.element([0, 1])
    assert R.size == 16
    assert R.power(t, 3) != R.zero
    assert R.power(t, 4) == R.zero
    assert R.label(R.element([0, 1, 1])) == "t^2+t"


def test_upper_triangular_noncommutative():
    U = upper_triangular(2)
    assert U.size == 8 and not U.is_commutative and verify_ring(U).ok


def test_product_ring_indexing():
    R = product_ring(zmod(2), zmod(3))
    assert R.size == 6 and verify_ring(R).ok
    # (1, 0) * (0, 1) = 0
    assert R.mul[R.element([1, 0]), R.element([0, 1])] == R.zero


@pytest.mark.parametrize("spec", [
    {"family": "gf", "q": 6},
    {"family": "zmod", "n": 0},
    {"family": "nope"},
    {"family": "truncated_poly", "p": 4, "m": 2},
    {"family": "zmod"},
])
def test_bad_ring_specs(spec):
    with pytest.raises(InvalidSpecError):
        build_ring(spec)


def test_bad_ring_tables_report_witness():
    mul = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 1, 2], [0, 3, 2, 1]]
    add = [[(a + b) % 4 for b in range(4)] for a in range(4)]
    with pytest.raises(LawViolationError) as err:
        build_ring({"family": "tables", "add": add, "mul": mul})
    v = err.value.report.first("mul_associative")
    assert v.witness == (2, 2, 3)


def test_frobenius_gf4_order_two():
    F = galois_field(4)
    fr = frobenius_map(F)
    rep = verify_endomorphism(F, fr.table)
    assert rep.ok and rep.flags["bijective"]
    assert fr.order() == 2
    dual = dual_maps(fr, zero_derivation(F, fr))
    assert np.array_equal(dual.sigma.table, fr.table)


def test_identity_is_automorphism():
    for R in (zmod(4), truncated_poly(3, 2), upper_triangular(2)):
        rep = verify_endomorphism(R, identity_map(R).table)
        assert rep.ok and rep.flags["bijective"]


def test_t_plus_one_rejected_at_t_t():
    R = truncated_poly(2, 2)
    rep = verify_endomorphism(R, [0, 1, 3, 2])
    assert not rep.ok
    t = R.element([0, 1])
    assert rep.first("multiplicative").witness == (t, t)


def test_leibniz_failure_on_zmod4():
    R = zmod(4)
    rep = verify_sigma_derivation(R, identity_map(R), [0, 2, 0, 2])
    assert rep.first("leibniz").witness == (1, 1)
    assert rep.first("additive") is None


def test_jordan_derivation_is_valid_and_nilpotent():
    R = truncated_poly(2, 4)
    s = identity_map(R)
    d = truncated_derivative(R, s, 2)
    assert verify_sigma_derivation(R, s, d.table).ok
    t = R.element([0, 1])
    assert d(t) == R.element([0, 0, 1])
    assert nilpotency_index(d, t) == 2
    assert nilpotency_index(zero_derivation(R, s), t) == 1


def test_non_nilpotent_derivation_diverges():
    R = truncated_poly(2, 2)
    s = identity_map(R)
    # a + bt -> bt is a derivation over F_2[t]/(t^2) that fixes t
    d = derivation_from_table(R, s, [0, 0, 2, 2])
    assert nilpotency_index(d, 2) is None
    with pytest.raises(LawViolationError):
        nilpotency_table(d)


def test_dual_maps_identity_sigma_negates_delta():
    R = truncated_poly(3, 2)
    s = identity_map(R)
    d = truncated_derivative(R, s, 1)
    dual = dual_maps(s, d)
    assert np.array_equal(dual.sigma.table, s.table)
    assert np.array_equal(dual.delta.table, R.neg[d.table])


def test_dual_maps_char_two_delta_unchanged():
    R = truncated_poly(2, 4)
    s = identity_map(R)
    d = truncated_derivative(R, s, 2)
    assert np.array_equal(dual_maps(s, d).delta.table, d.table)


def test_dual_needs_bijective_sigma():
    R = truncated_poly(2, 4)
    fr = frobenius_map(R)           # t -> t^2 is not onto
    assert not fr.bijective
    with pytest.raises(InvalidSpecError):
        dual_maps(fr, zero_derivation(R, fr))


def test_inner_derivation_on_ut2():
    U = upper_triangular(2)
    s = identity_map(U)
    d = inner_derivation(U, s, U.element([0, 1, 0]))
    assert d.table.tolist() == [0, 2, 0, 2, 2, 0, 2, 0]
    # delta^2 = 0
    assert not np.any(d.table[d.table] != U.zero)


def test_bundled_laws(bundled, fixture_id):
    inst = bundled[fixture_id]
    for rep in inst.laws.values():
        assert rep.ok, rep.to_dict()


def test_dual_delta_is_sigma_prime_derivation(bundled, fixture_id):
    A = bundled[fixture_id].A
    assert verify_sigma_derivation(A.ring, A.dual.sigma, A.dual.delta.table).ok
    # sigma' sigma = id
    assert np.array_equal(A.dual.sigma.table[A.sigma.table], np.arange(A.ring.size))


def test_double_dual_of_self_inverse_sigma():
    F = galois_field(4)
    fr = frobenius_map(F)
    once = dual_maps(fr, zero_derivation(F, fr))
    twice = dual_maps(once.sigma, once.delta)
    assert np.array_equal(twice.sigma.table, fr.table)


def test_nilpotency_monotone(bundled, fixture_id):
    d = bundled[fixture_id].delta
    n = nilpotency_table(d)
    for r in d.ring.elements:
        if d(r) != d.ring.zero:
            assert n[d(r)] == max(n[r] - 1, 1)


def test_deterministic_builds():
    for spec in ({"family": "gf", "q": 9}, {"family": "truncated_poly", "p": 3, "m": 2},
                 {"family": "upper_triangular", "p": 3}):
        a, b = build_ring(spec), build_ring(spec)
        assert np.array_equal(a.add, b.add) and np.array_equal(a.mul, b.mul) and a.labels == b.labels


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([4, 8, 9, 16, 25, 27]))
def test_galois_fields_are_fields(q):
    F = galois_field(q)
    assert verify_ring(F).ok
    assert F.is_commutative and len(F.units()) == q - 1


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(1, 3), st.data())
def test_shifted_derivatives_are_derivations(p, m, data):
    R = truncated_poly(p, m)
    s = identity_map(R)
    k = data.draw(st.integers(1, m))
    d = truncated_derivative(R, s, k)
    assert verify_sigma_derivation(R, s, d.table).ok


def test_plain_derivative_needs_p_dividing_m():
    # d/dt(t^(m-1) t) = m t^(m-1) must vanish
    truncated_derivative(truncated_poly(2, 2), identity_map(truncated_poly(2, 2)), 0)
    R = truncated_poly(2, 3)
    with pytest.raises(LawViolationError):
        truncated_derivative(R, identity_map(R), 0)


def test_tables_are_read_only():
    R = zmod(4)
    with pytest.raises(ValueError):
        R.mul[0, 0] = 1


def test_endomorphism_table_rejects_non_multiplicative():
    with pytest.raises(LawViolationError):
        endomorphism_from_table(truncated_poly(2, 2), [0, 1, 3, 2])
