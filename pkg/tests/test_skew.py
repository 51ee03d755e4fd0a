from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import binomial_form, rewrite_product, word_sum
from oredim.rings import identity_map, truncated_derivative, truncated_poly, zero_derivation, zmod
from oredim.skew import SkewOreRing


@pytest.fixture(scope="module")
def jordan():
    R = truncated_poly(2, 4)
    s = identity_map(R)
    return SkewOreRing(R, s, truncated_derivative(R, s, 2))


def test_commute_right_jordan(jordan):
    R = jordan.ring
    t = R.element([0, 1])
    assert jordan.commute_right(t).coeffs == (R.zero, t, R.element([0, 0, 1]))
    assert repr(jordan.commute_right(t)) == "t*x + t^2*x^2"
    assert jordan.commute_right(R.one) == jordan.x()


def test_commute_right_degree_is_nilpotency_index(bundled, fixture_id):
    A = bundled[fixture_id].A
    for r in A.ring.elements:
        if r == A.ring.zero:
            continue
        assert A.commute_right(r).degree == A.nilpotency[r]


def test_quantum_plane_rule(bundled):
    A = bundled["qplane3"].A
    R = A.ring
    t = R.element([0, 1])
    # x t = 2t x
    assert A.commute_right(t).coeffs == (R.zero, R.element([0, 2]))


def test_jordan_square(jordan):
    R = jordan.ring
    tx = jordan.poly([0, R.element([0, 1])])
    assert repr(tx * tx) == "t^2*x^2 + t^3*x^3"


def test_identity_and_x_squared(jordan):
    one = jordan.const(jordan.ring.one)
    f = jordan.poly([3, 5, 0, 1])
    assert one * f == f and f * one == f
    assert jordan.x() * jordan.x() == jordan.x(2)
    assert jordan.poly([0, 0, 0]).coeffs == ()


def _fixtures_small(bundled, weyl3):
    return [i for i in list(bundled.values()) + [weyl3] if i.ring.size <= 16]


def test_mul_matches_rewriting_oracle(bundled, weyl3):
    for inst in list(bundled.values()) + [weyl3]:
        A, R = inst.A, inst.ring
        for a, b in product(R.elements, repeat=2):
            for da, db in product(range(3), repeat=2):
                f = (R.zero,) * da + (a,)
                g = (R.zero,) * db + (b,)
                got = (A.poly(f) * A.poly(g)).coeffs
                assert got == rewrite_product(R, inst.sigma.table, inst.delta.table, f, g)


def test_mul_associative_on_monomials(bundled, weyl3):
    for inst in _fixtures_small(bundled, weyl3):
        A, R = inst.A, inst.ring
        gens = [R.one] + [r for r in R.elements if r not in (R.zero, R.one)][:3]
        monos = [A.poly([R.zero] * k + [r]) for k in range(4) for r in gens]
        for f, g, h in product(monos, repeat=3):
            assert (f * g) * h == f * (g * h)


def test_mul_distributive(bundled):
    A = bundled["jordan4"].A
    R = A.ring
    fs = [A.poly([r, R.element([0, 1])]) for r in range(0, 16, 5)]
    for f, g, h in product(fs, repeat=3):
        assert f * (g + h) == f * g + f * h
        assert (g + h) * f == g * f + h * f


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 15), max_size=4), st.lists(st.integers(0, 15), max_size=4),
       st.lists(st.integers(0, 15), max_size=3))
def test_mul_associative_random_jordan(a, b, c):
    R = truncated_poly(2, 4)
    s = identity_map(R)
    A = SkewOreRing(R, s, truncated_derivative(R, s, 2))
    f, g, h = A.poly(a), A.poly(b), A.poly(c)
    assert (f * g) * h == f * (g * h)


def test_degree_additive_when_delta_zero_over_domain(bundled):
    A = bundled["gf4-frob"].A
    for da, db in product(range(4), repeat=2):
        for a, b in product(range(1, 4), repeat=2):
            f = A.poly([0] * da + [a])
            g = A.poly([1] * db + [b])
            assert (f * g).degree == da + db


def test_operator_table_matches_word_enumeration(bundled, weyl3):
    for inst in list(bundled.values()) + [weyl3]:
        A = inst.A
        sd, dd = A.dual.sigma.table, A.dual.delta.table
        for j in range(6):
            for i in range(j + 1):
                assert np.array_equal(A.f_op(j, i), word_sum(A.ring, sd, dd, j, i)), (inst.id, j, i)


def test_operator_boundary_rows(weyl3):
    A = weyl3.A
    sd, dd = A.dual.sigma, A.dual.delta
    assert np.array_equal(A.f_op(0, 0), np.arange(A.ring.size))
    for j in range(1, 6):
        assert np.array_equal(A.f_op(j, j), sd.power(j))
        assert np.array_equal(A.f_op(j, 0), dd.power(j))
    f21 = A.ring.add[sd.table[dd.table], dd.table[sd.table]]
    assert np.array_equal(A.f_op(2, 1), f21)


def test_weyl3_is_not_binomial(weyl3):
    A = weyl3.A
    assert not A.commuting
    sd, dd = A.dual.sigma.table, A.dual.delta.table
    assert not np.array_equal(A.f_op(2, 1), binomial_form(A.ring, sd, dd, 2, 1))


def test_binomial_collapse_when_commuting(bundled):
    for inst in bundled.values():
        A = inst.A
        assert A.commuting
        sd, dd = A.dual.sigma.table, A.dual.delta.table
        for j in range(6):
            for i in range(j + 1):
                assert np.array_equal(A.f_op(j, i), binomial_form(A.ring, sd, dd, j, i))


def test_char_two_middle_operator_vanishes(bundled):
    A = bundled["jordan4"].A
    assert not np.any(A.f_op(2, 1) != A.ring.zero)
    # while delta' itself is nonzero
    assert np.any(A.f_op(1, 0) != A.ring.zero)


def test_operator_index_errors(jordan):
    with pytest.raises(IndexError):
        jordan.f_op(2, 3)
    with pytest.raises(IndexError):
        jordan.f_op(9, 1)


def test_inv_monomial_times(jordan):
    R = jordan.ring
    t = R.element([0, 1])
    t2 = R.element([0, 0, 1])
    # x^-1 t = sigma'(t) x^-1 + delta'(t) = t x^-1 + t^2
    assert jordan.inv_monomial_times(1, t).coeffs == (t2, t)
    assert jordan.inv_monomial_times(0, t).coeffs == (t,)


def test_inv_monomial_delta_zero(bundled):
    A = bundled["gf4-frob"].A
    for r in A.ring.elements:
        for k in range(4):
            got = A.inv_monomial_times(k, r)
            assert got == A.inv_monomial(int(A.dual.sigma.power(k)[r]), k)


def test_inv_poly_mul_examples(jordan, bundled):
    R = jordan.ring
    for r, s in product(R.elements, repeat=2):
        a, b = jordan.inv_monomial(r, 0), jordan.inv_monomial(s, 0)
        assert (a * b).coeffs == jordan.inv_monomial(int(R.mul[r, s]), 0).coeffs
        # (r x^-1)(s x^-1) = r s' (s) x^-2 + r d'(s) x^-1
        prod = jordan.inv_monomial(r, 1) * jordan.inv_monomial(s, 1)
        sd, dd = jordan.dual.sigma.table, jordan.dual.delta.table
        expect = jordan.inv_poly([0, R.mul[r, dd[s]], R.mul[r, sd[s]]])
        assert prod == expect
    A = bundled["gf4-frob"].A
    F = A.ring
    for r, s, k, kk in product(F.elements, F.elements, range(3), range(3)):
        got = A.inv_monomial(r, k) * A.inv_monomial(s, kk)
        assert got == A.inv_monomial(int(F.mul[r, A.dual.sigma.power(k)[s]]), k + kk)


def test_inv_poly_mul_associative(bundled, weyl3):
    for inst in list(bundled.values()) + [weyl3]:
        A, R = inst.A, inst.ring
        gens = [r for r in R.elements if r != R.zero][:4]
        monos = [A.inv_monomial(r, k) for k in range(3) for r in gens]
        for f, g, h in product(monos, repeat=3):
            assert (f * g) * h == f * (g * h), inst.id


def test_collapsed_exponent_product_differs_from_the_product(jordan):
    R = jordan.ring
    t = R.element([0, 1])
    good = jordan.inv_monomial(R.one, 1) * jordan.inv_monomial(t, 0)
    bad = jordan.collapsed_exponent_product(R.one, 1, t, 0)
    assert good != bad
    assert repr(good) == "t^2 + t*x^-1"


def test_render():
    R = zmod(4)
    s = identity_map(R)
    A = SkewOreRing(R, s, zero_derivation(R, s))
    assert repr(A.poly([1, 0, 3])) == "1 + 3*x^2"
    assert repr(A.poly([])) == "0"
    assert repr(A.inv_poly([0, 2, 1])) == "2*x^-1 + 1*x^-2"
