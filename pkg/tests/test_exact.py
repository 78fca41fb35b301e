"""Exact-arithmetic kernel: polynomials and truncated h-series."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyllab.exact import SCALARS, HbarSeries, MultiPoly, PolyRing, RingError, exp_hbar

R3 = PolyRing(("n", "m", "l"))
SL2 = PolyRing(("H", "E", "F"))


def poly(ring, terms):
    return MultiPoly(ring, {tuple(e): F(c) for e, c in terms.items()})


small_polys = st.builds(
    lambda terms: MultiPoly(
        R3,
        {
            (e1, e2, e3): F(num, den)
            for (e1, e2, e3, num, den) in terms
        },
    ),
    st.lists(
        st.tuples(
            st.integers(0, 3),
            st.integers(0, 3),
            st.integers(0, 2),
            st.integers(-6, 6),
            st.integers(1, 4),
        ),
        max_size=5,
    ),
)


class TestRational:
    def test_fraction_invariants(self):
        value = F(4, -6)
        assert value.denominator > 0
        assert abs(value.numerator) == 2 and value.denominator == 3
        assert F(1, 3) + F(1, 6) == F(1, 2)


class TestMultiPoly:
    def test_diff_power_rule(self):
        n = R3.var("n")
        assert (n**3).diff("n") == 3 * n**2

    def test_diff_linearity(self):
        h, e, f = SL2.gens()
        p = h * h / 2 + 2 * e * f
        assert p.diff("E") == 2 * f

    def test_diff_constant(self):
        assert R3.const(7).diff("n").is_zero()

    def test_diff_unknown_variable_names_it(self):
        with pytest.raises(RingError, match="x17"):
            R3.one().diff("x17")

    def test_homogeneous_part(self):
        h, e, f = SL2.gens()
        p = h * h / 2 + 2 * e * f + h
        assert p.homogeneous_part(2) == h * h / 2 + 2 * e * f
        assert p.homogeneous_part(1) == h
        assert SL2.one().homogeneous_part(0) == 1
        assert (R3.var("n") ** 3).homogeneous_part(2).is_zero()

    def test_ring_mixing_is_an_error(self):
        with pytest.raises(RingError):
            R3.var("n") + SL2.var("H")

    def test_scalar_ring_promotes(self):
        assert SCALARS.const(3) + R3.var("n") == R3.var("n") + 3

    def test_substitute_and_evaluate(self):
        n, m, l = R3.gens()
        p = n * n + m
        q = p.substitute({"n": m, "m": R3.const(1)})
        assert q == m * m + 1
        assert p.evaluate({"n": F(2), "m": F(1, 2), "l": 0}) == F(9, 2)

    def test_canonical_text(self):
        h, e, f = SL2.gens()
        assert (h * h / 2 + 2 * e * f).text() == "1/2*H^2 + 2*E*F"
        assert (h - e).text() == "H - E"
        assert SL2.zero().text() == "0"

    def test_immutability(self):
        p = R3.var("n")
        with pytest.raises(AttributeError):
            p.ring = SL2

    def test_float_coefficients_rejected(self):
        with pytest.raises(TypeError):
            MultiPoly(R3, {(0, 0, 0): 0.5})

    @given(small_polys, small_polys, small_polys)
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r

    @given(small_polys)
    @settings(max_examples=40, deadline=None)
    def test_mixed_partials_commute(self, p):
        for u in R3.variables:
            for v in R3.variables:
                assert p.diff(u).diff(v) == p.diff(v).diff(u)

    @given(small_polys)
    @settings(max_examples=40, deadline=None)
    def test_homogeneous_parts_sum_back(self, p):
        total = R3.zero()
        for d in range(0, max(p.total_degree(), 0) + 1):
            total = total + p.homogeneous_part(d)
        assert total == p


class TestHbarSeries:
    def test_unit(self):
        one = HbarSeries.one()
        assert (one * one) == one
        assert one.coefficient(0) == 1

    def test_product_matches_polynomial_product_when_h_free(self):
        n = R3.var("n")
        m = R3.var("m")
        a = HbarSeries.from_poly(n + m)
        b = HbarSeries.from_poly(n * m - 1)
        assert (a * b).coefficient(0) == (n + m) * (n * m - 1)

    def test_truncation_soundness_of_products(self):
        # products must not claim orders the inputs cannot determine
        a = HbarSeries(SCALARS, {0: 1, 1: 5}, trunc=1)
        b = HbarSeries(SCALARS, {0: 2, 1: 7}, trunc=1)
        prod = a * b
        assert prod.trunc == 1
        assert prod.coefficient(0) == 2 and prod.coefficient(1) == 17
        with pytest.raises(ValueError):
            prod.coefficient(2)

    def test_laurent_shift_and_min_order(self):
        s = HbarSeries(SCALARS, {-2: 3, 0: 1})
        assert s.min_order == -2
        assert s.shift(2).min_order == 0

    def test_inverse(self):
        s = HbarSeries(SCALARS, {-1: 2, 0: 1, 1: F(1, 3)}, trunc=4)
        inv = s.inverse()
        assert (s * inv).eq_to_order(HbarSeries.one().truncate(3), 3)

    def test_inverse_requires_constant_lead(self):
        s = HbarSeries(R3, {0: R3.var("n")}, trunc=3)
        with pytest.raises(ValueError):
            s.inverse()

    def test_eval_at(self):
        s = HbarSeries(SCALARS, {-1: 6, 1: 2})
        assert s.eval_at(F(1, 2)) == 13

    def test_text(self):
        s = HbarSeries(SCALARS, {-1: -3, 0: 1})
        assert s.text() == "-3*h^-1 + 1"


class TestExpHbar:
    def test_identity(self):
        assert exp_hbar(0, 5) == HbarSeries.one().truncate(5)

    def test_hand_expansion(self):
        s = exp_hbar(F(-1, 4), 2)
        assert [s.coefficient(k) for k in range(3)] == [1, F(-1, 4), F(1, 32)]

    @pytest.mark.parametrize("a", [F(3, 5), F(-2), F(7, 3)])
    def test_group_law(self, a):
        order = 6
        prod = exp_hbar(a, order) * exp_hbar(-a, order)
        assert prod == HbarSeries.one().truncate(order)
