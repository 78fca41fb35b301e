"""Jacobi diagram weights, the gluing bracket, and the strut correspondence."""

from fractions import Fraction as F

import pytest

from weyllab._linalg import mat_mul
from weyllab.diagrams import (
    DiagramError,
    DiagramSum,
    JacobiDiagram,
    Leg,
    bracket,
    bubble_with_legs,
    circle,
    disjoint_union,
    dumbbell,
    flip_vertex,
    parse_diagram,
    strut,
    strut_power,
    theta,
    to_text,
    weight,
    weight_sum,
    wu_check,
    y_diagram,
)
from weyllab.exact import HbarSeries
from weyllab.laplace import e_op, g_star_space
from weyllab.liealg import build_sl, casimir, sl2_irrep
from weyllab.rootsys import invariants

sl2 = build_sl(2)
sl3 = build_sl(3)


class TestConstruction:
    def test_half_edge_attached_twice(self):
        with pytest.raises(DiagramError):
            JacobiDiagram(legs=(Leg(0, "x"), Leg(0, "x")), edges=((0, 0),))

    def test_edges_must_cover_attachments(self):
        with pytest.raises(DiagramError):
            JacobiDiagram(legs=(Leg(0, "x"), Leg(1, "x")), edges=())

    def test_degree(self):
        assert strut().degree == 1
        assert theta().degree == 1
        assert y_diagram().degree == 2
        assert dumbbell().degree == 3
        assert circle().degree == 0
        assert strut_power(3).degree == 3


class TestWeight:
    def test_strut_is_the_casimir(self):
        assert weight(strut(), sl2) == casimir(sl2)
        assert weight(strut(), sl3) == casimir(sl3)

    def test_circle_is_the_dimension(self):
        assert weight(circle(), sl2) == 3
        assert weight(circle(), sl3) == 8

    def test_theta_closed_form(self):
        for L in (sl2, sl3):
            expected = 24 * invariants(L.root_system).rho_norm_sq
            assert weight(theta(), L) == expected

    def test_theta_equals_adjoint_casimir_times_dim_sl2(self):
        # independent route: the Casimir acts on the 3-dimensional irrep as
        # a scalar; theta contracts to that scalar times dim
        rep = sl2_irrep(3)
        hh = mat_mul(rep.h, rep.h)
        ef = mat_mul(rep.e, rep.f)
        fe = mat_mul(rep.f, rep.e)
        c_ad = F(1, 2) * hh[0][0] + ef[0][0] + fe[0][0]
        assert weight(theta(), sl2) == c_ad * 3

    def test_theta_equals_adjoint_casimir_times_dim_sl3(self):
        # (theta_hw, theta_hw + 2 rho) from the weight gram; highest root of
        # A2 in weight coordinates is (1, 1)
        rs = sl3.root_system
        g = rs.weight_gram
        pair = sum(g[i][j] * 1 * 3 for i in range(2) for j in range(2))
        assert weight(theta(), sl3) == pair * 8

    def test_antisymmetry_flip(self):
        for L in (sl2, sl3):
            base = weight(theta(), L)
            assert weight(flip_vertex(theta(), 0), L) == -base
            bubble = bubble_with_legs()
            assert weight(flip_vertex(bubble, 1), L) == -weight(bubble, L)

    def test_vertex_tensor_total_antisymmetry(self):
        from weyllab.diagrams import _vertex_tensor

        for L in (sl2, sl3):
            t = _vertex_tensor(L)
            for (a, b, c), v in t.items():
                assert t.get((b, a, c), F(0)) == -v
                assert t.get((a, c, b), F(0)) == -v
                assert t.get((b, c, a), F(0)) == v

    def test_multiplicative_over_disjoint_union(self):
        union = disjoint_union(theta(), theta())
        assert weight(union, sl2) == weight(theta(), sl2) ** 2
        with_loop = disjoint_union(theta(), circle())
        assert weight(with_loop, sl2) == 36

    def test_strut_power_weight(self):
        assert weight(strut_power(2), sl2) == casimir(sl2) ** 2

    def test_odd_diagram_vanishes_for_sl2(self):
        assert weight(y_diagram(), sl2).is_zero()

    def test_bubble_weight_is_casimir_multiple(self):
        # two-edge bubble inserts the adjoint Casimir scalar: 4 C for sl2
        assert weight(bubble_with_legs(), sl2) == 4 * casimir(sl2)

    def test_partial_legs_rejected(self):
        with pytest.raises(DiagramError):
            weight(strut(partial=True), sl2)

    def test_coefficient_scales(self):
        assert weight(theta().scaled(F(1, 3)), sl2) == 4

    def test_two_label_output_ring(self):
        d = JacobiDiagram(
            legs=(Leg(0, "x1"), Leg(1, "x2")),
            edges=((0, 1),),
        )
        w = weight(d, sl2)
        assert set(w.ring.variables) == {
            "H_x1", "E_x1", "F_x1", "H_x2", "E_x2", "F_x2",
        }
        assert w.total_degree() == 2


class TestBracket:
    def test_strut_pairing(self):
        glued = bracket(strut(partial=True), strut())
        assert len(glued) == 2
        for coeff, d in glued.terms:
            assert coeff == 1
            assert d.loops == 1 and not d.legs and not d.vertices
        assert weight_sum(glued, sl2) == 6

    def test_mismatched_counts_vanish(self):
        assert len(bracket(strut(partial=True), strut_power(2))) == 0
        assert len(bracket(strut(partial=True), y_diagram())) == 0

    def test_two_strut_pairing_count(self):
        glued = bracket(strut_power(2, partial=True), strut_power(2))
        assert len(glued) == 24

    def test_bilinearity(self):
        s1 = DiagramSum.of(strut(partial=True))
        s2 = DiagramSum.of(strut())
        doubled = bracket(2 * s1, s2)
        assert weight_sum(doubled, sl2) == 2 * weight_sum(bracket(s1, s2), sl2)

    def test_label_separation(self):
        d1 = disjoint_union(strut("x1", True), strut("x2", True))
        d2 = disjoint_union(strut("x1"), strut("x2"))
        glued = bracket(d1, d2)
        assert len(glued) == 4
        assert weight_sum(glued, sl2) == 36

    def test_partial_side_validation(self):
        with pytest.raises(DiagramError):
            bracket(strut(), strut())
        with pytest.raises(DiagramError):
            bracket(strut(partial=True), strut(partial=True))


class TestCorrespondence:
    def test_strut_example(self):
        lhs, rhs = wu_check(sl2, 1, strut())
        assert lhs == rhs == HbarSeries(HbarSeries.one().ring, {0: -3})

    def test_odd_number_of_legs(self):
        lhs, rhs = wu_check(sl2, 2, y_diagram())
        assert lhs.is_zero() and rhs.is_zero()

    def test_double_strut_against_iterated_laplacian(self):
        lhs, rhs = wu_check(sl2, 1, strut_power(2))
        direct = e_op(g_star_space(sl2), 1, casimir(sl2) ** 2).shift(2)
        assert lhs == rhs == direct

    @pytest.mark.parametrize("L", [sl2, sl3], ids=["sl2", "sl3"])
    @pytest.mark.parametrize("f", [1, -1, 2])
    def test_full_diagram_set(self, L, f):
        for d in (
            strut(),
            strut_power(2),
            strut_power(3),
            y_diagram(),
            dumbbell(),
            bubble_with_legs(),
            theta(),
        ):
            lhs, rhs = wu_check(L, f, d)
            assert lhs == rhs

    def test_leg_bound(self):
        with pytest.raises(DiagramError):
            wu_check(sl2, 1, strut_power(4))

    def test_zero_framing(self):
        with pytest.raises(ValueError):
            wu_check(sl2, 0, strut())


class TestTextFormat:
    @pytest.mark.parametrize(
        "d",
        [
            strut(),
            strut(partial=True),
            strut_power(2),
            y_diagram(),
            dumbbell(),
            bubble_with_legs(),
            theta(),
            circle(),
            theta().scaled(F(-2, 3)),
        ],
        ids=lambda d: f"deg{d.degree}",
    )
    def test_round_trip(self, d):
        assert parse_diagram(to_text(d)) == d

    def test_text_shape(self):
        text = to_text(strut(partial=True))
        assert "dleg 0 x" in text and "edge 0 1" in text

    def test_parse_error(self):
        with pytest.raises(DiagramError):
            parse_diagram("vertex 1 2")
