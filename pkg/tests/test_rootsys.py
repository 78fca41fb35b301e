"""Root systems, Weyl groups, the skew polynomial, quantum dimensions."""

from fractions import Fraction as F

import pytest

from weyllab.rootsys import (
    UnsupportedRootSystemError,
    apply_weyl,
    build_root_system,
    disc_poly,
    invariants,
    qdim_series,
    weyl_group,
    weyl_invariant_basis,
)

ALL = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("G", 2)]

# (phi+, dim, dual Coxeter, d, |rho|^2, |W|) from the standard tables
TABLE = {
    "A1": (1, 3, 2, 1, F(1, 2), 2),
    "A2": (3, 8, 3, 1, F(2), 6),
    "A3": (6, 15, 4, 1, F(5), 24),
    "B2": (4, 10, 3, 2, F(5), 8),
    "G2": (6, 14, 4, 3, F(14), 12),
}


@pytest.fixture(params=ALL, ids=[f"{f}{r}" for f, r in ALL])
def rs(request):
    return build_root_system(*request.param)


def test_unsupported_error_lists_systems():
    with pytest.raises(UnsupportedRootSystemError, match="A1.*G2"):
        build_root_system("E", 8)


def test_table_values(rs):
    inv = invariants(rs)
    phi, dim, h_check, d, rho2, order = TABLE[rs.name]
    assert inv.phi_plus == phi
    assert inv.dim_g == dim
    assert inv.dual_coxeter == h_check
    assert inv.d_max == d
    assert inv.rho_norm_sq == rho2
    assert len(weyl_group(rs)) == order


def test_dim_identity(rs):
    inv = invariants(rs)
    assert inv.dim_g == 2 * inv.phi_plus + inv.rank


def test_theta_norm_identity(rs):
    # 2 d h_check dim = 24 |rho|^2, exactly
    inv = invariants(rs)
    assert 2 * inv.d_max * inv.dual_coxeter * inv.dim_g == 24 * inv.rho_norm_sq


def test_short_roots_have_square_length_two(rs):
    lengths = {rs.root_norm_sq(root) for root in rs.positive_roots}
    assert min(lengths) == 2


def test_simple_root_rho_pairing(rs):
    # 2 (rho, alpha_i) / (alpha_i, alpha_i) = 1 for every simple root
    for i in range(rs.rank):
        simple = tuple(1 if j == i else 0 for j in range(rs.rank))
        assert 2 * rs.pairing_rho(simple) == rs.root_norm_sq(simple)


def test_a1_data():
    rs = build_root_system("A", 1)
    assert rs.positive_roots_weight() == ((2,),)
    assert rs.weight_gram == ((F(1, 2),),)
    assert disc_poly(rs) == rs.ring.var("n")


def test_a2_data():
    rs = build_root_system("A", 2)
    assert set(rs.positive_roots_weight()) == {(2, -1), (-1, 2), (1, 1)}
    n, m = rs.ring.gens()
    assert disc_poly(rs) == n * m * (n + m) / 2


def test_disc_at_rho_is_one(rs):
    point = {v: 1 for v in rs.ring.variables}
    assert disc_poly(rs).evaluate(point) == 1


def test_disc_degree(rs):
    d = disc_poly(rs)
    assert d.total_degree() == rs.phi_plus
    assert d.homogeneous_part(rs.phi_plus) == d


def test_weyl_group_structure(rs):
    group = weyl_group(rs)
    for g in group.generators:
        assert g in group.matrices
    mats = set(group.matrices)
    from weyllab._linalg import identity, mat_mul

    assert identity(rs.rank) in mats
    for g in group.generators:
        assert mat_mul(g, g) == identity(rs.rank)
        for w in group.matrices:
            assert mat_mul(g, w) in mats


def test_disc_is_weyl_skew(rs):
    d = disc_poly(rs)
    for w, det in weyl_group(rs):
        assert apply_weyl(rs, w, d) == d * det


def test_qdim_classical_limit(rs):
    assert qdim_series(rs, 4).coefficient(0) == disc_poly(rs)


def test_qdim_even_in_h(rs):
    series = qdim_series(rs, 5)
    for k in (1, 3, 5):
        assert series.coefficient(k).is_zero()


def test_qdim_a1_order2():
    rs = build_root_system("A", 1)
    n = rs.ring.var("n")
    series = qdim_series(rs, 2)
    assert series.coefficient(0) == n
    assert series.coefficient(2) == (n**3 - n) / 24


def test_qdim_coefficients_are_weyl_skew():
    for fam, rank in [("A", 1), ("A", 2), ("B", 2)]:
        rs = build_root_system(fam, rank)
        series = qdim_series(rs, 4)
        for w, det in weyl_group(rs):
            for k in (0, 2, 4):
                coeff = series.coefficient(k)
                assert apply_weyl(rs, w, coeff) == coeff * det


def test_weyl_invariant_basis_is_invariant():
    rs = build_root_system("B", 2)
    basis = weyl_invariant_basis(rs, 4)
    assert any(p == 1 for p in basis)
    for p in basis:
        for w, _ in weyl_group(rs):
            assert apply_weyl(rs, w, p) == p


def test_json_serialization_is_deterministic(rs):
    import json

    first = json.dumps(rs.to_json_dict(), sort_keys=True)
    second = json.dumps(build_root_system(rs.family, rs.rank).to_json_dict(), sort_keys=True)
    assert first == second
    payload = json.loads(first)
    assert payload["name"] == rs.name
    assert payload["invariants"]["phi_plus"] == rs.phi_plus
