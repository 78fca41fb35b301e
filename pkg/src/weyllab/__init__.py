"""Exact symbolic verification engine for the Lie-algebraic identities behind
quantum 3-manifold invariants: Laplacian evaluation operators, Harish-Chandra
reduction, Jacobi-diagram weight systems, and lens-space invariant series,
with a Monte Carlo Gaussian-integration oracle."""

__version__ = "0.1.0"

from .exact import SCALARS, HbarSeries, MultiPoly, PolyRing, RingError, exp_hbar
from .rootsys import (
    RootInvariants,
    RootSystem,
    UnsupportedRootSystemError,
    WeylGroup,
    apply_weyl,
    build_root_system,
    disc_poly,
    invariants,
    qdim_series,
    weyl_group,
    weyl_invariant_basis,
)
from .liealg import (
    IrrepMatrices,
    LieAlgebraData,
    ad_apply,
    build_sl,
    casimir,
    cubic_casimir_sl3,
    is_invariant,
    restrict,
    sl2_irrep,
    sym_char,
)
from .laplace import (
    QuadraticSpace,
    c_constant,
    check_dhd,
    check_hcrf,
    e_op,
    e_op_multi,
    e_value,
    g_star_space,
    h_star_space,
    i2_trivial,
    laplacian,
    lens_tau,
    o_eq_e_check,
    o_op,
    reduce_identity,
    reduce_identity_multi,
)
from .diagrams import (
    DiagramError,
    DiagramSum,
    JacobiDiagram,
    Leg,
    bracket,
    circle,
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
from .oracle import McConfig, gauss_mc, weyl_ratio

__all__ = [name for name in dir() if not name.startswith("_")]
