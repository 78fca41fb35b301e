"""Concrete split Lie algebras sl2 and sl3: basis, trace-form gram matrix,
structure constants, Casimir elements, adjoint action on the symmetric
algebra, restriction to the Cartan dual, and sl2 irreducible representation
matrices for exact character computations.

The polynomial ring of an algebra has one variable per basis element, so the
symmetric algebra is the algebra of polynomial functions on the dual space.
Everything below is computed from the defining matrices; no structure
constant is hard-coded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import _linalg
from ._linalg import Matrix
from .exact import MultiPoly, PolyRing, RingError
from .rootsys import RootSystem, build_root_system

_SL2_BASIS = {
    "H": ((1, 0), (0, -1)),
    "E": ((0, 1), (0, 0)),
    "F": ((0, 0), (1, 0)),
}

# E3 and F3 sit at the (3,1) and (1,3) slots, making [E1,E2]=F3 and its cyclic
# mates hold with coefficient +1.
_SL3_BASIS = {
    "H1": ((1, 0, 0), (0, -1, 0), (0, 0, 0)),
    "H2": ((0, 0, 0), (0, 1, 0), (0, 0, -1)),
    "E1": ((0, 1, 0), (0, 0, 0), (0, 0, 0)),
    "E2": ((0, 0, 0), (0, 0, 1), (0, 0, 0)),
    "E3": ((0, 0, 0), (0, 0, 0), (1, 0, 0)),
    "F1": ((0, 0, 0), (1, 0, 0), (0, 0, 0)),
    "F2": ((0, 0, 0), (0, 0, 0), (0, 1, 0)),
    "F3": ((0, 0, 1), (0, 0, 0), (0, 0, 0)),
}


@dataclass(frozen=True)
class LieAlgebraData:
    name: str
    basis: tuple[str, ...]
    matrices: tuple[Matrix, ...]
    gram: Matrix
    gram_inv: Matrix
    #: structure[i][j] = coordinates of [X_i, X_j] in the basis
    structure: tuple[tuple[tuple[Fraction, ...], ...], ...]
    cartan_indices: tuple[int, ...]
    root_system: RootSystem
    ring: PolyRing

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket_poly(self, i: int, j: int) -> MultiPoly:
        """[X_i, X_j] as a linear polynomial in the basis variables."""
        terms = {}
        for k, c in enumerate(self.structure[i][j]):
            if c:
                exp = [0] * self.dim
                exp[k] = 1
                terms[tuple(exp)] = c
        return MultiPoly(self.ring, terms)

    def index(self, name: str) -> int:
        return self.basis.index(name)


@lru_cache(maxsize=None)
def build_sl(n: int) -> LieAlgebraData:
    if n == 2:
        table, name, rs = _SL2_BASIS, "sl2", build_root_system("A", 1)
        cartan = (0,)
    elif n == 3:
        table, name, rs = _SL3_BASIS, "sl3", build_root_system("A", 2)
        cartan = (0, 1)
    else:
        raise ValueError(f"only sl2 and sl3 are supported, got sl{n}")
    basis = tuple(table)
    mats = tuple(_linalg.mat(table[b]) for b in basis)
    dim = len(basis)
    gram = tuple(
        tuple(_trace(_linalg.mat_mul(mats[i], mats[j])) for j in range(dim))
        for i in range(dim)
    )
    columns = [_flatten(m) for m in mats]
    structure = tuple(
        tuple(
            _linalg.solve(columns, _flatten(_commutator(mats[i], mats[j])))
            for j in range(dim)
        )
        for i in range(dim)
    )
    return LieAlgebraData(
        name=name,
        basis=basis,
        matrices=mats,
        gram=gram,
        gram_inv=_linalg.mat_inv(gram),
        structure=structure,
        cartan_indices=cartan,
        root_system=rs,
        ring=PolyRing(basis),
    )


def _trace(m: Matrix) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def _commutator(a: Matrix, b: Matrix) -> Matrix:
    ab = _linalg.mat_mul(a, b)
    ba = _linalg.mat_mul(b, a)
    return tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(ab, ba))


def _flatten(m: Matrix) -> tuple[Fraction, ...]:
    return tuple(x for row in m for x in row)


@lru_cache(maxsize=None)
def casimir(L: LieAlgebraData) -> MultiPoly:
    """The dual-basis quadratic Casimir sum X_i X^i, as a polynomial."""
    poly = L.ring.zero()
    gens = L.ring.gens()
    for i in range(L.dim):
        for j in range(L.dim):
            c = L.gram_inv[i][j]
            if c:
                poly = poly + gens[i] * gens[j] * c
    return poly


@lru_cache(maxsize=None)
def cubic_casimir_sl3(L: LieAlgebraData) -> MultiPoly:
    """The degree-3 generator of the sl3 invariants, alongside the Casimir."""
    if L.name != "sl3":
        raise ValueError("the cubic Casimir is specific to sl3")
    r = L.ring
    h1, h2 = r.var("H1"), r.var("H2")
    h3 = -h1 - h2
    e1, e2, e3 = r.var("E1"), r.var("E2"), r.var("E3")
    f1, f2, f3 = r.var("F1"), r.var("F2"), r.var("F3")
    return (
        (h1 - h2) * (h2 - h3) * (h3 - h1) * Fraction(-1, 9)
        + 3 * e1 * e2 * e3
        + 3 * f1 * f2 * f3
        + e1 * f1 * (h2 - h3)
        + e2 * f2 * (h3 - h1)
        + e3 * f3 * (h1 - h2)
    )


def ad_apply(L: LieAlgebraData, x: str, p: MultiPoly) -> MultiPoly:
    """The derivation ad_x on the symmetric algebra: sum_j [x, X_j] d/dX_j."""
    if p.ring != L.ring:
        raise RingError(f"polynomial is not in the ring of {L.name}")
    i = L.index(x)
    out = L.ring.zero()
    for j, name in enumerate(L.basis):
        partial = p.diff(name)
        if not partial.is_zero():
            out = out + L.bracket_poly(i, j) * partial
    return out


def is_invariant(L: LieAlgebraData, p: MultiPoly) -> bool:
    return all(ad_apply(L, x, p).is_zero() for x in L.basis)


def restrict(L: LieAlgebraData, p: MultiPoly) -> MultiPoly:
    """Restriction to the Cartan dual, in fundamental-weight coordinates.

    Cartan variables map to the coordinates n_i (the Cartan basis elements are
    the simple coroots); all root-vector variables map to 0.
    """
    if p.ring != L.ring:
        raise RingError(f"polynomial is not in the ring of {L.name}")
    target = L.root_system.ring
    images: dict[str, MultiPoly] = {}
    for j, name in enumerate(L.basis):
        if j in L.cartan_indices:
            coord = target.variables[L.cartan_indices.index(j)]
            images[name] = target.var(coord)
        else:
            images[name] = target.zero()
    return p.substitute(images, ring=target)


@dataclass(frozen=True)
class IrrepMatrices:
    """Standard raising/lowering matrices of the k-dimensional sl2 irrep."""

    dim: int
    h: Matrix
    e: Matrix
    f: Matrix

    def matrix_for(self, name: str) -> Matrix:
        return {"H": self.h, "E": self.e, "F": self.f}[name]


@lru_cache(maxsize=None)
def sl2_irrep(k: int) -> IrrepMatrices:
    if k < 1:
        raise ValueError("the representation dimension must be positive")
    h = tuple(
        tuple(Fraction(k - 1 - 2 * i if i == j else 0) for j in range(k)) for i in range(k)
    )
    e = tuple(
        tuple(Fraction(j * (k - j) if j == i + 1 else 0) for j in range(k)) for i in range(k)
    )
    f = tuple(
        tuple(Fraction(1 if j == i - 1 else 0) for j in range(k)) for i in range(k)
    )
    return IrrepMatrices(dim=k, h=h, e=e, f=f)


_SYM_CHAR_MAX_DEGREE = 6


def sym_char(L: LieAlgebraData, k: int, p: MultiPoly) -> Fraction:
    """Trace over the k-dimensional sl2 irrep of the symmetrization of p.

    Each monomial is averaged over all orderings of its factors, the factors
    are multiplied as representation matrices, and the trace is taken; the
    result is an exact rational.  Bounded to degree 6 to keep the ordering
    average affordable.
    """
    if L.name != "sl2":
        raise ValueError("sym_char is implemented for sl2 only")
    if p.ring != L.ring:
        raise RingError("polynomial is not in the sl2 ring")
    if p.total_degree() > _SYM_CHAR_MAX_DEGREE:
        raise ValueError(f"sym_char is bounded to degree {_SYM_CHAR_MAX_DEGREE}")
    rep = sl2_irrep(k)
    mats = {name: rep.matrix_for(name) for name in L.basis}
    total = Fraction(0)
    for exp, coeff in p.items():
        factors: list[str] = []
        for name, power in zip(L.basis, exp):
            factors.extend([name] * power)
        if not factors:
            total += coeff * k
            continue
        orderings = set(itertools.permutations(factors))
        acc = Fraction(0)
        for order in orderings:
            product = _linalg.identity(k)
            for name in order:
                product = _linalg.mat_mul(product, mats[name])
            acc += _trace(product)
        total += coeff * acc / len(orderings)
    return total
