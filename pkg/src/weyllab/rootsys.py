"""Root-system data in fundamental-weight coordinates.

Supported systems: A1, A2, A3, B2, G2.  The invariant inner product is
normalized so every short root has squared length 2.  A weight is written
lambda = sum n_i * Lambda_i and all polynomials on the Cartan dual live in
the ring of the coordinates n_i (named ``n``, ``m``, ``l`` by rank).

Conventions, fixed once:
  * Cartan matrix entry a[i][j] = <alpha_j, alpha_i_check>.
  * Root gram (alpha_i, alpha_j) = d_i * a[i][j] with d_i = |alpha_i|^2 / 2.
  * The coordinate n_i is the linear function lambda -> <lambda, alpha_i_check>,
    so the Gram matrix governing the Laplacian on the Cartan dual is the
    coroot gram (alpha_i_check, alpha_j_check) = a[i][j] / d_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import _linalg
from ._linalg import Matrix
from .exact import HbarSeries, MultiPoly, PolyRing


class UnsupportedRootSystemError(ValueError):
    pass


class WeylClosureError(RuntimeError):
    pass


_CARTAN = {
    ("A", 1): (((2,),), (1,)),
    ("A", 2): (((2, -1), (-1, 2)), (1, 1)),
    ("A", 3): (((2, -1, 0), (-1, 2, -1), (0, -1, 2)), (1, 1, 1)),
    # B2: alpha_1 long (|.|^2 = 4), alpha_2 short.
    ("B", 2): (((2, -1), (-2, 2)), (2, 1)),
    # G2: alpha_1 short, alpha_2 long (|.|^2 = 6).
    ("G", 2): (((2, -3), (-1, 2)), (1, 3)),
}

_COORD_NAMES = {1: ("n",), 2: ("n", "m"), 3: ("n", "m", "l")}

_WEYL_BOUND = 10**6


@dataclass(frozen=True)
class RootInvariants:
    phi_plus: int
    dim_g: int
    rank: int
    dual_coxeter: int
    d_max: int
    rho_norm_sq: Fraction


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    d_sym: tuple[int, ...]
    #: positive roots in simple-root coordinates (integer vectors)
    positive_roots: tuple[tuple[int, ...], ...]
    weight_gram: Matrix
    coroot_gram: Matrix
    ring: PolyRing

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def phi_plus(self) -> int:
        return len(self.positive_roots)

    @property
    def rho_norm_sq(self) -> Fraction:
        return sum((x for row in self.weight_gram for x in row), Fraction(0))

    def simple_roots_weight(self) -> tuple[tuple[int, ...], ...]:
        """Simple roots in fundamental-weight coordinates (Cartan columns)."""
        return tuple(
            tuple(self.cartan[i][j] for i in range(self.rank)) for j in range(self.rank)
        )

    def positive_roots_weight(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(sum(self.cartan[i][j] * m[j] for j in range(self.rank)) for i in range(self.rank))
            for m in self.positive_roots
        )

    def pairing_poly(self, root: tuple[int, ...]) -> MultiPoly:
        """(lambda, root) as a linear polynomial in the coordinates n_i."""
        poly = self.ring.zero()
        for j, name in enumerate(self.ring.variables):
            c = self.d_sym[j] * root[j]
            if c:
                poly = poly + self.ring.var(name) * c
        return poly

    def pairing_rho(self, root: tuple[int, ...]) -> Fraction:
        return Fraction(sum(self.d_sym[j] * root[j] for j in range(self.rank)))

    def root_norm_sq(self, root: tuple[int, ...]) -> Fraction:
        total = Fraction(0)
        for i in range(self.rank):
            for j in range(self.rank):
                total += root[i] * root[j] * self.d_sym[i] * self.cartan[i][j]
        return total

    def to_json_dict(self) -> dict:
        inv = invariants(self)
        return {
            "name": self.name,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "symmetrizers": list(self.d_sym),
            "positive_roots_simple": [list(r) for r in self.positive_roots],
            "positive_roots_weight": [list(r) for r in self.positive_roots_weight()],
            "weight_gram": [[str(x) for x in row] for row in self.weight_gram],
            "coroot_gram": [[str(x) for x in row] for row in self.coroot_gram],
            "coordinates": list(self.ring.variables),
            "invariants": {
                "phi_plus": inv.phi_plus,
                "dim_g": inv.dim_g,
                "rank": inv.rank,
                "dual_coxeter": inv.dual_coxeter,
                "d_max": inv.d_max,
                "rho_norm_sq": str(inv.rho_norm_sq),
            },
        }


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    key = (family.upper(), rank)
    if key not in _CARTAN:
        supported = ", ".join(f"{f}{r}" for f, r in sorted(_CARTAN))
        raise UnsupportedRootSystemError(
            f"unsupported root system {family}{rank}; supported: {supported}"
        )
    cartan, d_sym = _CARTAN[key]
    positive = _positive_roots(cartan)
    a = _linalg.mat(cartan)
    root_gram = tuple(
        tuple(Fraction(d_sym[i] * cartan[i][j]) for j in range(rank)) for i in range(rank)
    )
    a_inv = _linalg.mat_inv(a)
    a_t_inv = tuple(tuple(a_inv[j][i] for j in range(rank)) for i in range(rank))
    weight_gram = _linalg.mat_mul(_linalg.mat_mul(a_t_inv, root_gram), a_inv)
    coroot_gram = tuple(
        tuple(Fraction(cartan[i][j], d_sym[j]) for j in range(rank)) for i in range(rank)
    )
    rs = RootSystem(
        family=key[0],
        rank=rank,
        cartan=cartan,
        d_sym=d_sym,
        positive_roots=positive,
        weight_gram=weight_gram,
        coroot_gram=coroot_gram,
        ring=PolyRing(_COORD_NAMES[rank]),
    )
    if not _linalg.is_positive_definite(weight_gram):
        raise UnsupportedRootSystemError(f"weight gram of {rs.name} is not positive definite")
    if not _linalg.is_positive_definite(coroot_gram):
        raise UnsupportedRootSystemError(f"coroot gram of {rs.name} is not positive definite")
    return rs


def _positive_roots(cartan) -> tuple[tuple[int, ...], ...]:
    """All positive roots in simple-root coordinates, by reflection closure."""
    rank = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    seen = set(simple)
    queue = list(simple)
    while queue:
        beta = queue.pop(0)
        for i in range(rank):
            pairing = sum(cartan[i][j] * beta[j] for j in range(rank))
            new = list(beta)
            new[i] -= pairing
            new_t = tuple(new)
            if new_t not in seen:
                seen.add(new_t)
                queue.append(new_t)
    positive = [r for r in seen if all(c >= 0 for c in r)]
    positive.sort(key=lambda r: (sum(r), r))
    return tuple(positive)


@dataclass(frozen=True)
class WeylGroup:
    """All elements as exact matrices acting on fundamental-weight coordinates."""

    matrices: tuple[Matrix, ...]
    dets: tuple[int, ...]
    generators: tuple[Matrix, ...]

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(zip(self.matrices, self.dets))


@lru_cache(maxsize=None)
def weyl_group(rs: RootSystem) -> WeylGroup:
    rank = rs.rank
    gens = []
    for j in range(rank):
        rows = []
        for i in range(rank):
            row = [Fraction(1 if i == k else 0) for k in range(rank)]
            row[j] -= rs.cartan[i][j]
            rows.append(tuple(row))
        gens.append(tuple(rows))
    ident = _linalg.identity(rank)
    elements = [ident]
    dets = [1]
    index = {ident: 0}
    head = 0
    while head < len(elements):
        current = elements[head]
        current_det = dets[head]
        head += 1
        for g in gens:
            new = _linalg.mat_mul(g, current)
            if new not in index:
                index[new] = len(elements)
                elements.append(new)
                dets.append(-current_det)
                if len(elements) > _WEYL_BOUND:
                    raise WeylClosureError("Weyl closure exceeded the safety bound")
    return WeylGroup(tuple(elements), tuple(dets), tuple(gens))


def apply_weyl(rs: RootSystem, w: Matrix, p: MultiPoly) -> MultiPoly:
    """Substitute coordinates by their image under w: returns p(w . n)."""
    names = rs.ring.variables
    images = {}
    for k, name in enumerate(names):
        img = rs.ring.zero()
        for j, other in enumerate(names):
            if w[k][j]:
                img = img + rs.ring.var(other) * w[k][j]
        images[name] = img
    return p.substitute(images)


@lru_cache(maxsize=None)
def disc_poly(rs: RootSystem) -> MultiPoly:
    """The Weyl-skew polynomial prod (lambda, alpha) / (rho, alpha)."""
    poly = rs.ring.one()
    for root in rs.positive_roots:
        poly = poly * rs.pairing_poly(root) / rs.pairing_rho(root)
    return poly


def invariants(rs: RootSystem) -> RootInvariants:
    phi = rs.phi_plus
    highest = max(rs.positive_roots, key=lambda r: (sum(r), r))
    h_check = 1 + Fraction(2) * rs.pairing_rho(highest) / rs.root_norm_sq(highest)
    if h_check.denominator != 1:
        raise AssertionError("dual Coxeter number came out non-integral")
    d_max = max(
        abs(rs.cartan[i][j]) for i in range(rs.rank) for j in range(rs.rank) if i != j
    ) if rs.rank > 1 else 1
    return RootInvariants(
        phi_plus=phi,
        dim_g=2 * phi + rs.rank,
        rank=rs.rank,
        dual_coxeter=int(h_check),
        d_max=d_max,
        rho_norm_sq=rs.rho_norm_sq,
    )


def _quantum_factor(rs: RootSystem, pairing: MultiPoly, order: int) -> HbarSeries:
    """2*sinh((lambda,alpha) h / 2) / h as a series with polynomial coefficients."""
    coeffs = {}
    power = pairing
    square = pairing * pairing
    k = 0
    factorial = Fraction(1)
    while 2 * k <= order:
        coeffs[2 * k] = power / (Fraction(4) ** k * factorial)
        power = power * square
        factorial *= (2 * k + 2) * (2 * k + 3)
        k += 1
    return HbarSeries(rs.ring, coeffs, order)


@lru_cache(maxsize=None)
def qdim_series(rs: RootSystem, order: int) -> HbarSeries:
    """Quantum dimension prod [(lambda,alpha)] / [(rho,alpha)] through h^order.

    Only even powers of h appear; the h^0 coefficient is disc_poly(rs).
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    num = HbarSeries.one(rs.ring).truncate(order)
    den = HbarSeries.one(rs.ring).truncate(order)
    for root in rs.positive_roots:
        num = num * _quantum_factor(rs, rs.pairing_poly(root), order)
        den = den * _quantum_factor(rs, rs.ring.const(rs.pairing_rho(root)), order)
    return num * den.inverse(order)


def weyl_invariant_basis(rs: RootSystem, max_degree: int) -> list[MultiPoly]:
    """Monic orbit-sums of monomials: a spanning set of W-invariants by degree.

    Deterministic order (graded-lexicographic leading monomials); includes the
    constant 1.
    """
    group = weyl_group(rs)
    basis: list[MultiPoly] = []
    seen: set[tuple[tuple[int, ...], ...]] = set()
    for degree in range(0, max_degree + 1):
        for exp in _monomials(rs.rank, degree):
            mono = MultiPoly(rs.ring, {exp: Fraction(1)})
            total = rs.ring.zero()
            for w in group.matrices:
                total = total + apply_weyl(rs, w, mono)
            if total.is_zero():
                continue
            key_exp = max(
                (e for e, _ in total.items()), key=lambda e: (sum(e), e)
            )
            invariant = total / total.coefficient(key_exp)
            signature = tuple(sorted(e for e, _ in invariant.items()))
            if signature in seen:
                continue
            seen.add(signature)
            basis.append(invariant)
    return basis


def _monomials(rank: int, degree: int):
    if rank == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(rank - 1, degree - first):
            yield (first,) + rest
