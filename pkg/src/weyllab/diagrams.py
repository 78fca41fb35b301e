"""Jacobi diagrams as combinatorial graphs and their Lie-algebra weights.

A diagram is a set of half-edges, partitioned once into attachment points
(trivalent vertices with a cyclic order, or labeled legs) and once into
edges.  Weights are computed by exact sparse tensor contraction: each edge
contributes the inverse gram matrix, each trivalent vertex the totally
antisymmetric tensor ([X_a, X_b], X_c) in its cyclic order, and each leg
emits its basis variable into the tensor factor named by its label.  Closed
circles with no vertices count dim(g) each.

Diagrams are never rewritten modulo the diagrammatic relations; equality is
only ever tested after weight evaluation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .exact import HbarSeries, MultiPoly, PolyRing
from .laplace import e_op, g_star_space
from .liealg import LieAlgebraData


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Leg:
    half_edge: int
    label: str
    partial: bool = False


@dataclass(frozen=True)
class JacobiDiagram:
    vertices: tuple[tuple[int, int, int], ...] = ()
    legs: tuple[Leg, ...] = ()
    edges: tuple[tuple[int, int], ...] = ()
    loops: int = 0
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        attach = [h for v in self.vertices for h in v] + [leg.half_edge for leg in self.legs]
        if len(set(attach)) != len(attach):
            raise DiagramError("half-edge attached twice")
        in_edges: list[int] = []
        for a, b in self.edges:
            if a == b:
                raise DiagramError("an edge must pair two distinct half-edges")
            in_edges.extend((a, b))
        if len(set(in_edges)) != len(in_edges):
            raise DiagramError("half-edge used by two edges")
        if set(attach) != set(in_edges):
            raise DiagramError("attachment points and edges must cover the same half-edges")
        if self.loops < 0:
            raise DiagramError("negative loop count")

    @property
    def degree(self) -> int:
        """Half the number of (uni- and trivalent) vertices."""
        total = len(self.vertices) + len(self.legs)
        if total % 2:
            raise DiagramError("a diagram must have an even number of vertices")
        return total // 2

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({leg.label for leg in self.legs}))

    def scaled(self, c) -> "JacobiDiagram":
        return replace(self, coeff=self.coeff * Fraction(c))

    def canonical_key(self):
        """Structural key with half-edges relabeled in scan order (no coeff)."""
        mapping: dict[int, int] = {}

        def rank(h: int) -> int:
            if h not in mapping:
                mapping[h] = len(mapping)
            return mapping[h]

        verts = tuple(tuple(rank(h) for h in v) for v in self.vertices)
        legs = tuple((rank(leg.half_edge), leg.label, leg.partial) for leg in self.legs)
        edges = tuple(sorted(tuple(sorted((mapping[a], mapping[b]))) for a, b in self.edges))
        return (verts, legs, edges, self.loops)


def flip_vertex(d: JacobiDiagram, index: int) -> JacobiDiagram:
    """Reverse the cyclic order at one trivalent vertex (an AS flip)."""
    a, b, c = d.vertices[index]
    verts = list(d.vertices)
    verts[index] = (a, c, b)
    return replace(d, vertices=tuple(verts))


# -- standard small diagrams -------------------------------------------------


def strut(label: str = "x", partial: bool = False) -> JacobiDiagram:
    """A single edge joining two legs."""
    return JacobiDiagram(
        legs=(Leg(0, label, partial), Leg(1, label, partial)), edges=((0, 1),)
    )


def circle() -> JacobiDiagram:
    return JacobiDiagram(loops=1)


def theta() -> JacobiDiagram:
    """Two trivalent vertices joined by three edges, planar orientation."""
    return JacobiDiagram(vertices=((0, 1, 2), (3, 4, 5)), edges=((0, 5), (1, 4), (2, 3)))


def y_diagram(label: str = "x") -> JacobiDiagram:
    """One trivalent vertex with three legs."""
    return JacobiDiagram(
        vertices=((0, 1, 2),),
        legs=(Leg(3, label), Leg(4, label), Leg(5, label)),
        edges=((0, 3), (1, 4), (2, 5)),
    )


def dumbbell(label: str = "x") -> JacobiDiagram:
    """Two trivalent vertices joined by one edge, each carrying two legs."""
    return JacobiDiagram(
        vertices=((0, 1, 2), (3, 4, 5)),
        legs=(Leg(6, label), Leg(7, label), Leg(8, label), Leg(9, label)),
        edges=((2, 3), (0, 6), (1, 7), (4, 8), (5, 9)),
    )


def bubble_with_legs(label: str = "x") -> JacobiDiagram:
    """Two trivalent vertices joined by a double edge, one leg at each end."""
    return JacobiDiagram(
        vertices=((0, 1, 2), (3, 4, 5)),
        legs=(Leg(6, label), Leg(7, label)),
        edges=((1, 4), (2, 3), (0, 6), (5, 7)),
    )


def disjoint_union(d1: JacobiDiagram, d2: JacobiDiagram) -> JacobiDiagram:
    offset = max([h for v in d1.vertices for h in v]
                 + [leg.half_edge for leg in d1.legs], default=-1) + 1
    return JacobiDiagram(
        vertices=d1.vertices + tuple(tuple(h + offset for h in v) for v in d2.vertices),
        legs=d1.legs + tuple(replace(leg, half_edge=leg.half_edge + offset) for leg in d2.legs),
        edges=d1.edges + tuple((a + offset, b + offset) for a, b in d2.edges),
        loops=d1.loops + d2.loops,
        coeff=d1.coeff * d2.coeff,
    )


def strut_power(k: int, label: str = "x", partial: bool = False) -> JacobiDiagram:
    """k disjoint struts (the k-th power of the strut in the diagram algebra)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = JacobiDiagram()
    for _ in range(k):
        out = disjoint_union(out, strut(label, partial))
    return out


# -- weight evaluation --------------------------------------------------------

_VERTEX_TENSOR_CACHE: dict[str, dict[tuple[int, int, int], Fraction]] = {}
_WEIGHT_CACHE: dict[tuple, MultiPoly] = {}


def _vertex_tensor(L: LieAlgebraData) -> dict[tuple[int, int, int], Fraction]:
    if L.name not in _VERTEX_TENSOR_CACHE:
        table: dict[tuple[int, int, int], Fraction] = {}
        dim = L.dim
        for a in range(dim):
            for b in range(dim):
                coords = L.structure[a][b]
                for c in range(dim):
                    v = sum((coords[k] * L.gram[k][c] for k in range(dim)), Fraction(0))
                    if v:
                        table[(a, b, c)] = v
        _VERTEX_TENSOR_CACHE[L.name] = table
    return _VERTEX_TENSOR_CACHE[L.name]


def _join(f1, f2):
    """Contract two sparse factors over their shared indices (summed out)."""
    idx1, table1 = f1
    idx2, table2 = f2
    shared = [h for h in idx1 if h in idx2]
    keep1 = [i for i, h in enumerate(idx1) if h not in shared]
    keep2 = [i for i, h in enumerate(idx2) if h not in shared]
    pos1 = [idx1.index(h) for h in shared]
    pos2 = [idx2.index(h) for h in shared]
    grouped: dict[tuple, list] = {}
    for key2, v2 in table2.items():
        grouped.setdefault(tuple(key2[i] for i in pos2), []).append(
            (tuple(key2[i] for i in keep2), v2)
        )
    out_idx = tuple(idx1[i] for i in keep1) + tuple(idx2[i] for i in keep2)
    out: dict[tuple, Fraction] = {}
    for key1, v1 in table1.items():
        bucket = grouped.get(tuple(key1[i] for i in pos1))
        if not bucket:
            continue
        left = tuple(key1[i] for i in keep1)
        for right, v2 in bucket:
            key = left + right
            s = out.get(key, Fraction(0)) + v1 * v2
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
    return out_idx, out


def _contract_component(
    L: LieAlgebraData,
    vertices: list[tuple[int, int, int]],
    edges: list[tuple[int, int]],
    free: list[int],
):
    binv = {}
    dim = L.dim
    for i in range(dim):
        for j in range(dim):
            if L.gram_inv[i][j]:
                binv[(i, j)] = L.gram_inv[i][j]
    tensor = _vertex_tensor(L)
    factors = [(tuple(v), tensor) for v in vertices]
    factors += [((a, b), binv) for a, b in edges]
    while len(factors) > 1:
        best = None
        for i in range(len(factors)):
            set_i = set(factors[i][0])
            for j in range(i + 1, len(factors)):
                shared = len(set_i.intersection(factors[j][0]))
                if shared == 0:
                    continue
                cost = len(factors[i][1]) * len(factors[j][1])
                score = (-shared, cost)
                if best is None or score < best[0]:
                    best = (score, i, j)
        if best is None:
            raise DiagramError("component is not connected")
        _, i, j = best
        joined = _join(factors[i], factors[j])
        factors = [f for k, f in enumerate(factors) if k not in (i, j)]
        factors.append(joined)
    idx, table = factors[0]
    order = [idx.index(h) for h in free]
    if sorted(idx) != sorted(free):
        raise DiagramError("contraction left unexpected open indices")
    return {tuple(key[i] for i in order): v for key, v in table.items()}


def _output_ring(L: LieAlgebraData, labels: tuple[str, ...]) -> PolyRing:
    if len(labels) <= 1:
        return L.ring
    return PolyRing(tuple(f"{b}_{lab}" for lab in labels for b in L.basis))


def weight(d: JacobiDiagram, L: LieAlgebraData) -> MultiPoly:
    """The Lie-algebra weight of a diagram, as a polynomial (one variable set
    per leg label; a constant for closed diagrams)."""
    for leg in d.legs:
        if leg.partial:
            raise DiagramError(
                "weights are only defined for plain legs; partial labels only "
                "appear in the first argument of the gluing bracket"
            )
    labels = d.labels()
    ring = _output_ring(L, labels)
    key = (L.name, d.canonical_key())
    cached = _WEIGHT_CACHE.get(key)
    if cached is None:
        cached = _weight_uncached(d, L, labels, ring)
        _WEIGHT_CACHE[key] = cached
    return cached * d.coeff


def _weight_uncached(d, L, labels, ring):
    dim = L.dim
    scalar = Fraction(dim) ** d.loops
    node_of: dict[int, tuple] = {}
    for vi, v in enumerate(d.vertices):
        for h in v:
            node_of[h] = ("v", vi)
    for li, leg in enumerate(d.legs):
        node_of[leg.half_edge] = ("l", li)
    # connected components over attachment nodes
    adjacency: dict[tuple, set] = {node: set() for node in node_of.values()}
    for a, b in d.edges:
        adjacency[node_of[a]].add(node_of[b])
        adjacency[node_of[b]].add(node_of[a])
    seen: set[tuple] = set()
    poly = ring.one()
    for start in sorted(adjacency):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in comp:
                    comp.add(nxt)
                    stack.append(nxt)
        seen |= comp
        verts = [d.vertices[i] for kind, i in sorted(comp) if kind == "v"]
        leg_ids = [i for kind, i in sorted(comp) if kind == "l"]
        free = [d.legs[i].half_edge for i in leg_ids]
        comp_hedges = {h for v in verts for h in v} | set(free)
        edges = [e for e in d.edges if e[0] in comp_hedges]
        table = _contract_component(L, verts, edges, free)
        terms: dict[tuple[int, ...], Fraction] = {}
        for assign, value in table.items():
            exp = [0] * ring.nvars
            for leg_index, basis_index in zip(leg_ids, assign):
                leg = d.legs[leg_index]
                block = labels.index(leg.label) * dim if len(labels) > 1 else 0
                exp[block + basis_index] += 1
            key = tuple(exp)
            s = terms.get(key, Fraction(0)) + value
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        poly = poly * MultiPoly(ring, terms)
    return poly * scalar


@dataclass(frozen=True)
class DiagramSum:
    """A finite rational linear combination of Jacobi diagrams."""

    terms: tuple[tuple[Fraction, JacobiDiagram], ...] = ()

    @staticmethod
    def of(*diagrams: JacobiDiagram) -> "DiagramSum":
        return DiagramSum(tuple((Fraction(1), d) for d in diagrams))

    def __add__(self, other: "DiagramSum") -> "DiagramSum":
        return DiagramSum(self.terms + other.terms)

    def __rmul__(self, c) -> "DiagramSum":
        c = Fraction(c)
        return DiagramSum(tuple((c * a, d) for a, d in self.terms))

    def __len__(self) -> int:
        return len(self.terms)


def weight_sum(s: DiagramSum, L: LieAlgebraData) -> MultiPoly:
    total = None
    for c, d in s.terms:
        w = weight(d, L) * c
        total = w if total is None else total + w
    return total if total is not None else L.ring.zero()


def hbar_weight(s: DiagramSum | JacobiDiagram, L: LieAlgebraData) -> HbarSeries:
    """The h-graded weight: each degree-d diagram is weighted by h^d."""
    if isinstance(s, JacobiDiagram):
        s = DiagramSum.of(s)
    coeffs: dict[int, MultiPoly] = {}
    ring = None
    for c, d in s.terms:
        w = weight(d, L) * c
        ring = w.ring if ring is None else ring
        coeffs[d.degree] = coeffs.get(d.degree, w.ring.zero()) + w
    if ring is None:
        return HbarSeries.zero()
    return HbarSeries(ring, coeffs)


def glue(d1: JacobiDiagram, d2: JacobiDiagram, pairing) -> JacobiDiagram:
    """Glue legs of d1 to legs of d2 along the given (leg1, leg2) index pairs;
    matched legs disappear and their edges concatenate."""
    offset = max(
        [h for v in d1.vertices for h in v] + [leg.half_edge for leg in d1.legs],
        default=-1,
    ) + 1
    partner: dict[int, int] = {}
    for a, b in d1.edges:
        partner[a], partner[b] = b, a
    for a, b in d2.edges:
        partner[a + offset], partner[b + offset] = b + offset, a + offset
    loops = d1.loops + d2.loops
    glued1 = set()
    glued2 = set()
    for i1, i2 in pairing:
        glued1.add(i1)
        glued2.add(i2)
        a = d1.legs[i1].half_edge
        b = d2.legs[i2].half_edge + offset
        x = partner.pop(a)
        y = partner.pop(b)
        if x == b:
            loops += 1
            continue
        partner[x], partner[y] = y, x
    legs = tuple(leg for i, leg in enumerate(d1.legs) if i not in glued1) + tuple(
        replace(leg, half_edge=leg.half_edge + offset)
        for i, leg in enumerate(d2.legs)
        if i not in glued2
    )
    edges = tuple(sorted((a, b)) for a, b in partner.items() if a < b)
    return JacobiDiagram(
        vertices=d1.vertices + tuple(tuple(h + offset for h in v) for v in d2.vertices),
        legs=legs,
        edges=tuple(tuple(e) for e in edges),
        loops=loops,
        coeff=d1.coeff * d2.coeff,
    )


def bracket(s1: DiagramSum | JacobiDiagram, s2: DiagramSum | JacobiDiagram) -> DiagramSum:
    """Sum over all ways of gluing the partial-labeled legs of the first
    argument to the equally-labeled plain legs of the second, label by label.
    Terms with mismatched leg counts contribute zero."""
    if isinstance(s1, JacobiDiagram):
        s1 = DiagramSum.of(s1)
    if isinstance(s2, JacobiDiagram):
        s2 = DiagramSum.of(s2)
    out: list[tuple[Fraction, JacobiDiagram]] = []
    for c1, d1 in s1.terms:
        if any(not leg.partial for leg in d1.legs):
            raise DiagramError("every leg of the first bracket argument must be partial")
        for c2, d2 in s2.terms:
            if any(leg.partial for leg in d2.legs):
                raise DiagramError("every leg of the second bracket argument must be plain")
            by_label1: dict[str, list[int]] = {}
            for i, leg in enumerate(d1.legs):
                by_label1.setdefault(leg.label, []).append(i)
            by_label2: dict[str, list[int]] = {}
            for i, leg in enumerate(d2.legs):
                by_label2.setdefault(leg.label, []).append(i)
            if set(by_label1) != set(by_label2):
                continue
            if any(len(by_label1[k]) != len(by_label2[k]) for k in by_label1):
                continue
            labels = sorted(by_label1)
            choices = [
                [list(zip(by_label1[k], perm)) for perm in itertools.permutations(by_label2[k])]
                for k in labels
            ]
            for combo in itertools.product(*choices):
                pairing = [pair for block in combo for pair in block]
                out.append((c1 * c2, glue(d1, d2, pairing)))
    return DiagramSum(tuple(out))


def wu_check(
    L: LieAlgebraData, f: int, d: JacobiDiagram, max_legs: int = 6
) -> tuple[HbarSeries, HbarSeries]:
    """Both sides of the bracket/Laplacian correspondence for one diagram:
    the h-graded weight of < exp(-strut/(2f)), D > against the evaluation
    operator applied to the h-graded weight of D."""
    if f == 0:
        raise ValueError("framing must be nonzero")
    if len(d.legs) > max_legs:
        raise DiagramError(f"diagram exceeds the {max_legs}-leg bound")
    labels = d.labels()
    if len(labels) > 1:
        raise DiagramError("the correspondence check uses a single leg label")
    label = labels[0] if labels else "x"
    nlegs = len(d.legs)
    if nlegs % 2:
        lhs = HbarSeries.zero()
    else:
        k = nlegs // 2
        fact = 1
        for t in range(1, k + 1):
            fact *= t
        coefficient = Fraction(-1, 2 * f) ** k / fact
        exp_term = DiagramSum(((coefficient, strut_power(k, label, partial=True)),))
        lhs = hbar_weight(bracket(exp_term, d), L)
    rhs = e_op(g_star_space(L), f, weight(d, L)).shift(d.degree)
    return lhs, rhs


# -- text format ---------------------------------------------------------------


def to_text(d: JacobiDiagram) -> str:
    """Deterministic literal form; parse_diagram round-trips it."""
    lines = []
    if d.coeff != 1:
        lines.append(f"coeff {d.coeff}")
    if d.loops:
        lines.append(f"loops {d.loops}")
    for v in d.vertices:
        lines.append(f"vertex {v[0]} {v[1]} {v[2]}")
    for leg in d.legs:
        kind = "dleg" if leg.partial else "leg"
        lines.append(f"{kind} {leg.half_edge} {leg.label}")
    for a, b in d.edges:
        lines.append(f"edge {a} {b}")
    return "\n".join(lines)


def parse_diagram(text: str) -> JacobiDiagram:
    coeff = Fraction(1)
    loops = 0
    vertices: list[tuple[int, int, int]] = []
    legs: list[Leg] = []
    edges: list[tuple[int, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "coeff" and len(rest) == 1:
            coeff = Fraction(rest[0])
        elif head == "loops" and len(rest) == 1:
            loops = int(rest[0])
        elif head == "vertex" and len(rest) == 3:
            vertices.append((int(rest[0]), int(rest[1]), int(rest[2])))
        elif head in ("leg", "dleg") and len(rest) == 2:
            legs.append(Leg(int(rest[0]), rest[1], head == "dleg"))
        elif head == "edge" and len(rest) == 2:
            edges.append((int(rest[0]), int(rest[1])))
        else:
            raise DiagramError(f"cannot parse diagram line: {raw!r}")
    return JacobiDiagram(
        vertices=tuple(vertices),
        legs=tuple(legs),
        edges=tuple(edges),
        loops=loops,
        coeff=coeff,
    )
