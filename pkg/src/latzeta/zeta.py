"""Zeta functions of the quotient Cayley graph, by independent routes.

The positive-geodesic zeta is computed three ways: as an exact determinant of
the typed adjacency polynomial, as the product of (1 - u^{m_i})^{N/m_i} over
the orders of the standard directions, and as a character (L-function)
product in high-precision complex arithmetic rounded back to integers.  A
fourth route truncates the Euler product over brute-force enumerated
positive geodesics.  The classical Ihara zeta comes from the Bass
determinant together with a backtrackless-cycle enumeration oracle on simple
quotients.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp, mpc, mpf

from .errors import MultigraphError, ToleranceError
from .exactdet import polymatrix_det
from .cayley import QuotientGraph, build_graph
from .lattice import LatticeVector
from .polynomials import IntPolynomial
from .quotient import (
    TranslationSubgroup,
    characters,
    quotient_group,
)

LFUNCTION_MIN_PRECISION_BITS = 150


def _lfunction_precision_bits(degree: int) -> int:
    # intermediate partial products can grow to ~2^degree before cancelling,
    # so keep that many guard bits on top of the base precision
    return LFUNCTION_MIN_PRECISION_BITS + degree


def zeta_positive_det(g: QuotientGraph) -> IntPolynomial:
    """det(I - A_1 u + A_2 u^2 - ... + (-1)^n u^n I), exactly.

    Degree n*N with constant term 1.
    """
    size = g.num_vertices
    eye = np.eye(size, dtype=np.int64)
    mats = [eye]
    for i, a in enumerate(g.mats, start=1):
        mats.append((-1) ** i * a)
    mats.append((-1) ** g.n * eye)
    poly = polymatrix_det(mats)
    if poly.coefficient(0) != 1 or poly.degree != g.n * size:
        raise ArithmeticError("positive zeta determinant has unexpected shape")
    return poly


def direction_orders(gamma: TranslationSubgroup) -> List[int]:
    """Orders m_1, .., m_n of the n standard directions in the quotient."""
    q = quotient_group(gamma)
    return [q.element_order(q.project_vector(LatticeVector.basis_vector(gamma.n, i)))
            for i in range(1, gamma.n + 1)]


def zeta_positive_orders(gamma: TranslationSubgroup) -> IntPolynomial:
    """prod_i (1 - u^{m_i})^{N/m_i} over the direction orders."""
    n_vertices = gamma.index
    out = IntPolynomial.one()
    for m in direction_orders(gamma):
        out = out * IntPolynomial.one_minus_power(m, n_vertices // m)
    return out


def lfunction_with_deviation(gamma: TranslationSubgroup,
                             tolerance: float = 1e-9
                             ) -> Tuple[IntPolynomial, float]:
    """Character-product L-function, rounded to integers.

    Each character contributes prod_j (1 - rho_j u) over its n Satake
    parameters; the product over all characters of the quotient is computed
    in complex arithmetic with enough guard bits for the degree and rounded
    coefficientwise.  Returns the polynomial and the worst rounding
    deviation; raises if the deviation exceeds the tolerance.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    q = quotient_group(gamma)
    with mp.workprec(_lfunction_precision_bits(gamma.n * gamma.index)):
        total = [mpc(1)]
        two_pi = 2 * mp.pi
        for chi in characters(q):
            factor = [mpc(1)]
            for turn in chi.satake_turns(q):
                angle = two_pi * mpf(turn.numerator) / turn.denominator
                rho = mp.exp(1j * angle)
                factor = [factor[0]] + [factor[i] - rho * factor[i - 1]
                                        for i in range(1, len(factor))] + [-rho * factor[-1]]
            new = [mpc(0)] * (len(total) + len(factor) - 1)
            for i, a in enumerate(total):
                for j, b in enumerate(factor):
                    new[i + j] += a * b
            total = new
        coeffs = []
        deviation = 0.0
        for c in total:
            nearest = int(mp.nint(c.real))
            dev = float(max(abs(c.real - nearest), abs(c.imag)))
            deviation = max(deviation, dev)
            coeffs.append(nearest)
    if deviation > tolerance:
        raise ToleranceError(
            f"L-function rounding deviation {deviation:g} exceeds {tolerance:g}")
    return IntPolynomial(coeffs), deviation


def lfunction(gamma: TranslationSubgroup, tolerance: float = 1e-9) -> IntPolynomial:
    return lfunction_with_deviation(gamma, tolerance)[0]


def euler_characteristic(g: QuotientGraph) -> int:
    """Vertices minus edges: N * (2 - 2^{n-1})."""
    return g.num_vertices * (2 - 2 ** (g.n - 1))


def ihara_bass(g: QuotientGraph) -> Tuple[IntPolynomial, int]:
    """(det(I - A u + (2^n - 3) u^2 I), Euler characteristic).

    In the product convention the Ihara zeta equals numerator / (1-u^2)^chi.
    The sign of the exponent varies between conventions, so the pair is
    returned and callers expand whichever form they need.
    """
    size = g.num_vertices
    eye = np.eye(size, dtype=np.int64)
    q = 2 ** g.n - 3
    numerator = polymatrix_det([eye, -g.adjacency(), q * eye])
    return numerator, euler_characteristic(g)


def ihara_zeta_series(numerator: IntPolynomial, chi: int, max_deg: int
                      ) -> IntPolynomial:
    """numerator / (1 - u^2)^chi as a truncated series (exact when chi <= 0)."""
    if chi <= 0:
        return (numerator * IntPolynomial.one_minus_power(2, -chi)).truncate(max_deg)
    inv = IntPolynomial.one_minus_power(2, chi).series_inverse(max_deg)
    return numerator.mul_truncated(inv, max_deg)


@dataclass(frozen=True)
class GeodesicClass:
    """A rotation class of closed positive geodesics in one direction."""

    length: int
    primitive_length: int
    direction: int
    representative: Tuple[int, ...]

    def __post_init__(self):
        if self.length % self.primitive_length != 0:
            raise ValueError("primitive length must divide length")


def enumerate_positive_geodesics(g: QuotientGraph, max_len: int
                                 ) -> List[GeodesicClass]:
    """All classes of primitive closed positive geodesics of length <= max_len.

    A positive geodesic is a straight walk repeating a single type-1
    direction, so enumeration walks each direction from each vertex until it
    first closes; classes are closed walks up to rotation of the start.
    """
    out: List[GeodesicClass] = []
    q = g.group
    for i in range(1, g.n + 1):
        step = q.project_vector(LatticeVector.basis_vector(g.n, i))
        visited = set()
        for start in g.vertices:
            if start in visited:
                continue
            cycle = [start]
            cur = q.add(start, step)
            while cur != start:
                cycle.append(cur)
                cur = q.add(cur, step)
            visited.update(cycle)
            if len(cycle) <= max_len:
                out.append(GeodesicClass(
                    length=len(cycle),
                    primitive_length=len(cycle),
                    direction=i,
                    representative=min(cycle),
                ))
    out.sort(key=lambda c: (c.direction, c.representative))
    return out


def euler_product_truncation(classes: Sequence[GeodesicClass], max_deg: int
                             ) -> IntPolynomial:
    """prod (1 - u^{length}) over primitive classes, truncated at max_deg."""
    out = IntPolynomial.one()
    for c in classes:
        if c.length <= max_deg:
            out = out.mul_truncated(
                IntPolynomial([1] + [0] * (c.length - 1) + [-1]), max_deg)
    return out


@dataclass(frozen=True)
class CycleClass:
    """A rotation class of primitive tailless backtrackless closed paths."""

    length: int
    edge_sequence: Tuple[Tuple[int, int], ...]


def enumerate_backtrackless_cycles(g: QuotientGraph, max_len: int
                                   ) -> List[CycleClass]:
    """Primitive tailless backtrackless cycle classes up to rotation.

    Simple graphs only.  Classes are canonicalized by their lexicographically
    least rotation of the directed-edge sequence; each cycle is found from
    its minimal directed edge, with branches pruned once they use a smaller
    edge or cannot return in the remaining length.
    """
    if not g.is_simple():
        raise MultigraphError(
            "backtrackless cycle enumeration needs a simple quotient graph")
    size = g.num_vertices
    adj_mat = g.adjacency()
    neighbors = [np.nonzero(adj_mat[:, v])[0].tolist() for v in range(size)]
    edge_id: Dict[Tuple[int, int], int] = {}
    for v in range(size):
        for w in neighbors[v]:
            edge_id[(v, w)] = len(edge_id)

    # graph distances for pruning (plain BFS per start vertex)
    def bfs(src: int) -> List[int]:
        dist = [-1] * size
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for x in frontier:
                for y in neighbors[x]:
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        return dist

    found: Dict[Tuple[int, ...], None] = {}

    def canonical(seq: Tuple[int, ...]) -> Tuple[int, ...]:
        return min(seq[i:] + seq[:i] for i in range(len(seq)))

    def is_primitive(seq: Tuple[int, ...]) -> bool:
        length = len(seq)
        for d in range(1, length):
            if length % d == 0 and seq == seq[d:] + seq[:d]:
                return False
        return True

    for (v0, w0), id0 in sorted(edge_id.items(), key=lambda kv: kv[1]):
        dist_to_start = bfs(v0)
        stack = [(w0, v0, (id0,))]
        while stack:
            cur, prev, path = stack.pop()
            if cur == v0 and len(path) >= 2 and prev != w0:
                # closed, and the seam does not backtrack (tailless)
                seq = canonical(path)
                if seq[0] == id0 and is_primitive(seq):
                    found[seq] = None
            if len(path) >= max_len:
                continue
            remaining = max_len - len(path)
            for nxt in neighbors[cur]:
                if nxt == prev:
                    continue
                eid = edge_id[(cur, nxt)]
                if eid < id0:
                    continue
                if dist_to_start[nxt] > remaining - 1:
                    continue
                stack.append((nxt, cur, path + (eid,)))

    id_to_edge = {i: e for e, i in edge_id.items()}
    classes = [CycleClass(length=len(seq),
                          edge_sequence=tuple(id_to_edge[i] for i in seq))
               for seq in found]
    classes.sort(key=lambda c: (c.length, c.edge_sequence))
    return classes


def backtrackless_euler_truncation(classes: Sequence[CycleClass], max_deg: int
                                   ) -> IntPolynomial:
    out = IntPolynomial.one()
    for c in classes:
        if c.length <= max_deg:
            out = out.mul_truncated(
                IntPolynomial([1] + [0] * (c.length - 1) + [-1]), max_deg)
    return out


@dataclass
class ZetaReport:
    """All four positive-zeta routes on one subgroup, with verdicts."""

    n: int
    basis: Tuple[Tuple[int, ...], ...]
    num_vertices: int
    max_degree: int
    tolerance: float
    det_poly: IntPolynomial = field(default=None)
    orders_poly: IntPolynomial = field(default=None)
    lfunction_poly: IntPolynomial = field(default=None)
    lfunction_deviation: float = 0.0
    euler_truncated: IntPolynomial = field(default=None)
    det_equals_orders: bool = False
    det_equals_lfunction: bool = False
    det_matches_euler: bool = False
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return (self.det_equals_orders and self.det_equals_lfunction
                and self.det_matches_euler)

    def to_json_obj(self):
        return {
            "config": {
                "n": self.n,
                "basis": [list(r) for r in self.basis],
                "vertices": self.num_vertices,
                "maxDegree": self.max_degree,
                "tolerance": self.tolerance,
            },
            "polynomials": {
                "determinant": self.det_poly.to_json_coeffs(),
                "orders_product": self.orders_poly.to_json_coeffs(),
                "lfunction": self.lfunction_poly.to_json_coeffs(),
                "euler_truncated": self.euler_truncated.to_json_coeffs(),
            },
            "lfunction_deviation": self.lfunction_deviation,
            "verdicts": {
                "det_equals_orders": self.det_equals_orders,
                "det_equals_lfunction": self.det_equals_lfunction,
                "det_matches_euler_truncation": self.det_matches_euler,
            },
            "timings_s": dict(sorted(self.timings.items())),
        }


def verify_theorems(gamma: TranslationSubgroup, max_deg: int = 12,
                    tolerance: float = 1e-9,
                    graph: Optional[QuotientGraph] = None) -> ZetaReport:
    """Run all four positive-zeta routes and compare them pairwise.

    An explicit pre-built (possibly perturbed) graph can be supplied; the
    orders, character, and geodesic routes always come from the subgroup
    itself, which is what makes a perturbation detectable.
    """
    if graph is None:
        graph = build_graph(gamma)
    report = ZetaReport(
        n=gamma.n, basis=gamma.basis, num_vertices=graph.num_vertices,
        max_degree=max_deg, tolerance=tolerance,
    )
    t0 = time.monotonic()
    report.det_poly = zeta_positive_det(graph)
    report.timings["determinant"] = time.monotonic() - t0

    t0 = time.monotonic()
    report.orders_poly = zeta_positive_orders(gamma)
    report.timings["orders_product"] = time.monotonic() - t0

    t0 = time.monotonic()
    report.lfunction_poly, report.lfunction_deviation = \
        lfunction_with_deviation(gamma, tolerance)
    report.timings["lfunction"] = time.monotonic() - t0

    t0 = time.monotonic()
    classes = enumerate_positive_geodesics(graph, max_deg)
    report.euler_truncated = euler_product_truncation(classes, max_deg)
    report.timings["euler_product"] = time.monotonic() - t0

    report.det_equals_orders = report.det_poly == report.orders_poly
    report.det_equals_lfunction = report.det_poly == report.lfunction_poly
    report.det_matches_euler = (report.det_poly.truncate(max_deg)
                                == report.euler_truncated)
    return report
