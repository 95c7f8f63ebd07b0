import json
import math
import random

import numpy as np
import pytest

from latzeta.errors import MultigraphError, ToleranceError
from latzeta.cayley import build_graph, perturb_adjacency
from latzeta.exactdet import coefficient_bound, naive_polymatrix_det, polymatrix_det
from latzeta.polynomials import IntPolynomial
from latzeta.quotient import TranslationSubgroup
from latzeta.zeta import (
    backtrackless_euler_truncation,
    direction_orders,
    enumerate_backtrackless_cycles,
    enumerate_positive_geodesics,
    euler_product_truncation,
    ihara_bass,
    ihara_zeta_series,
    lfunction,
    lfunction_with_deviation,
    verify_theorems,
    zeta_positive_det,
    zeta_positive_orders,
)


def test_polymatrix_det_against_leibniz_oracle():
    rng = random.Random(31)
    for _ in range(25):
        size = rng.randint(1, 4)
        terms = rng.randint(1, 4)
        mats = [np.array([[rng.randint(-3, 3) for _ in range(size)]
                          for _ in range(size)], dtype=np.int64)
                for _ in range(terms)]
        expected = naive_polymatrix_det(mats)
        got = polymatrix_det(mats)
        assert got == expected


def test_coefficient_bound_dominates():
    rng = random.Random(32)
    for _ in range(10):
        size = rng.randint(1, 3)
        mats = [np.array([[rng.randint(-4, 4) for _ in range(size)]
                          for _ in range(size)], dtype=np.int64)
                for _ in range(3)]
        bound = coefficient_bound(mats)
        poly = naive_polymatrix_det(mats)
        assert all(abs(c) <= bound for c in poly.coeffs)


def test_zeta_positive_det_examples():
    g = build_graph(TranslationSubgroup(2, [[2]]))
    assert zeta_positive_det(g) == IntPolynomial.one_minus_power(2, 2)
    g3 = build_graph(TranslationSubgroup(3, [[1, 0], [-1, 3]]))
    assert zeta_positive_det(g3) == IntPolynomial.one_minus_power(3, 3)
    g9 = build_graph(TranslationSubgroup(3, [[3, 0], [0, 3]]))
    assert zeta_positive_det(g9) == IntPolynomial.one_minus_power(3, 9)


def test_zeta_degree_and_constant_term():
    for gam in [TranslationSubgroup(2, [[6]]),
                TranslationSubgroup(3, [[2, 1], [1, 2]]),
                TranslationSubgroup(4, [[1, 0, 1], [-1, 1, 1], [0, -1, 2]])]:
        g = build_graph(gam)
        z = zeta_positive_det(g)
        assert z.degree == gam.n * gam.index
        assert z.coefficient(0) == 1
        assert z.coeffs[-1] == (-1) ** (gam.n * gam.index)


def test_zeta_positive_orders_examples():
    assert zeta_positive_orders(TranslationSubgroup(2, [[2]])) \
        == IntPolynomial.one_minus_power(2, 2)
    assert zeta_positive_orders(TranslationSubgroup(3, [[1, 0], [-1, 3]])) \
        == IntPolynomial.one_minus_power(3, 3)
    assert zeta_positive_orders(TranslationSubgroup(3, [[3, 0], [0, 3]])) \
        == IntPolynomial.one_minus_power(3, 9)


def test_zeta_roots_on_unit_circle():
    # via the orders factorization: the roots are exactly roots of unity,
    # so every root of each factor has modulus 1 and annihilates the factor
    import cmath

    gam = TranslationSubgroup(3, [[3, 0], [0, 6]])
    z = zeta_positive_det(build_graph(gam))
    product = IntPolynomial.one()
    for m in direction_orders(gam):
        for k in range(m):
            root = cmath.exp(2j * cmath.pi * k / m)
            assert abs(abs(root) - 1.0) < 1e-8
            assert abs(1 - root ** m) < 1e-8
        product = product * IntPolynomial.one_minus_power(m, gam.index // m)
    assert product == z  # the factorization really is the determinant


def test_lfunction_examples():
    assert lfunction(TranslationSubgroup(2, [[2]])) \
        == IntPolynomial.one_minus_power(2, 2)
    poly, dev = lfunction_with_deviation(TranslationSubgroup(3, [[1, 0], [-1, 3]]))
    assert poly == IntPolynomial.one_minus_power(3, 3)
    assert dev < 1e-20
    with pytest.raises(ValueError):
        lfunction(TranslationSubgroup(2, [[2]]), tolerance=0)
    # an unreachable tolerance must be reported, not silently rounded over
    with pytest.raises(ToleranceError):
        lfunction(TranslationSubgroup(3, [[3, 0], [0, 6]]), tolerance=1e-80)


def test_ihara_bass_examples():
    g2 = build_graph(TranslationSubgroup(2, [[6]]))
    num, chi = ihara_bass(g2)
    assert chi == 0
    gc4 = build_graph(TranslationSubgroup(2, [[4]]))
    num4, chi4 = ihara_bass(gc4)
    assert chi4 == 0
    assert num4 == IntPolynomial.one_minus_power(4, 2)
    g3 = build_graph(TranslationSubgroup(3, [[1, 0], [-1, 3]]))
    _, chi3 = ihara_bass(g3)
    assert chi3 == 3 * (2 - 4) == -6


def test_positive_geodesic_enumeration():
    g = build_graph(TranslationSubgroup(2, [[2]]))
    assert enumerate_positive_geodesics(g, 0) == []
    classes = enumerate_positive_geodesics(g, 4)
    assert [(c.direction, c.length) for c in classes] == [(1, 2), (2, 2)]

    g3 = build_graph(TranslationSubgroup(3, [[1, 0], [-1, 3]]))
    classes3 = enumerate_positive_geodesics(g3, 12)
    assert len(classes3) == 3
    assert all(c.length == 3 and c.primitive_length == 3 for c in classes3)

    # counts per direction equal N / m_i
    gam = TranslationSubgroup(3, [[3, 0], [0, 6]])
    g18 = build_graph(gam)
    classes18 = enumerate_positive_geodesics(g18, 18)
    orders = direction_orders(gam)
    for i, m in enumerate(orders, start=1):
        count = sum(1 for c in classes18 if c.direction == i)
        assert count == 18 // m


def test_euler_product_truncation_examples():
    assert euler_product_truncation([], 5) == IntPolynomial.one()
    g = build_graph(TranslationSubgroup(2, [[2]]))
    classes = enumerate_positive_geodesics(g, 4)
    assert euler_product_truncation(classes, 4) == IntPolynomial([1, 0, -2, 0, 1])
    g3 = build_graph(TranslationSubgroup(3, [[1, 0], [-1, 3]]))
    classes3 = enumerate_positive_geodesics(g3, 9)
    assert euler_product_truncation(classes3, 9) \
        == IntPolynomial.one_minus_power(3, 3).truncate(9)


def test_backtrackless_cycles_c4():
    g = build_graph(TranslationSubgroup(2, [[4]]))
    classes = enumerate_backtrackless_cycles(g, 8)
    assert [c.length for c in classes] == [4, 4]  # the two orientations
    num, chi = ihara_bass(g)
    assert backtrackless_euler_truncation(classes, 8) \
        == ihara_zeta_series(num, chi, 8)


def test_backtrackless_below_girth_is_empty():
    g = build_graph(TranslationSubgroup(2, [[6]]))
    assert enumerate_backtrackless_cycles(g, 5) == []


def test_backtrackless_rejects_multigraph():
    g = build_graph(TranslationSubgroup(2, [[2]]))
    with pytest.raises(MultigraphError):
        enumerate_backtrackless_cycles(g, 4)


def test_backtrackless_counts_match_hashimoto_traces():
    # tr(B^L) = sum_{d | L} d * (number of primitive classes of length d)
    gam = TranslationSubgroup(3, [[3, 0], [0, 3]])
    g = build_graph(gam)
    classes = enumerate_backtrackless_cycles(g, 6)
    counts = {}
    for c in classes:
        counts[c.length] = counts.get(c.length, 0) + 1
    a = g.adjacency()
    size = g.num_vertices
    edges = [(v, w) for v in range(size) for w in range(size) if a[w, v]]
    eidx = {e: i for i, e in enumerate(edges)}
    b = np.zeros((len(edges), len(edges)), dtype=np.int64)
    for (v, w), i in eidx.items():
        for (x, y), j in eidx.items():
            if x == w and y != v:
                b[j, i] = 1
    power = np.eye(len(edges), dtype=np.int64)
    for ell in range(1, 7):
        power = power @ b
        expected = sum(d * counts.get(d, 0) for d in range(1, ell + 1)
                       if ell % d == 0)
        assert int(np.trace(power)) == expected


def test_verify_theorems_examples():
    for gam in [TranslationSubgroup(2, [[2]]),
                TranslationSubgroup(3, [[1, 0], [-1, 3]]),
                TranslationSubgroup(3, [[3, 0], [0, 3]])]:
        report = verify_theorems(gam, max_deg=12)
        assert report.all_pass
        obj = report.to_json_obj()
        json.dumps(obj)
        assert obj["verdicts"]["det_equals_orders"]


def test_verify_theorems_detects_perturbation():
    gam = TranslationSubgroup(2, [[4]])
    g = perturb_adjacency(build_graph(gam), 1, 0, 1, 1)
    report = verify_theorems(gam, max_deg=8, graph=g)
    assert not report.det_equals_orders
    assert not report.det_equals_lfunction
    assert not report.det_matches_euler
