import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy as sp

from toric_residue.chambers import enumerate_chambers
from toric_residue.critical import exact_log_jacobian_det
from toric_residue.errors import EmptyPolytope
from toric_residue.lattice import sequence_from_A
from toric_residue.linalg import det
from toric_residue.poly import Poly
from toric_residue.toric import (
    fan_of_chamber,
    g_polynomial,
    intersection_number,
    minkowski_check,
    partition_polytope,
    vol_B,
)


def test_fans(fix_p2, fix_p1, fix_f1, f1_chamber):
    c = enumerate_chambers(fix_p2.A.vectors)[0]
    assert set(fan_of_chamber(fix_p2, c).maximal_cones) == {(0, 1), (0, 2), (1, 2)}
    c = enumerate_chambers(fix_p1.A.vectors)[0]
    assert set(fan_of_chamber(fix_p1, c).maximal_cones) == {(0,), (1,)}
    assert len(fan_of_chamber(fix_f1, f1_chamber).maximal_cones) == 4


def test_fan_completeness(fix_f1, f1_chamber):
    cones = fan_of_chamber(fix_f1, f1_chamber).maximal_cones
    B = fix_f1.B.vectors
    rng = random.Random(0)
    for _ in range(50):
        v = [Fraction(rng.randint(-20, 20)), Fraction(rng.randint(-20, 20))]
        covered = False
        for nu in cones:
            M = sp.Matrix([[B[j][0] for j in nu], [B[j][1] for j in nu]])
            coeffs = M.solve(sp.Matrix([sp.Rational(x) for x in v]))
            if all(c >= 0 for c in coeffs):
                covered = True
        assert covered


def test_intersection_numbers(fix_p2, fix_f1, f1_chamber):
    c = enumerate_chambers(fix_p2.A.vectors)[0]
    assert intersection_number(fix_p2, c, Poly(3, {(1, 1, 0): 1})) == 1
    assert intersection_number(fix_f1, f1_chamber, Poly(4, {(0, 0, 1, 1): 1})) == 1
    assert intersection_number(fix_f1, f1_chamber, Poly(4, {(0, 1, 0, 1): 1})) == 0
    assert intersection_number(fix_f1, f1_chamber, Poly(4, {(1, 0, 1, 0): 1})) == 0


def test_g_polynomial_examples(fix_p2, fix_p1, p1cay):
    u = Poly.variable(1, 0)
    assert g_polynomial(fix_p2) == u * u * 3
    assert g_polynomial(fix_p1) == u * 2
    assert g_polynomial(p1cay.augmented) == Poly.variable(2, 0) * 2


def test_vol_B(fix_p2):
    assert all(vol_B(fix_p2, nu) == 1 for nu in combinations(range(3), 2))
    seq = sequence_from_A([[1, 0], [1, 0], [0, 1], [0, 1]])
    assert vol_B(seq, (0, 1)) == 0


def test_vol_B_matches_complementary_alpha(fix_f1):
    A, n = fix_f1.A.vectors, fix_f1.n
    for nu in combinations(range(n), fix_f1.d):
        comp = [list(A[k]) for k in range(n) if k not in nu]
        assert vol_B(fix_f1, nu) == abs(det(comp))


def test_fan_volume_equals_polytope_volume(fix_p2, fix_f1, f1_chamber):
    for seq, c in ((fix_p2, enumerate_chambers(fix_p2.A.vectors)[0]), (fix_f1, f1_chamber)):
        cones = fan_of_chamber(seq, c).maximal_cones
        total = sum(vol_B(seq, nu) for nu in cones)
        pts = [sp.Point(*b) for b in seq.B.vectors]
        area = sp.convex_hull(*pts).area
        assert total == 2 * area


@pytest.mark.parametrize("name", ["p2", "f1", "p1cay", "mix"])
def test_jacobian_identity_exact(name, fix_p2, fix_f1, p1cay, mix):
    seq = {"p2": fix_p2, "f1": fix_f1, "p1cay": p1cay.augmented, "mix": mix.augmented}[name]
    G = g_polynomial(seq)
    rng = random.Random(1)
    A = seq.A.vectors
    for _ in range(20):
        u = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(seq.r)]
        vals = [sum(a * x for a, x in zip(al, u)) for al in A]
        if any(v == 0 for v in vals):
            continue
        prod = Fraction(1)
        for v in vals:
            prod *= v
        assert exact_log_jacobian_det(A, u) * prod == G.evaluate(u)


def test_partition_polytopes(fix_p2, fix_p1):
    P = partition_polytope(fix_p2, [3])
    assert set(P.vertices) == {(3, 0, 0), (0, 3, 0), (0, 0, 3)}
    P = partition_polytope(fix_p1, [1])
    assert set(P.vertices) == {(1, 0), (0, 1)}
    with pytest.raises(EmptyPolytope):
        partition_polytope(fix_p1, [-1])


def test_minkowski():
    ok, c = minkowski_check([(1,), (1,)], [[1], [1]])
    assert ok and c.contains([1])
    assert minkowski_check([(1, 0), (0, 1), (1, 1)], [[1, 0], [0, 1]]) == (False, None)
    ok, _ = minkowski_check([(0, 1), (1, 1), (0, 1), (1, 0)], [[2, 3]])
    assert ok


def test_minkowski_vertex_sums():
    A = [(1,), (1,), (1,)]
    ok, _ = minkowski_check(A, [[1], [2]])
    assert ok
    whole = set(partition_polytope(A, [3]).vertices)
    sums = {tuple(a + b for a, b in zip(v, w)) for v in partition_polytope(A, [1]).vertices for w in partition_polytope(A, [2]).vertices}
    assert whole <= sums
