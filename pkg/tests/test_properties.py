import random
from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from toric_residue.cayley import flag_bijection_check
from toric_residue.chambers import basis_variant, enumerate_chambers, in_polar_cone, polar_cone_lattice_points
from toric_residue.lattice import gale_dual, generates_lattice, hermite_normal_form, unimodular_transform
from toric_residue.linalg import det, matmul, transpose
from toric_residue.residues import iterated_residue, jk_residue, section
from toric_residue.critical import exact_log_jacobian_det
from toric_residue.toric import g_polynomial

from generators import (
    c_partitioned_instance,
    distinct_regular_points,
    random_homogeneous,
    random_projective_A,
    null_section,
    random_section,
)
from oracles import brute_polar_points

F1 = [(0, 1), (1, 1), (0, 1), (1, 0)]
CONFIGS = [F1, [(1, 0), (0, 1), (1, 1)], [(1, 0), (1, 0), (-1, 1), (-1, 1)], [(1,), (1,), (1,)]]
FAST = settings(max_examples=25, deadline=None)

small_matrix = st.integers(1, 4).flatmap(
    lambda d: st.integers(d + 1, 8).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=n, max_size=n)
    )
)


@FAST
@given(small_matrix)
def test_hnf_is_unimodular_reduction(M):
    H, U = hermite_normal_form(M)
    assert matmul(U, M) == H
    assert abs(det(U)) == 1


@FAST
@given(small_matrix)
def test_gale_round_trip(B):
    d = len(B[0])
    assume(generates_lattice(B, d))
    seq = gale_dual(B)
    assert seq.r + seq.d == seq.n
    assert matmul(seq.projection_matrix, seq.inclusion_matrix) == [[0] * seq.r for _ in range(seq.d)]
    assert generates_lattice([list(a) for a in seq.A.vectors], seq.r)
    back = gale_dual([list(a) for a in seq.A.vectors])
    T = unimodular_transform([list(b) for b in back.A.vectors], B)
    assert T is not None and abs(det(T)) == 1
    assert matmul([list(b) for b in back.A.vectors], transpose(T)) == B


@FAST
@given(st.sampled_from([0, 1]), st.integers(0, 8), st.integers(1, 6), st.integers(1, 6))
def test_polar_points_match_brute_force(which, D, p, q):
    c = enumerate_chambers(F1)[which]
    xi_ref = [Fraction(0), Fraction(0)]
    for ray, w in zip(c.rays, (p, q)):
        xi_ref = [x + w * y for x, y in zip(xi_ref, ray)]
    got = set(polar_cone_lattice_points(c, xi_ref, D))
    assert got == brute_polar_points(c.rays, xi_ref, D, box=D + 2)
    assert all(in_polar_cone(c, lam) for lam in got)


@FAST
@given(st.integers(0, 10**6), st.sampled_from(CONFIGS))
def test_jk_independent_of_xi_and_basis(seed, A):
    rng = random.Random(seed)
    phi = random_section(rng, A)
    for c in enumerate_chambers(A):
        pts = distinct_regular_points(A, c, 2, rng)
        base = jk_residue(phi, c, A, xi=pts[0])
        assert jk_residue(phi, c, A, xi=pts[1]) == base
        assert jk_residue(phi, c, A, xi=pts[0], basis_seed=seed % 7) == base


@FAST
@given(st.integers(0, 10**6), st.integers(-5, 5), st.integers(-5, 5))
def test_jk_linearity(seed, a, b):
    rng = random.Random(seed)
    exps = [rng.randint(0, 2) for _ in F1]
    exps[0] += 2
    deg = sum(exps) - 2
    p, q = random_homogeneous(rng, 2, deg), random_homogeneous(rng, 2, deg)
    c = enumerate_chambers(F1)[seed % 2]
    lhs = jk_residue(section(F1, p.scale(a) + q.scale(b), exps), c)
    rhs = a * jk_residue(section(F1, p, exps), c) + b * jk_residue(section(F1, q, exps), c)
    assert lhs == rhs


@FAST
@given(st.integers(0, 10**6), st.sampled_from(CONFIGS), st.sampled_from([-1, 1, 2]))
def test_wrong_degree_vanishes(seed, A, shift):
    rng = random.Random(seed)
    phi = random_section(rng, A, degree_shift=shift)
    for c in enumerate_chambers(A):
        assert jk_residue(phi, c, A) == 0


@FAST
@given(st.integers(0, 10**6), st.sampled_from(CONFIGS[:3]))
def test_outside_polar_cone_vanishes(seed, A):
    rng = random.Random(seed)
    r, n = len(A[0]), len(A)
    kappa = [sum(a[k] for a in A) for k in range(r)]
    for c in enumerate_chambers(A):
        while True:
            lam = [rng.randint(-4, 4) for _ in range(r)]
            deg = sum(x * y for x, y in zip(kappa, lam)) + n - r
            if not in_polar_cone(c, lam) and deg >= 0:
                break
        P = random_homogeneous(rng, r, deg)
        assert jk_residue(null_section(A, P, lam), c, A) == 0


@FAST
@given(st.integers(0, 10**6))
def test_flag_bijection_random(seed):
    rng = random.Random(seed)
    prob = c_partitioned_instance(rng, max_n=5)
    xi = distinct_regular_points(prob.under.A.vectors, prob.chamber, 1, rng)[0]
    rep = flag_bijection_check(prob, xi)
    assert rep["bijection"] and rep["regularity_transfer"]


@FAST
@given(st.integers(0, 10**6))
def test_jacobian_identity_random_config(seed):
    rng = random.Random(seed)
    seq = random_projective_A(rng, rng.randint(3, 5), 2)
    G = g_polynomial(seq)
    u = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(2)]
    vals = [sum(a * x for a, x in zip(al, u)) for al in seq.A.vectors]
    assume(all(v != 0 for v in vals))
    prod = Fraction(1)
    for v in vals:
        prod *= v
    assert exact_log_jacobian_det(seq.A.vectors, u) * prod == G.evaluate(u)


@FAST
@given(st.integers(0, 10**6))
def test_iterated_residue_basis_variants(seed):
    from toric_residue.chambers import enumerate_flags

    rng = random.Random(seed)
    phi = random_section(rng, F1)
    for F in enumerate_flags(F1):
        assert iterated_residue(phi, basis_variant(F, seed)) == iterated_residue(phi, F)
