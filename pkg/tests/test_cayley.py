from fractions import Fraction

import pytest

from toric_residue.cayley import (
    build_cayley,
    check_c_partition,
    check_pibar,
    flag_bijection_check,
    m_zero_check,
    signed_a_sum,
    validate_partition,
    verify_mtrmc,
    verify_trmc,
)
from toric_residue.chambers import enumerate_chambers, flags_for_xi, PLUS
from toric_residue.errors import InvalidPartition
from toric_residue.lattice import sequence_from_A
from toric_residue.poly import Poly
from toric_residue.series import kappa_sign, mp_coefficient


def x(n, k):
    return Poly.variable(n, k)


def test_build_mix(mix):
    assert mix.augmented.A.vectors == ((1, 0), (1, 0), (-1, 1), (-1, 1))
    assert mix.augmented.B.vectors == ((1, 1), (-1, -1), (0, 1), (0, -1))
    assert mix.theta == ((1,), (1,))
    assert mix.cone.s == 2 and mix.l == 2


def test_build_p1cay(p1cay):
    assert p1cay.augmented.A.vectors == ((1, 0), (1, 0), (-2, 1))
    assert p1cay.cone.gamma == (0, 1) and p1cay.cone.s == 1
    kappa = [sum(a[k] for a in p1cay.augmented.A.vectors) for k in range(2)]
    assert kappa == [0, 1]


def test_validate_partition():
    assert validate_partition(3, [[2, 0], [1]]) == ((0, 2), (1,))
    for bad in ([[0], [0, 1, 2]], [[0, 1]], [[0, 1, 2], []], [[0, 1, 3], [2]]):
        with pytest.raises(InvalidPartition):
            validate_partition(3, bad)


def test_c_partition():
    A = [(1, 0), (0, 1)]
    (c,) = enumerate_chambers(A)
    assert check_c_partition(A, [[0, 1]], c)
    assert check_c_partition(A, [[0], [1]], c)
    F1 = sequence_from_A([[0, 1], [1, 1], [0, 1], [1, 0]])
    c12 = next(c for c in enumerate_chambers(F1.A.vectors) if c.contains([1, 2]))
    c21 = next(c for c in enumerate_chambers(F1.A.vectors) if c.contains([2, 1]))
    # theta = (1, 2) and (1, 1)
    assert check_c_partition(F1, [[0, 1], [2, 3]], c12)
    assert not check_c_partition(F1, [[0, 1], [2, 3]], c21)
    # theta = (0, 1) lies only on the boundary of c12
    assert check_c_partition(F1, [[0], [1, 2, 3]], c12)
    assert not check_c_partition(F1, [[0], [1, 2, 3]], c21)


def test_no_c_partition_chamber():
    F1 = sequence_from_A([[0, 1], [1, 1], [0, 1], [1, 0]])
    prob = build_cayley(F1, [[3], [0, 1, 2]])
    # theta = (1, 0) and (1, 3) share no chamber closure
    assert prob.chamber is None
    with pytest.raises(InvalidPartition):
        verify_mtrmc(prob, x(4, 2) * x(4, 3), [0.05, 0.04, 0.06, 0.03])


@pytest.mark.parametrize("partition", [[[0, 1, 2, 3]], [[0, 3], [1, 2]], [[0, 1], [2, 3]]])
def test_pibar_f1(fix_f1, f1_chamber, partition):
    if not check_c_partition(fix_f1, partition, f1_chamber):
        pytest.skip("not a c-partition")
    rep = check_pibar(fix_f1, partition, f1_chamber)
    assert rep["all_equal"]


def test_pibar_p1(under_p1):
    (c,) = enumerate_chambers(under_p1.A.vectors)
    assert check_pibar(under_p1, [[0, 1]], c)["all_equal"]
    assert check_pibar(under_p1, [[0], [1]], c)["all_equal"]


def test_flag_bijection_fixtures(p1cay, mix):
    for prob in (p1cay, mix):
        rep = flag_bijection_check(prob, [1])
        assert rep["bijection"] and rep["regularity_transfer"]
        assert [case["augmented_flags"] for case in rep["cases"]] == [1, 1, 1]


def test_flag_bijection_f1(fix_f1, f1_chamber):
    prob = build_cayley(fix_f1, [[0, 3], [1, 2]], f1_chamber)
    for xi in ([1, 2], [2, 5], [1, 3]):
        rep = flag_bijection_check(prob, xi)
        assert rep["bijection"] and rep["regularity_transfer"], rep


def test_m_selection_fixtures(p1cay, mix):
    P = x(2, 0)
    for prob, lam, expect in ((p1cay, [2], 16), (mix, [1], 1)):
        (fc,) = flags_for_xi(prob.under.A.vectors, [1], PLUS)
        rep = m_zero_check(prob, fc.flag, P, lam)
        assert rep["ok"]
        assert rep["at_zero"] == expect
        assert [Fraction(r["series_route"]) == 0 for r in rep["values"]] == [True, True, False, True, True]


def test_signed_sum_matches_series_coefficient(fix_f1, f1_chamber):
    prob = build_cayley(fix_f1, [[0, 3], [1, 2]], f1_chamber)
    P = x(4, 2) * x(4, 3)
    for lam in ([1, 1], [1, 2], [0, 2], [2, 3]):
        lhs = signed_a_sum(prob, [1, 2], P, lam)
        rhs = mp_coefficient(fix_f1, f1_chamber, prob.theta, P, lam)
        assert lhs == kappa_sign(prob.theta, lam) * rhs


def test_verify_p1cay(p1cay):
    rep = verify_mtrmc(p1cay, x(2, 0), [0.25, 0.2])
    assert rep["verdict"] == "PASS"
    assert abs(rep["residue_value"][0] - 1.25) < 1e-9
    diag = rep["diagnostics"]
    assert diag["num_critical_points"] == 2
    assert diag["e_gamma_max_deviation"] < 1e-9
    # 1.5 z is still convergent but D = 20 leaves a truncation error near 1e-7
    assert [row["abs_gap"] < 1e-8 for row in diag["ray"]] == [True, True, False]
    assert diag["ray"][2]["abs_gap"] < 1e-5


def test_verify_mix(mix):
    rep = verify_mtrmc(mix, x(2, 0), [0.3, 0.2])
    assert rep["verdict"] == "PASS"
    assert abs(rep["residue_value"][0] - 1 / 0.94) < 1e-9
    assert rep["diagnostics"]["num_critical_points"] == 4
    assert rep["diagnostics"]["genericity"]["conditions"]["cond2"] == "PASS"


def test_verify_odd_kappa_sign():
    # A = (1, 1, 1): <kappa, lam> = 3 lam is odd for odd lam
    under = sequence_from_A([[1], [1], [1]])
    P = x(3, 0) * x(3, 1)
    z = [0.1, 0.2, 0.15]
    rep = verify_trmc(under, P, z, D=15)
    Z = z[0] * z[1] * z[2]
    assert rep["verdict"] == "PASS"
    assert abs(rep["residue_value"][0] - 1 / (1 + 27 * Z)) < 1e-9


def test_verify_f1(fix_f1, f1_chamber):
    z = [0.05, 0.04, 0.06, 0.03]
    rep = verify_trmc(fix_f1, x(4, 2) * x(4, 3), z, chamber=f1_chamber, D=12)
    assert rep["verdict"] == "PASS", rep["failures"]
    assert rep["diagnostics"]["num_critical_points"] == 4
    rep = verify_mtrmc(build_cayley(fix_f1, [[0, 3], [1, 2]], f1_chamber), x(4, 2) * x(4, 3), z, D=12)
    assert rep["verdict"] == "PASS", rep["failures"]


def test_verify_diverges(p1cay):
    # 4 z1 z2 = 1.2 lies outside the convergence domain
    rep = verify_mtrmc(p1cay, x(2, 0), [0.6, 0.5], D=30)
    assert rep["verdict"] == "FAIL"
    assert rep["diagnostics"]["divergence"]["diverging"]
    assert abs(rep["residue_value"][0] + 5) < 1e-9


def test_verify_rejects_wrong_degree(p1cay):
    with pytest.raises(ValueError):
        verify_mtrmc(p1cay, x(2, 0) * x(2, 1), [0.25, 0.2])
