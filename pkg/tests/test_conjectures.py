import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qrperm import arith, conjectures as cj
from qrperm.classfield import class_data
from conftest import brute_primes, brute_inversions


def parity_of(v):
    return v.lhs % 2 if isinstance(v.lhs, int) else v.lhs


def by_check(verdicts):
    return {v.check: v for v in verdicts}


def frac_det(matrix):
    """Determinant by Gaussian elimination over the rationals."""
    M = [[Fraction(x) for x in row] for row in matrix]
    n, det = len(M), Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            for j in range(k, n):
                M[i][j] -= f * M[k][j]
    return int(det)


def brute_pairs_over(values, threshold):
    return sum(1 for i in range(len(values)) for j in range(i + 1, len(values))
               if values[i] + values[j] > threshold)


# ---------------------------------------------------------------- helpers

def test_quarter_count_example():
    assert cj.quarter_count(13, 1) == 2  # k = 1, 3


@given(st.lists(st.integers(0, 60), max_size=40), st.integers(0, 100))
def test_pairs_sum_exceeding_matches_loop(values, threshold):
    assert cj.pairs_sum_exceeding(values, threshold) == brute_pairs_over(values, threshold)


def test_half_residue_list_elevens():
    k = np.arange(1, 6)
    assert cj.half_residue_list(k * k, 11).tolist() == [1, 4, 2, 5, 3]


def test_power_of_two_matches_nonresidue_count():
    for p in brute_primes(3, 3000):
        if p % 8 == 1:
            assert cj.remark_6_4(p).passed
    with pytest.raises(ValueError):
        cj.remark_6_4(13)


# ---------------------------------------------------------------- parity conjectures

def test_half_residue_inversion_parity_at_11():
    vs = by_check(cj.check_parity_conjectures(11, 1, "6.2"))
    v = vs["eq6.2"]
    assert brute_inversions([1, 4, 2, 5, 3]) % 2 == 1
    assert v.lhs == 1 and v.rhs == 1 and v.passed and v.witness is None


def test_s_plus_t_parity_at_13():
    v = cj.check_parity_conjectures(13, 1, "6.1")[0]
    n = 6
    sq = [k * k % 13 for k in range(1, n + 1)]
    s = brute_inversions(sq)
    t = sum(1 for j in range(1, n + 1) for k in range(j + 1, n + 1) if (k * k - j * j) % 13 > 13 / 2)
    assert (s, t) == (3, 9)
    assert v.lhs == (s + t) % 2 and v.rhs == 0
    assert v.passed


def test_parity_checks_reject_bad_primes():
    with pytest.raises(ValueError):
        cj.check_parity_conjectures(7, 1, "6.1")
    with pytest.raises(ValueError):
        cj.check_parity_conjectures(9, 1, "6.2")
    with pytest.raises(ValueError):
        cj.check_parity_conjectures(11, 22, "6.2")


def test_pronic_inversion_sign_at_7():
    vs = by_check(cj.check_parity_conjectures(7, 1, "6.4"))
    U = [k * (k + 1) % 7 for k in range(1, 4)]
    assert vs["eq6.6"].lhs == (-1) ** brute_inversions(U)
    assert vs["eq6.6"].rhs == -1 and vs["eq6.6"].passed


def test_parity_conjectures_small_scan_against_brute_lists():
    for p in brute_primes(5, 400):
        n = (p - 1) // 2
        a = arith.smallest_nonresidue(p)
        R = [min(a * k * k % p, p - a * k * k % p) for k in range(1, n + 1)]
        v62 = by_check(cj.check_parity_conjectures(p, a, "6.2"))
        assert v62["eq6.2"].lhs == brute_inversions(R) % 2
        assert v62["eq6.3"].lhs == (-1) ** brute_pairs_over(R, (p - 1) // 2)
        assert all(v.passed for v in v62.values())
        T = [k * (k + 1) // 2 % p for k in range(1, n + 1)]
        v63 = by_check(cj.check_parity_conjectures(p, 1, "6.3"))
        assert v63["eq6.5"].lhs == (-1) ** brute_pairs_over(T, p)
        assert all(v.passed for v in v63.values())
        assert all(v.passed for v in cj.check_parity_conjectures(p, 1, "6.4"))
        if p % 4 == 1:
            assert all(v.passed for v in cj.check_parity_conjectures(p, 1, "6.1"))


# ---------------------------------------------------------------- cubes and powers

def test_cube_count_examples():
    v = cj.check_conj_6_5(5)
    assert v.lhs == 0 and v.passed
    assert cj.check_conj_6_5(11).passed
    v9 = cj.check_conj_6_5(11, "inversions_6_9")
    cubes = [k ** 3 % 11 for k in range(1, 11)]
    assert v9.lhs == brute_inversions(cubes) % 2 == 0 and v9.passed


def test_cube_ratio_rows_are_report_only():
    v = cj.check_conj_6_5(101, "ratio_6_10", 3)
    assert v.passed is None and v.witness is None
    count = sum(1 for k in range(1, 51) if pow(k, 3, 101) > 101 / 2)
    assert v.lhs == count
    with pytest.raises(ValueError):
        cj.check_conj_6_5(7)
    with pytest.raises(ValueError):
        cj.check_conj_6_5(11, "bogus")


def test_cube_count_implies_cube_parity():
    for p in brute_primes(5, 2000):
        if p % 6 == 5:
            v8, v9, imp = cj.check_conj_6_5_all(p)
            assert imp.passed
            assert v8.passed and v9.passed


def test_fourth_and_eighth_power_examples():
    v = cj.check_conj_6_6_powers(7, 4)
    assert v.rhs == 0 and v.passed
    v = cj.check_conj_6_6_powers(5, 8)
    assert v.rhs == 0 and v.passed
    for e in (4, 8):
        v = cj.check_conj_6_6_powers(3, e)
        assert v.lhs == 0 and v.passed
    with pytest.raises(ValueError):
        cj.check_conj_6_6_powers(7, 6)


def test_power_lists_against_brute():
    for p in brute_primes(3, 300):
        for e in (4, 8):
            v = cj.check_conj_6_6_powers(p, e)
            assert v.lhs == brute_inversions([pow(k, e, p) for k in range(1, (p + 1) // 2)]) % 2
            assert v.passed, (p, e)


# ---------------------------------------------------------------- 6.7

def complex_root_pair_product(p, a):
    z = cmath.exp(2j * math.pi / p)
    n = (p - 1) // 2
    prod = 1
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            prod *= z ** (a * j * j % p) + z ** (a * k * k % p)
    return prod


def test_root_pair_product_against_complex_loop():
    for p in (5, 13, 17, 29):
        for a in (1, 2, 3):
            direct = complex_root_pair_product(p, a)
            assert abs(direct.imag) < 1e-7 * max(1.0, abs(direct))
            sl = cj.root_pair_sum_product(p, a)
            assert sl.sign == (1 if direct.real > 0 else -1)
            assert math.isclose(sl.log_mag, math.log(abs(direct.real)), rel_tol=1e-9, abs_tol=1e-9)


def test_root_pair_product_at_13():
    v = cj.check_conj_6_7(13, 1)
    data = class_data(13)
    assert v.rhs.sign == 1
    assert math.isclose(v.rhs.log_mag, -data.h_plus * data.unit.log(), rel_tol=1e-12)
    assert v.passed


def test_root_pair_product_at_17_is_unit_modulus():
    v = cj.check_conj_6_7(17, 1)
    assert v.rhs.sign == 1 and v.rhs.log_mag == 0.0 and v.passed


def test_root_pair_product_symbol_flip_at_5():
    v1, v2 = cj.check_conj_6_7(5, 1), cj.check_conj_6_7(5, 2)
    assert v1.passed and v2.passed
    assert v2.rhs.sign == -1 and math.isclose(v2.rhs.log_mag, -v1.rhs.log_mag)
    with pytest.raises(ValueError):
        cj.check_conj_6_7(7)


# ---------------------------------------------------------------- determinants

@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_rational_elimination(matrix):
    det = cj.bareiss_det(matrix)
    assert det == frac_det(matrix)
    for q in (1000003, (1 << 61) - 1):
        assert det % q == cj.det_mod(matrix, q)


def test_bareiss_singular_and_swaps():
    assert cj.bareiss_det([[0, 1], [1, 0]]) == -1
    assert cj.bareiss_det([[1, 2], [2, 4]]) == 0
    assert cj.bareiss_det([]) == 1


def test_oracle_primes_are_deterministic_62_bit():
    qs = cj.oracle_primes(3, seed=11)
    assert qs == cj.oracle_primes(3, seed=11)
    assert all((1 << 61) <= q < (1 << 62) and arith.is_prime(q) for q in qs)


def test_determinants_at_9_and_11():
    v14, v15 = cj.check_conj_6_8(9)
    assert v15.lhs is True and v15.passed
    assert v14.lhs is False and v14.passed
    assert all(v.passed and v.lhs for v in cj.check_conj_6_8(11))


def test_floor_matrix_at_7_is_a_counterexample():
    # the floor matrix for n = 7 is [[0,0,1],[0,2,5],[1,5,11]], determinant -2
    _, fmat = cj.conj_6_8_matrices(7)
    assert fmat == [[0, 0, 1], [0, 2, 5], [1, 5, 11]]
    assert frac_det(fmat) == -2
    v14, v15 = cj.check_conj_6_8(7)
    assert v14.passed
    assert v15.passed is False
    assert v15.witness["det"] == "-2" and v15.witness["params"] == {"n": 7}
    assert v15.items[0].passed  # exact and modular determinants agree


def test_determinant_check_rejects_even():
    with pytest.raises(ValueError):
        cj.check_conj_6_8(8)


# ---------------------------------------------------------------- dispatch

def test_applicable():
    assert cj.applicable("6.8", 9) and not cj.applicable("6.8", 10)
    assert cj.applicable("6.1", 13) and not cj.applicable("6.1", 11)
    assert not cj.applicable("6.2", 15)
    assert cj.applicable("6.5", 11) and not cj.applicable("6.5", 13)


def test_conjecture_checks_dispatch():
    assert [v.check for v in cj.conjecture_checks("6.6", 7)] == ["eq6.11", "eq6.12"]
    assert len(cj.conjecture_checks("6.5", 13, ratio=True)) == len(cj.RATIO_EXPONENTS)
    with pytest.raises(ValueError):
        cj.conjecture_checks("6.9", 7)


def test_conj_verdict_witness_invariant():
    for cid in ("6.2", "6.4", "6.6"):
        for v in cj.conjecture_checks(cid, 23):
            assert (v.witness is None) == (v.passed is not False)
            assert v.to_json()["conjecture"] == cid
