import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qrperm import arith, classfield, trigeval
from qrperm.trigeval import SignedLog, slog_product
from conftest import brute_primes

FUNCS = {"sin": math.sin, "cos": math.cos, "csc": lambda t: 1 / math.sin(t)}


def float_product(nums, den, kind):
    if kind in ("cot-difference", "cot-sum"):
        s = -1 if kind == "cot-difference" else 1
        return math.prod(1 / math.tan(math.pi * x / den) + s / math.tan(math.pi * y / den)
                         for x, y in nums)
    return math.prod(FUNCS[kind](math.pi * n / den) for n in nums)


def leaves(v):
    if v.items:
        for item in v.items:
            yield from leaves(item)
    else:
        yield v


def test_slog_examples():
    got = slog_product([1, 2], 4, "sin")
    assert got.sign == 1 and math.isclose(got.log_mag, math.log(math.sqrt(2) / 2), rel_tol=1e-14)
    assert slog_product([], 7, "sin") == SignedLog.one()
    assert slog_product([1], 2, "cos").sign == 0


def test_poles_raise():
    with pytest.raises(ZeroDivisionError):
        slog_product([0, 3], 3, "csc")
    with pytest.raises(ZeroDivisionError):
        slog_product([[1, 7]], 7, "cot-difference")
    with pytest.raises(ValueError):
        slog_product([1], 7, "tan")


@given(st.integers(3, 40), st.lists(st.integers(-200, 200), max_size=25),
       st.sampled_from(["sin", "cos", "csc"]))
def test_slog_matches_float_product(den, nums, kind):
    if kind == "csc":
        nums = [n for n in nums if n % den]
    expected = float_product(nums, den, kind)
    got = slog_product(nums, den, kind)
    if abs(expected) < 1e-12:
        # exact zero factors; the float product only gets near zero
        assert got.sign == 0 or abs(got.value()) < 1e-9
        return
    assert got.sign == (1 if expected > 0 else -1)
    assert math.isclose(got.log_mag, math.log(abs(expected)), rel_tol=1e-9, abs_tol=1e-9)


@given(st.integers(3, 40), st.lists(st.tuples(st.integers(1, 80), st.integers(1, 80)), max_size=15),
       st.sampled_from(["cot-difference", "cot-sum"]))
def test_cot_kinds_match_float_product(den, pairs, kind):
    pairs = [(x, y) for x, y in pairs if x % den and y % den]
    expected = float_product(pairs, den, kind)
    got = slog_product(pairs, den, kind)
    if abs(expected) < 1e-9:
        return
    assert got.sign == (1 if expected > 0 else -1)
    assert math.isclose(got.log_mag, math.log(abs(expected)), rel_tol=1e-8, abs_tol=1e-8)


@given(st.lists(st.integers(1, 600), min_size=1, max_size=80), st.randoms())
def test_product_is_order_invariant(nums, rnd):
    q = 601
    a = slog_product(nums, q, "sin")
    shuffled = list(nums)
    rnd.shuffle(shuffled)
    b = slog_product(shuffled, q, "sin")
    assert a.sign == b.sign and abs(a.log_mag - b.log_mag) <= 1e-12


@given(st.lists(st.integers(-500, 500), max_size=60), st.integers(3, 97))
def test_sign_equals_integer_count(nums, q):
    # sin(pi n / q) < 0 exactly when n mod 2q lies in (q, 2q)
    nums = [n for n in nums if n % q]
    negatives = sum(1 for n in nums if q < n % (2 * q) < 2 * q)
    assert slog_product(nums, q, "sin").sign == (-1) ** negatives


def test_signed_log_algebra():
    x, y = SignedLog.from_float(-2.0), SignedLog.from_float(8.0)
    assert math.isclose((x * y).value(), -16.0)
    assert math.isclose((y / x).value(), -4.0)
    assert (-x).sign == 1 and x.times_sign(0).sign == 0
    assert SignedLog.from_float(0.0) * y == SignedLog(0, -math.inf)
    with pytest.raises(ZeroDivisionError):
        y / SignedLog.from_float(0.0)
    with pytest.raises(ValueError):
        SignedLog(2, 0.0)


def test_tolerance_scales_with_factor_count():
    a, b = SignedLog(1, 100.0), SignedLog(1, 100.0 * (1 + 5e-9))
    assert not a.log_close(b, 1)
    assert a.log_close(b, 100)
    assert not a.close(-b, 100)


def test_square_sine_product_examples():
    assert trigeval.verify_cor_1_1(7, 1).passed
    v = trigeval.verify_cor_1_1(5, 1)
    assert v.passed
    # the sine product at p = 5 equals 2^-2 * sqrt5 / eps_5
    direct = 4 * math.prod(math.sin(math.pi * k * k / 5) for k in (1, 2))
    assert math.isclose(direct, math.sqrt(5) / ((1 + math.sqrt(5)) / 2), rel_tol=1e-12)
    assert trigeval.verify_cor_1_1(13, 2).passed


def test_difference_cosecant_product_examples():
    v11 = trigeval.verify_thm_1_4(11, 1)
    assert v11.passed
    direct = math.prod(1 / math.sin(math.pi * (k * k - j * j) / 11)
                       for j in range(1, 6) for k in range(j + 1, 6))
    assert math.isclose(direct, 2 ** 10 / 11, rel_tol=1e-10)
    direct7 = math.prod(1 / math.sin(math.pi * (k * k - j * j) / 7)
                        for j in range(1, 4) for k in range(j + 1, 4))
    assert direct7 < 0 and trigeval.verify_thm_1_4(7, 1).passed
    v13 = trigeval.verify_thm_1_4(13, 1)
    assert v13.passed
    mag = [leaf for leaf in leaves(v13) if leaf.check == "eq1.22-magnitude"]
    assert mag and mag[0].observed_sign in (-1, 1)


def test_difference_cosine_product_examples():
    assert trigeval.cor_1_2_count(7) % 2 == 0
    v = trigeval.verify_thm_1_5_and_cor_1_2(7, 2)
    assert v.passed
    assert trigeval.verify_thm_1_5_and_cor_1_2(11, 1).passed
    v17 = trigeval.verify_thm_1_5_and_cor_1_2(17, 1)
    assert v17.passed
    # (2/17) = 1: the product has magnitude one
    direct = math.prod(2 * math.cos(math.pi * (k * k - j * j) / 17)
                       for j in range(1, 9) for k in range(j + 1, 9))
    assert math.isclose(abs(direct), 1.0, rel_tol=1e-9)


def test_form_sine_product_examples():
    assert trigeval.verify_thm_1_6_part_i(11, 1).passed
    assert trigeval.corollary_1_3_count(11, 1) % 2 == 1
    assert trigeval.corollary_1_3_count(13, 1) % 2 == 0
    assert trigeval.verify_thm_1_6_part_i(13, 1).passed


def test_cos_product_closed_form_to_499():
    for p in brute_primes(3, 499):
        for a in (1, arith.smallest_nonresidue(p)):
            n = (p - 1) // 2
            J, K = np.triu_indices(n, k=1)
            nums = a * ((J + 1) ** 2 + (K + 1) ** 2)
            got = slog_product(nums, p, "cos")
            sign = (-1) ** (a * ((p + 1) // 2) * ((p - 1) // 4))
            expected = SignedLog(sign, -((p - 1) // 2) * ((p - 3) // 4) * math.log(2))
            assert got.close(expected, J.size)


def brute_m(p, a, b, c):
    return sum(q for j in range(1, p) for k in range(j + 1, p)
               for q in [a * j * j + b * j * k + c * k * k] if q % p == 0)


def test_m_vanishes_only_for_nonsquare_discriminant():
    # (1, 1, 1) at p = 7: -3 = 4 is a square mod 7, so zero terms do occur
    assert arith.legendre(-3, 7) == 1
    assert trigeval.quadform_m(7, 1, 1, 1) == brute_m(7, 1, 1, 1) == 259
    assert trigeval.verify_thm_1_6_part_ii(7, 1, 1, 1).passed
    # (1, 0, 1) at p = 7: -4 is a non-square, no zero terms
    assert arith.legendre(-4, 7) == -1
    v = trigeval.verify_thm_1_6_part_ii(7, 1, 0, 1)
    assert v.passed and v.lhs["m"] == 0 == brute_m(7, 1, 0, 1)


def test_m_matches_brute_sum():
    for p in (5, 7, 11, 13):
        for a, b, c in itertools.product(range(-2, 3), repeat=3):
            assert trigeval.quadform_m(p, a, b, c) == brute_m(p, a, b, c)


def test_part_ii_sign_at_three_is_reported_not_asserted():
    # at p = 3 the class-number sign term of the product does not apply, and the
    # observed sign is the opposite of the printed one on every grid point
    flipped = 0
    for a, b, c in itertools.product(range(-2, 3), repeat=3):
        if (a * c * (a + b + c)) % 3 == 0:
            continue
        v = trigeval.verify_thm_1_6_part_ii(3, a, b, c)
        assert v.passed is not False
        item = next(leaf for leaf in leaves(v) if leaf.check == "eq1.29")
        if arith.legendre(b * b - 4 * a * c, 3) != 0:
            assert item.passed is None and item.observed_sign == -1
            flipped += 1
    assert flipped == 40


def test_part_ii_preconditions():
    with pytest.raises(ValueError):
        trigeval.verify_thm_1_6_part_ii(7, 1, -2, 1)  # a + b + c = 0
    with pytest.raises(ValueError):
        trigeval.verify_thm_1_6_part_ii(7, 7, 1, 1)


def test_numeric_identities_small_scan():
    for p in brute_primes(3, 113):
        for a in sorted({1, arith.smallest_nonresidue(p)}):
            checks = [trigeval.verify_thm_1_4(p, a), trigeval.verify_thm_1_5_and_cor_1_2(p, a),
                      trigeval.verify_thm_1_6_part_i(p, a)]
            if p > 3:
                checks += [trigeval.verify_cor_1_1(p, a), trigeval.verify_thm13_numeric(p, a)]
            for v in checks:
                assert v.passed, v.to_json()


def test_grid_scan_small_primes():
    for p in brute_primes(5, 61):
        for a, b, c in itertools.product(range(-2, 3), repeat=3):
            if (a * c * (a + b + c)) % p:
                assert trigeval.verify_thm_1_6_part_ii(p, a, b, c).passed


def test_wrong_class_number_is_caught():
    # a perturbed unit must make the magnitude check fail
    real = classfield.class_data(13)
    fake = classfield.ClassData(13, h_plus=2, unit=real.unit)
    classfield._memo[13] = fake

    try:
        assert trigeval.verify_cor_1_1(13, 1).passed is False
    finally:
        classfield._memo[13] = real

    assert trigeval.verify_cor_1_1(13, 1).passed


def test_unit_root_product_phase():
    # prod (1 - zeta^e) over all e is p, phase zero
    for p in (5, 7, 11):
        phase, mag = trigeval.unit_root_product(list(range(1, p)), p)
        assert phase % (4 * p) == 0 and math.isclose(mag.value(), p, rel_tol=1e-12)
