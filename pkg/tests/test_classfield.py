import decimal
import math

import pytest

from qrperm import arith, classfield
from conftest import brute_primes

# h(-p) for p = 3 (mod 4) below 200, by a standalone reduced-form count
H_MINUS = {3: 1, 7: 1, 11: 1, 19: 1, 23: 3, 31: 3, 43: 1, 47: 5, 59: 3, 67: 1, 71: 7, 79: 5,
           83: 3, 103: 5, 107: 3, 127: 5, 131: 5, 139: 3, 151: 7, 163: 1, 167: 11, 179: 5,
           191: 13, 199: 9}
# smallest (t, v) with t^2 - p v^2 = -4, from a standalone search over v
PELL_MINUS_4 = {5: (1, 1), 13: (3, 1), 17: (8, 2), 29: (5, 1), 37: (12, 2), 41: (64, 10),
                53: (7, 1), 61: (39, 5), 73: (2136, 250), 89: (1000, 106), 97: (11208, 1138),
                101: (20, 2), 109: (261, 25), 113: (1552, 146)}


def test_h_minus_frozen_values():
    for p, h in H_MINUS.items():
        assert classfield.h_minus_dirichlet(p) == h
        assert classfield.h_minus_forms_oracle(p) == h


@pytest.mark.parametrize("p,h", [(7, 1), (11, 1), (23, 3), (47, 5)])
def test_h_minus_examples(p, h):
    assert classfield.h_minus_dirichlet(p) == h == classfield.h_minus_forms_oracle(p)


def test_h_minus_routes_agree_and_are_odd():
    for p in brute_primes(3, 2000):
        if p % 4 == 3:
            h = classfield.h_minus_dirichlet(p)
            assert h == classfield.h_minus_forms_oracle(p)
            assert h % 2 == 1


def test_h_minus_rejects_wrong_class():
    with pytest.raises(ValueError):
        classfield.h_minus_dirichlet(13)
    with pytest.raises(ValueError):
        classfield.h_minus_dirichlet(15)


@pytest.mark.parametrize("p,unit", [(5, (1, 1, 2, -1)), (13, (3, 1, 2, -1)), (17, (4, 1, 1, -1))])
def test_fundamental_unit_examples(p, unit):
    u = classfield.fundamental_unit(p)
    assert (u.u, u.v, u.denom, u.norm) == unit


def test_fundamental_unit_frozen_pell_solutions():
    for p, (t, v) in PELL_MINUS_4.items():
        u = classfield.fundamental_unit(p)
        assert u.norm == -1
        assert (u.u * 2 // u.denom, u.v * 2 // u.denom) == (t, v)


def test_fundamental_unit_minimal_against_search():
    for p in brute_primes(3, 200):
        if p % 4 == 1:
            assert classfield.fundamental_unit(p) == classfield.fundamental_unit_bruteforce(p)


def test_unit_log_against_high_precision_decimal():
    for p in [q for q in brute_primes(9000, 9999) if q % 4 == 1][:12] + [5, 13, 229]:
        u = classfield.fundamental_unit(p)
        assert u.u ** 2 - p * u.v ** 2 == u.norm * u.denom ** 2
        digits = len(str(u.u)) + 40
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            exact = ((decimal.Decimal(u.u) + decimal.Decimal(u.v) * decimal.Decimal(p).sqrt())
                     / u.denom).ln()
        assert math.isclose(u.log(), float(exact), rel_tol=1e-12)


def test_quad_unit_validation():
    with pytest.raises(ArithmeticError):
        classfield.QuadUnit(5, 3, 1, 1, -1)
    with pytest.raises(ValueError):
        classfield.QuadUnit(5, 1, 1, 3, -1)


@pytest.mark.parametrize("p,h", [(5, 1), (13, 1), (229, 3)])
def test_h_plus_examples(p, h):
    assert classfield.h_plus(p) == h
    assert classfield.h_plus_cycles(p) == h


def test_h_plus_routes_agree_and_norm_power():
    for p in brute_primes(3, 2000):
        if p % 4 == 1:
            unit = classfield.fundamental_unit(p)
            h = classfield.h_plus_analytic(p, unit)
            assert h == classfield.h_plus_cycles(p)
            assert unit.norm ** h == -1


@pytest.mark.parametrize("p", [7, 11, 23])
def test_mordell_examples(p):
    v = classfield.mordell_check(p)
    assert v.passed
    assert v.lhs == arith.factorial_mod((p - 1) // 2, p)


def test_mordell_value_at_23():
    assert arith.factorial_mod(11, 23) == 1


def test_mordell_scan():
    for p in brute_primes(5, 9999):
        if p % 4 == 3:
            assert classfield.mordell_check(p).passed


def test_mordell_rejects_three_and_wrong_class():
    for p in (3, 13):
        with pytest.raises(ValueError):
            classfield.mordell_check(p)


def test_class_data_cache_round_trip(tmp_path):
    records = [classfield.class_data(p) for p in (7, 13, 229, 9949 if 9949 % 4 == 1 else 9941)]
    path = tmp_path / "cache.jsonl"
    classfield.save_cache(records, path)
    assert classfield.load_cache(path) == records
    for line in path.read_text().splitlines():
        assert '"p": "' in line  # decimal strings, never floats
    classfield.prime_cache(records)
    assert classfield.class_data(13) == records[1]


def test_class_data_rejects_even_h_minus():
    with pytest.raises(ArithmeticError):
        classfield.ClassData(23, h_minus=2)
