import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qrperm import arith, classfield, cyclo
from qrperm.cyclo import CycloElem
from conftest import brute_primes

PRIMES = [5, 7, 11, 13]


def elems(p):
    return st.builds(lambda num, den: CycloElem.from_cyclic(p, num, den),
                     st.lists(st.integers(-20, 20), min_size=p, max_size=p), st.integers(1, 6))


@st.composite
def triples(draw):
    p = draw(st.sampled_from(PRIMES))
    return p, draw(elems(p)), draw(elems(p)), draw(elems(p))


def direct_value(p, cyc, den=1):
    return sum(c * cmath.exp(2j * math.pi * k / p) for k, c in enumerate(cyc)) / den


def test_full_product_is_p():
    assert cyclo.cyclo_product(range(1, 5), 5) == 5
    for p in brute_primes(3, 61):
        for a in (1, arith.smallest_nonresidue(p)):
            assert cyclo.cyclo_product((a * n % p for n in range(1, p)), p) == p


def test_empty_product_is_one():
    assert cyclo.cyclo_product([], 7) == 1


def test_two_factor_example():
    got = cyclo.cyclo_product([1, 4], 5)
    assert got == CycloElem.from_cyclic(5, [2, -1, 0, 0, -1])
    # canonical form drops the zeta^0 coordinate
    assert got.num == (-3, -2, -2, -3) and got.den == 1


def test_canonical_form_of_the_relation():
    p = 7
    assert CycloElem.from_cyclic(p, [1] * p).is_zero()
    assert CycloElem.constant(p, 1) == -sum((CycloElem.zeta_power(p, k) for k in range(1, p)),
                                            CycloElem.constant(p, 0))


def test_constructor_validation():
    with pytest.raises(ValueError):
        CycloElem(5, [1, 2, 3])
    with pytest.raises(ZeroDivisionError):
        CycloElem(5, [1, 2, 3, 4], 0)
    with pytest.raises(ValueError):
        CycloElem.constant(5, 1) + CycloElem.constant(7, 1)


@given(triples())
def test_ring_axioms(t):
    p, x, y, z = t
    one = CycloElem.constant(p, 1)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert one * x == x and x - x == 0


@given(triples())
def test_shadow_is_a_ring_morphism(t):
    p, x, y, _ = t
    for value, expected in ((x * y, x.shadow() * y.shadow()), (x + y, x.shadow() + y.shadow())):
        assert abs(value.shadow() - expected) <= 1e-9 * max(1.0, abs(expected))


@given(st.sampled_from(PRIMES), st.lists(st.integers(-9, 9), min_size=13, max_size=13),
       st.integers(1, 5))
def test_shadow_matches_direct_evaluation(p, cyc, den):
    cyc = cyc[:p]
    assert abs(CycloElem.from_cyclic(p, cyc, den).shadow() - direct_value(p, cyc, den)) < 1e-9


@given(st.sampled_from(PRIMES), st.lists(st.integers(-3, 3), min_size=13, max_size=13),
       st.integers(0, 4))
def test_power_matches_repeated_product(p, cyc, n):
    x = CycloElem.from_cyclic(p, cyc[:p])
    acc = CycloElem.constant(p, 1)
    for _ in range(n):
        acc = acc * x
    assert x ** n == acc


def test_binomial_multiply_matches_general_multiply():
    p = 11
    x = CycloElem.from_cyclic(p, list(range(p)), 3)
    b = CycloElem.zeta_power(p, 3) * 2 - CycloElem.zeta_power(p, 7) * 5
    assert x.mul_binomial(2, 3, -5, 7) == x * b


@pytest.mark.parametrize("p,sign", [(5, 1), (7, -1)])
def test_gauss_sum_squares(p, sign):
    g = cyclo.gauss_sum(1, p)
    assert g * g == sign * p


def test_gauss_sum_twist_example():
    assert cyclo.gauss_sum(2, 5) + cyclo.gauss_sum(1, 5) == 0


def test_gauss_sum_properties_to_199():
    for p in brute_primes(3, 199):
        g = cyclo.gauss_sum(1, p)
        assert g * g == (-1) ** ((p - 1) // 2) * p
        n = arith.smallest_nonresidue(p)
        assert cyclo.gauss_sum(n, p) == -g
        assert cyclo.gauss_sum(4, p) == g
    with pytest.raises(ValueError):
        cyclo.gauss_sum(7, 7)


def test_unit_power_in_quadratic_subring():
    u = classfield.fundamental_unit(13)
    x, y = cyclo.unit_power(u, 3)
    ex, ey = u.as_pair()
    # direct cube of (ex + ey sqrt 13)
    assert x == ex ** 3 + 3 * ex * ey ** 2 * 13 and y == 3 * ex ** 2 * ey + ey ** 3 * 13
    ix, iy = cyclo.unit_power(u, -1)
    assert ex * ix + 13 * ey * iy == 1 and ex * iy + ey * ix == 0


def test_unit_lift_is_numerically_right():
    for p in (5, 13, 17, 29):
        u = classfield.fundamental_unit(p)
        g = cyclo.gauss_sum(1, p)
        lifted = cyclo.lift_quadratic(*cyclo.unit_power(u, 2), g)
        assert abs(lifted.shadow() - math.exp(2 * u.log())) < 1e-9 * math.exp(2 * u.log())


def test_square_product_shadow_at_five():
    value = cyclo.square_product(5, 1).shadow()
    assert abs(value - math.sqrt(5) / ((1 + math.sqrt(5)) / 2)) < 1e-12


@pytest.mark.parametrize("p,a", [(5, 1), (7, 1), (7, 3), (13, 2)])
def test_part_i_examples(p, a):
    assert cyclo.verify_thm13_part_i(p, a).passed


def test_part_i_at_seven_is_minus_g():
    assert cyclo.square_product(7, 1) == -cyclo.gauss_sum(1, 7)


@pytest.mark.parametrize("p", [7, 11, 13])
def test_part_ii_examples(p):
    assert cyclo.verify_thm13_part_ii(p, 1).passed


def test_part_ii_at_eleven_is_minus_eleven():
    assert cyclo.difference_product(11, 1) == -11


@pytest.mark.parametrize("p", [5, 13, 17])
def test_dirichlet_product_examples(p):
    assert cyclo.verify_dirichlet_product(p).passed


def test_parameter_checks():
    with pytest.raises(ValueError):
        cyclo.verify_thm13_part_i(3, 1)
    with pytest.raises(ValueError):
        cyclo.verify_thm13_part_i(7, 14)
    with pytest.raises(ValueError):
        cyclo.verify_dirichlet_product(7)


def test_wrong_class_number_fails():
    # feeding a wrong h must break the exact identity, not slip through
    u = classfield.fundamental_unit(13)
    assert cyclo.verify_thm13_part_i(13, 1, unit=u, h=2).passed is False
    assert cyclo.verify_thm13_part_i(23, 1, h=1).passed is False


def test_numeric_shadow_agrees_with_trig_evaluation():
    from qrperm import trigeval
    for p in brute_primes(5, 61):
        exact = cyclo.square_product(p, 1).shadow()
        phase, mag = trigeval.unit_root_product([k * k % p for k in range(1, (p - 1) // 2 + 1)], p)
        numeric = cmath.exp(1j * math.pi * phase / (2 * p)) * mag.value()
        assert abs(exact - numeric) <= 1e-9 * abs(exact)


def test_to_json_uses_strings():
    j = cyclo.gauss_sum(1, 5).to_json()
    assert j["p"] == 5 and all(isinstance(c, str) for c in j["num"])
    # 1 = -(zeta + ... + zeta^4)
    assert CycloElem.constant(5, 1).coeffs == (Fraction(-1),) * 4
