"""Exact cyclotomic arithmetic: canonical form, parser, field operations.

Float evaluation (CyclotomicNumber.to_complex) appears only as a cross-check
harness at 1e-9; every assertion of substance is exact.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crepant.cyclo import (
    CyclotomicNumber,
    CycloParseError,
    as_root_of_unity,
    cyclotomic_polynomial,
    euler_phi,
    parse_cyclotomic,
    rational,
    zeta,
)

from helpers import close_enough


# --- parsing ---------------------------------------------------------------


def test_parse_primitive_root():
    x = parse_cyclotomic("E(3)")
    assert x.conductor == 3
    assert x.coeffs == (Fraction(0), Fraction(1))  # the residue class of x


def test_parse_power_reduces():
    assert parse_cyclotomic("E(4)^2") == -1


def test_parse_phi3_relation():
    assert parse_cyclotomic("E(3)+E(3)^2") == -1


def test_parse_rationals_and_precedence():
    assert parse_cyclotomic("1/2 + 1/3") == Fraction(5, 6)
    assert parse_cyclotomic("2+3*4") == 14
    assert parse_cyclotomic("(2+3)*4") == 20
    with pytest.raises(CycloParseError):
        parse_cyclotomic("2^3^1")  # at most one exponent per factor


def test_parse_unary_minus():
    # needed for matrix entries like -E(3)
    assert parse_cyclotomic("-E(3)") == -zeta(3)
    assert parse_cyclotomic("-2+3") == 1
    assert parse_cyclotomic("+5") == 5


def test_parse_negative_exponent():
    assert parse_cyclotomic("E(7)^-2") == zeta(7, 5)


def test_parse_error_positions():
    with pytest.raises(CycloParseError) as err:
        parse_cyclotomic("1+*2")
    assert err.value.position == 2
    with pytest.raises(CycloParseError):
        parse_cyclotomic("(1")
    with pytest.raises(CycloParseError):
        parse_cyclotomic("1)")
    with pytest.raises(CycloParseError):
        parse_cyclotomic("")


def test_parse_rejects_E0():
    with pytest.raises(CycloParseError):
        parse_cyclotomic("E(0)")


def test_parse_division_by_zero():
    with pytest.raises(CycloParseError) as err:
        parse_cyclotomic("1/0")
    assert "zero" in str(err.value)
    with pytest.raises(CycloParseError):
        parse_cyclotomic("1/(E(3)+E(3)^2+1)")


# --- field arithmetic ------------------------------------------------------


def test_root_of_unity_cycle():
    assert zeta(8) * zeta(8, 7) == 1


def test_field_inverse():
    x = 1 + zeta(5)
    assert x * x.inverse() == 1
    assert (x / x) == 1


def test_zeta6_equals_one_plus_zeta3():
    diff = zeta(6) - (1 + zeta(3))
    assert diff.is_zero
    # confirm numerically to 12 digits
    assert abs(zeta(6).to_complex() - (1 + zeta(3).to_complex())) < 1e-12


def test_division_is_multiplication_by_inverse():
    a = zeta(7)
    b = zeta(7, 3)
    assert a / b == zeta(7, 5)
    assert b * zeta(7, 5) == a


def test_integer_coercion():
    assert rational(3) + 2 == 5
    assert 2 - rational(3) == -1
    assert zeta(4) * 0 == 0
    assert (Fraction(1, 2) * rational(4)) == 2


def test_pow():
    x = zeta(9)
    assert x**0 == 1
    assert x**9 == 1
    assert x**-1 == zeta(9, 8)
    assert (1 + zeta(3)) ** 2 == 1 + 2 * zeta(3) + zeta(3, 2)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        rational(0).inverse()


# --- embed -----------------------------------------------------------------


def test_embed_zeta3_into_conductor6():
    assert zeta(3).embed(6) == zeta(6) ** 2
    assert zeta(3).embed(6).conductor == 6


def test_embed_rational():
    one = rational(1).embed(12)
    assert one.conductor == 12
    assert one == 1


def test_embed_zeta4_into_12():
    x = zeta(4).embed(12)
    assert x * x == -1


def test_embed_requires_multiple():
    with pytest.raises(ValueError):
        zeta(4).embed(6)


# --- as_root_of_unity ------------------------------------------------------


def test_as_root_of_unity_basics():
    assert as_root_of_unity(rational(1)) == (1, 0)
    assert as_root_of_unity(rational(-1)) == (2, 1)
    assert as_root_of_unity(zeta(3, 2)) == (3, 2)
    assert as_root_of_unity(rational(2)) is None
    assert as_root_of_unity(1 + zeta(5)) is None
    assert as_root_of_unity(rational(0)) is None


def test_as_root_of_unity_finds_minimal_order():
    # zeta12^4 has order 3, not 12
    r, k = as_root_of_unity(zeta(12) ** 4)
    assert (r, k) == (3, 1)
    assert zeta(12, 4) == zeta(3)


# --- canonical form / hashing ----------------------------------------------


def test_cross_conductor_equality_and_hash():
    a = zeta(3)
    b = zeta(6) ** 2
    assert a == b
    assert hash(a) == hash(b)
    assert len({a, b}) == 1


def test_rational_values_hash_like_fractions():
    assert hash(rational(5)) == hash(5)
    assert hash(zeta(5) + (1 - zeta(5))) == hash(1)


def test_coeff_length_is_phi():
    for n in (1, 2, 3, 4, 6, 8, 9, 12, 15):
        x = zeta(n) + 1
        assert len(x.coeffs) == euler_phi(n)


def test_cyclotomic_polynomial_degrees():
    for n in range(1, 20):
        poly = cyclotomic_polynomial(n)
        assert len(poly) == euler_phi(n) + 1
        assert poly[-1] == 1


# --- property tests ---------------------------------------------------------

_CONDUCTORS = [1, 2, 3, 4, 5, 6, 8, 9, 10, 12]


@st.composite
def cyclotomic_values(draw):
    n = draw(st.sampled_from(_CONDUCTORS))
    terms = draw(
        st.lists(
            st.tuples(
                st.integers(min_value=-3, max_value=3),
                st.integers(min_value=1, max_value=3),
                st.integers(min_value=0, max_value=n - 1),
            ),
            min_size=0,
            max_size=3,
        )
    )
    acc = rational(0).embed(n)
    for num, den, e in terms:
        acc = acc + Fraction(num, den) * zeta(n, e)
    return acc


@given(cyclotomic_values(), cyclotomic_values(), cyclotomic_values())
@settings(max_examples=150)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + 0 == x
    assert x * 1 == x
    assert x - x == 0


@given(cyclotomic_values())
@settings(max_examples=150)
def test_render_parse_round_trip(x):
    assert parse_cyclotomic(x.render()) == x


@given(cyclotomic_values(), cyclotomic_values())
@settings(max_examples=100)
def test_float_cross_check(x, y):
    assert close_enough((x * y).to_complex(), x.to_complex() * y.to_complex())
    assert close_enough((x + y).to_complex(), x.to_complex() + y.to_complex())


@given(cyclotomic_values())
@settings(max_examples=100)
def test_nonzero_inverse_round_trip(x):
    if not x.is_zero:
        assert x * x.inverse() == 1


@given(cyclotomic_values(), cyclotomic_values(), st.integers(1, 3))
@settings(max_examples=100)
def test_embed_is_ring_homomorphism(x, y, scale):
    n = x.conductor * y.conductor // math.gcd(x.conductor, y.conductor)
    m = n * scale
    assert (x * y).embed(m) == x.embed(m) * y.embed(m)
    assert (x + y).embed(m) == x.embed(m) + y.embed(m)


@given(cyclotomic_values(), st.sampled_from([1, Fraction(1, 2)]))
@settings(max_examples=60)
def test_distinct_values_evaluate_apart(x, delta):
    # canonical-form soundness has a numerical shadow: values that differ by
    # a unit-scale quantity must not collide at the fixed embedding
    y = x + delta
    assert x != y
    assert abs(x.to_complex() - y.to_complex()) > 1e-9
