from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfkit.errors import DescriptorMismatch, NonUnit, ParseError
from pfkit.formats import parse_element, parse_ring
from pfkit.rings import (
    IntPolynomialRing,
    ModularIntegers,
    ProductRing,
    QuadraticField,
    RationalField,
    RationalFunctionField,
    finite_field,
)

Q = RationalField()
QA = RationalFunctionField(Q, "a")
GOLDEN = QuadraticField(1, 1, "t")
GAUSS = QuadraticField(0, -1, "i")
Z51 = ModularIntegers(51)
GF4 = finite_field(4)
GF9 = finite_field(9)
GF3x5 = ProductRing((finite_field(3), finite_field(5)))

fractions = st.builds(Fraction, st.integers(-200, 200), st.integers(1, 30))
small = st.integers(-6, 6)


def rationals():
    return fractions.map(Q)


def quadratic(R):
    g = R.gen(next(iter(R.names)))
    return st.tuples(fractions, fractions).map(lambda c: R(c[0]) + R(c[1]) * g)


def functions():
    a = QA.gen("a")
    poly = st.lists(small, min_size=1, max_size=3).map(lambda cs: sum((QA(c) * a**k for k, c in enumerate(cs)), QA(0)))
    return st.tuples(poly, poly.filter(lambda p: not p.is_zero())).map(lambda pq: pq[0] / pq[1])


def finite(R):
    return st.sampled_from(list(R.elements()))


RING_STRATEGIES = {
    "Q": rationals(),
    "Q(a)": functions(),
    "golden": quadratic(GOLDEN),
    "gauss": quadratic(GAUSS),
    "Z/51": st.integers(0, 50).map(Z51),
    "GF4": finite(GF4),
    "GF9": finite(GF9),
    "GF3xGF5": finite(GF3x5),
}


@pytest.mark.parametrize("name", list(RING_STRATEGIES))
def test_ring_axioms(name):
    s = RING_STRATEGIES[name]

    @given(s, s, s)
    def check(x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x - x == x.ring.zero_element
        assert x * x.ring.one_element == x

    check()


@pytest.mark.parametrize("name", ["Q", "Q(a)", "golden", "gauss", "GF4", "GF9"])
def test_units_invert(name):
    @given(RING_STRATEGIES[name])
    def check(x):
        if x.is_zero():
            return
        assert x * x.inverse() == x.ring.one_element

    check()


@pytest.mark.parametrize("name", ["Q", "Q(a)", "golden", "gauss"])
def test_factor_round_trip(name):
    @given(RING_STRATEGIES[name])
    def check(x):
        if x.is_zero():
            return
        f = x.factor()
        assert f.value() == x
        assert f.unit.is_unit()

    check()


@given(st.integers(0, 2), st.integers(0, 4), st.integers(0, 2), st.integers(0, 4))
def test_product_is_componentwise(a, b, c, d):
    x = GF3x5.make([finite_field(3)(a), finite_field(5)(b)])
    y = GF3x5.make([finite_field(3)(c), finite_field(5)(d)])
    assert GF3x5.component(x + y, 0) == finite_field(3)(a + c)
    assert GF3x5.component(x * y, 1) == finite_field(5)(b * d)


def test_modular_sum_and_inverse():
    assert Z51(7) + Z51(23) + Z51(11) == Z51(41)
    assert Z51(41) * Z51(41).inverse() == Z51(1)
    with pytest.raises(NonUnit):
        Z51(3).inverse()


def test_golden_ratio_identity():
    t = GOLDEN.gen("t")
    assert t * t == t + 1
    assert t.inverse() == t - 1


def test_gaussian_two_ramifies():
    i = GAUSS.gen("i")
    f = GAUSS(2).factor()
    assert len(f.factors) == 1 and f.factors[0][1] == 2
    assert (1 - i) ** 2 * i == GAUSS(2)


def test_finite_field_of_order_four():
    w = GF4.gen("w")
    assert w**3 == GF4(1)
    assert w * w == w + 1
    assert len(list(GF4.elements())) == 4


def test_mixing_rings_is_rejected():
    with pytest.raises(DescriptorMismatch):
        Q(1) + GOLDEN(1)


def test_function_field_evaluation():
    a = QA.gen("a")
    x = (a + 1) / (a - 2)
    assert QA.evaluate(x, Q(3)) == Q(4)
    with pytest.raises(NonUnit):
        QA.evaluate(x, Q(2))


def test_polynomial_ring_evaluates():
    R = IntPolynomialRing(2)
    p = R.variable(0) * R.variable(1) - 1
    assert R.evaluate(p, {0: Q(2), 1: Q(Fraction(1, 2))}, Q).is_zero()


@pytest.mark.parametrize(
    "desc", ["Q", "Q(a)", "GF2(a)", "GF4", "GF7", "Z/51", "Q[t]/(t^2 - t - 1)", "Q[i]/(i^2 + 1)", "GF3 x GF5"]
)
def test_ring_descriptor_round_trip(desc):
    R = parse_ring(desc)
    assert parse_ring(R.descriptor()) == R


@pytest.mark.parametrize("name", ["Q", "Q(a)", "golden", "gauss", "GF4", "GF3xGF5"])
def test_element_text_round_trip(name):
    @given(RING_STRATEGIES[name])
    def check(x):
        assert parse_element(x.ring, str(x)) == x

    check()


def test_bad_descriptor():
    with pytest.raises(ParseError):
        parse_ring("GF6")
    with pytest.raises(ParseError):
        parse_ring("R")
