from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from orbitlab.cyclo import Cyc, gauss_sum, sqrt_p

P = 3

rationals = st.fractions(min_value=-40, max_value=40, max_denominator=12)


def cycs(p=P):
    def build(parts):
        acc = Cyc.zero(p)
        for x, j in parts:
            acc = acc + Cyc.root_of_unity(p, 1, 1) ** j * Fraction(x)
        return acc
    pairs = st.tuples(st.integers(-5, 5), st.integers(0, 5))
    return st.lists(pairs, max_size=4).map(build)


@given(rationals)
def test_rational_round_trip(x):
    assert Cyc.rational(x, P).as_rational() == x


@given(cycs(), cycs(), cycs())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + Cyc.zero(P) == a
    assert a * Cyc.one(P) == a


@given(cycs(), cycs())
@settings(max_examples=40)
def test_conjugation_is_a_ring_map(a, b):
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


@given(rationals.filter(lambda x: x != 0))
def test_rational_inverse(x):
    z = Cyc.rational(x, P)
    assert z * z.inverse() == Cyc.one(P)


def test_root_of_unity_orders():
    for p in (3, 5):
        for e in (1, 2):
            z = Cyc.root_of_unity(p, e, 1)
            assert z ** (p**e) == Cyc.one(p)
            assert z ** (p ** (e - 1)) != Cyc.one(p)
    i = Cyc.i(P)
    assert i * i == Cyc.rational(Fraction(-1), P)


def test_gauss_sum_square():
    for p in (3, 5, 7):
        g = gauss_sum(p)
        sign = Fraction(1) if p % 4 == 1 else Fraction(-1)
        assert g * g == Cyc.rational(sign * p, p)
        assert g * g.conj() == Cyc.rational(Fraction(p), p)


def test_sqrt_p():
    for p in (3, 5, 7):
        s = sqrt_p(p)
        assert s * s == Cyc.rational(Fraction(p), p)


@given(cycs())
@settings(max_examples=40)
def test_json_round_trip(a):
    assert Cyc.from_json(a.to_json(), P) == a
