import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from orbitlab.cyclo import Cyc
from orbitlab.scalar import LocalField
from orbitlab.steps import (LineBlock, MonomialGram, QuadBlock, Space,
                            StepFunction, Term, frac_mod_one, frac_mod_power)

P = 3
LF = LocalField(P, Fraction(2))


def _points(rng, n, count=25):
    for _ in range(count):
        yield [Fraction(rng.randrange(-2 * P**3, 2 * P**3), P**rng.randrange(3))
               for _ in range(n)]


def _random_f(rng, n=2, nterms=3, with_phase=False):
    space = Space.lines(LF, n)
    terms = []
    for _ in range(nterms):
        coeff = Cyc.rational(Fraction(rng.randrange(1, 5)), P)
        center = [Fraction(rng.randrange(-4, 5), P**rng.randrange(2))
                  for _ in range(n)]
        levels = [rng.randrange(-1, 3) for _ in range(n)]
        phase = ([Fraction(rng.randrange(-2, 3), P**rng.randrange(2))
                  for _ in range(n)] if with_phase else None)
        terms.append(Term(coeff, center, levels, phase))
    return StepFunction(space, terms)


@given(st.fractions(min_value=-50, max_value=50, max_denominator=81))
def test_frac_mod_one(x):
    from orbitlab.scalar import valuation
    r = frac_mod_one(x, P)
    assert 0 <= r < 1
    assert r == 0 or set(_prime_factors(r.denominator)) <= {P}
    assert r == x or valuation(x - r, P) >= 0


def _prime_factors(n):
    out, d = [], 2
    while n > 1:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    return out


def test_frac_mod_power():
    assert frac_mod_power(Fraction(10, 9) + 9, 3, 2) == Fraction(10, 9)
    assert frac_mod_power(Fraction(5), 3, 1) == 2
    assert frac_mod_power(Fraction(1, 2), 3, 1) == 2  # 1/2 = 2 mod 3


def test_indicator_eval():
    space = Space.lines(LF, 2)
    f = StepFunction.indicator(space, [0, 0], [0, 1])
    one, zero = Cyc.one(P), Cyc.zero(P)
    assert f.eval([0, 0]) == one
    assert f.eval([2, 3]) == one
    assert f.eval([2, 1]) == zero
    assert f.eval([Fraction(1, 3), 0]) == zero


def test_quad_block_valuation():
    unram = QuadBlock(LF, Fraction(2), False)
    assert unram.shape(2) == (2, 2)
    ram = QuadBlock(LF, Fraction(3), True)
    assert ram.shape(3) == (2, 1)
    assert ram.val((Fraction(3), Fraction(1))) == 1  # v_E(3a + sqrt(3) b)


def test_linearity_of_eval():
    rng = random.Random(7)
    f, g = _random_f(rng), _random_f(rng)
    for x in _points(rng, 2):
        assert (f + g).eval(x) == f.eval(x) + g.eval(x)
        assert (f - g).eval(x) == f.eval(x) - g.eval(x)
        assert f.scale(Fraction(3, 2)).eval(x) == f.eval(x) * Fraction(3, 2)


def test_translate_and_phase():
    rng = random.Random(8)
    f = _random_f(rng, with_phase=True)
    a = [Fraction(1, 3), Fraction(2)]
    g = f.translate(a)
    lam = [Fraction(1, 3), Fraction(0)]
    h = f.mul_phase(lam)
    for x in _points(rng, 2):
        assert g.eval(x) == f.eval([xi + ai for xi, ai in zip(x, a)])
        ph = sum(l * xi for l, xi in zip(lam, x))
        assert h.eval(x) == f.eval(x) * LF.psi(ph)


def test_pointwise_mul():
    rng = random.Random(9)
    f, g = _random_f(rng), _random_f(rng)
    fg = f.pointwise_mul(g)
    for x in _points(rng, 2):
        assert fg.eval(x) == f.eval(x) * g.eval(x)


def test_affine_pullback_matches_composition():
    rng = random.Random(10)
    mats = [
        [[1, 1], [0, 1]],                       # unimodular
        [[3, 0], [0, Fraction(1, 3)]],          # monomial, mixed scales
        [[0, 2], [Fraction(1, 3), 0]],          # monomial with swap
        [[1, 2], [Fraction(1, 3), 1]],          # generic
    ]
    for A in mats:
        f = _random_f(rng, with_phase=True)
        b = [Fraction(rng.randrange(-3, 4), 3) for _ in range(2)]
        g = f.affine_pullback(A, b)
        for x in _points(rng, 2):
            Ax = [sum(Fraction(A[i][j]) * x[j] for j in range(2)) + b[i]
                  for i in range(2)]
            assert g.eval(x) == f.eval(Ax)


def test_partial_integrate_is_box_volume():
    space = Space.lines(LF, 2)
    f = StepFunction.indicator(space, [0, 0], [2, -1])
    m = f.partial_integrate([0, 1])
    assert m.eval([]) == Cyc.rational(Fraction(3, 9), P)


def test_restrict_zero():
    rng = random.Random(11)
    f = _random_f(rng, n=3)
    g = f.restrict_zero([1])
    for x in _points(rng, 2):
        assert g.eval(x) == f.eval([x[0], 0, x[1]])


def test_canonicalize_preserves_values():
    rng = random.Random(12)
    f = _random_f(rng)
    g = f.canonicalize()
    for x in _points(rng, 2):
        assert g.eval(x) == f.eval(x)


def test_equality_is_pointwise():
    space = Space.lines(LF, 1)
    f = StepFunction.indicator(space, [Fraction(0)], [0])
    split = StepFunction(space, [
        Term(Cyc.one(P), [Fraction(c)], (1,)) for c in range(P)])
    assert f == split


def test_fourier_is_involutive_up_to_parity():
    rng = random.Random(13)
    for _ in range(10):
        f = _random_f(rng, with_phase=True)
        assert f.fourier().fourier() == f.parity_flip()
    gram = MonomialGram([1, 0], [Fraction(2), Fraction(2)])
    f = _random_f(rng, with_phase=True)
    assert f.fourier(gram).fourier(gram) == f.parity_flip()


def test_fourier_of_unit_lattice_is_itself():
    space = Space.lines(LF, 2)
    f = StepFunction.indicator(space, [0, 0], [0, 0])
    assert f.fourier() == f


def test_json_round_trip():
    rng = random.Random(14)
    f = _random_f(rng, with_phase=True)
    g = StepFunction.from_json(f.to_json(), LF)
    assert g == f
    space = Space(LF, [LineBlock(LF), QuadBlock(LF, Fraction(2), False)])
    h = StepFunction.indicator(space, [0, 0, 0], [0, 1])
    assert StepFunction.from_json(h.to_json(), LF) == h
