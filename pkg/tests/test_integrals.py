import random
from fractions import Fraction

from orbitlab.cyclo import Cyc
from orbitlab.integrals import (gl_orbit_integral, support_radius,
                                unitary_orbit_integral, weil_index,
                                weil_index_form)
from orbitlab.etale import EtaleAlgebra, LineFactor
from orbitlab.scalar import LocalField, valuation
from orbitlab.spaces import GLTriple
from orbitlab.steps import Space, StepFunction, Term


def _brute_gl_orbit(lf, f, d, r=2, jmax=6):
    """Independent oracle: sum chi(t) f(gamma, t v, v*/t) over cosets
    t (1 + p^r O) of F^x, with vol(O^x) = 1."""
    p = lf.p
    acc = Cyc.zero(p)
    w = Fraction(1, (p - 1) * p ** (r - 1))
    units = [u for u in range(1, p**r) if u % p != 0]
    for j in range(-jmax, jmax + 1):
        for u in units:
            t = Fraction(u) * Fraction(p) ** j
            val = f.eval((d.gamma[0][0], t * d.v[0], d.vstar[0] / t))
            if val:
                acc = acc + val * Fraction(lf.chi(t)) * w
    return acc


def test_gl_orbit_against_brute_force():
    rng = random.Random(3)
    for tau in (Fraction(2), Fraction(3)):
        lf = LocalField(3, tau)
        space = Space.lines(lf, 3)
        for _ in range(6):
            terms = [Term(Cyc.rational(Fraction(rng.randrange(1, 4)), 3),
                          [Fraction(rng.randrange(-3, 4)) for _ in range(3)],
                          [rng.randrange(-1, 2)] * 3)
                     for _ in range(2)]
            f = StepFunction(space, terms)
            d = GLTriple([[Fraction(rng.randrange(-2, 3))]],
                         [Fraction(rng.choice([1, 2, 9]))],
                         [Fraction(rng.choice([1, 1, 3]))])
            assert gl_orbit_integral(lf, f, d) == _brute_gl_orbit(lf, f, d)


def test_gl_orbit_of_unit_lattice():
    lf = LocalField(3, Fraction(2))
    space = Space.lines(lf, 3)
    f = StepFunction.indicator(space, [0, 0, 0], [0, 0, 0])
    d = GLTriple([[Fraction(1)]], [Fraction(1)], [Fraction(1)])
    assert gl_orbit_integral(lf, f, d) == Cyc.one(3)
    # scaling v by p makes the invariant b = v* v odd-valuation: the
    # chi-weighted shells cancel pairwise except the surviving range
    d2 = GLTriple([[Fraction(1)]], [Fraction(3)], [Fraction(1)])
    assert gl_orbit_integral(lf, f, d2) == Cyc.zero(3)


def test_unitary_orbit_unit_mass():
    for tau in (Fraction(2), Fraction(3)):
        lf = LocalField(3, tau)
        from orbitlab.etale import squarefree_kernel
        from orbitlab.steps import LineBlock, QuadBlock
        d0 = Fraction(squarefree_kernel(tau))
        ram = valuation(d0, 3) % 2 == 1
        space = Space(lf, [LineBlock(lf), QuadBlock(lf, d0, ram)])
        f = StepFunction.indicator(space, [0, 0, 0], [0, 0])
        assert unitary_orbit_integral(lf, f, Fraction(0), Fraction(1)) \
            == Cyc.one(3)
        # w outside the support
        assert unitary_orbit_integral(lf, f, Fraction(0), Fraction(1, 3)) \
            == Cyc.zero(3)


def test_weil_index_unit_and_inverses():
    for p in (3, 5):
        lf = LocalField(p)
        assert weil_index(lf, Fraction(1)) == Cyc.one(p)
        for a in lf.square_class_reps():
            g = weil_index(lf, a)
            assert g * weil_index(lf, -a) == Cyc.one(p)
            assert g * g.conj() == Cyc.one(p)  # eighth root of unity


def test_weil_index_product_rule():
    for p in (3, 5):
        lf = LocalField(p)
        for a in lf.square_class_reps():
            for b in lf.square_class_reps():
                lhs = weil_index(lf, a) * weil_index(lf, b)
                rhs = (weil_index(lf, Fraction(1)) * weil_index(lf, a * b)
                       * Fraction(lf.hilbert(a, b)))
                assert lhs == rhs


def test_weil_index_form_properties():
    lf = LocalField(3)
    coeffs = [Fraction(1), Fraction(2), Fraction(-3)]
    direct = Cyc.one(3)
    for c in coeffs:
        direct = direct * weil_index(lf, c)
    assert weil_index_form(lf, coeffs) == direct
    assert weil_index_form(lf, list(reversed(coeffs))) == direct


def test_support_radius():
    lf = LocalField(3, Fraction(2))
    alg = EtaleAlgebra(lf, [LineFactor(lf, Fraction(0))])
    space = Space.lines(lf, 2)
    f = StepFunction.indicator(space, [0, 0], [-2, -2])
    assert support_radius(alg, f) >= 2
