import itertools
import random
from fractions import Fraction

from orbitlab.cohomology import (H1Class, all_classes, delta_family, inv,
                                 kappa_sign, subset_pairing)
from orbitlab.etale import EtaleAlgebra, LineFactor, QuadFactor
from orbitlab.harness import _companion_triple
from orbitlab.scalar import LocalField


def _alg(lf, factors):
    return EtaleAlgebra(lf, factors)


def test_h1_is_an_elementary_group(lf3):
    alg = _alg(lf3, [LineFactor(lf3, Fraction(0)),
                     LineFactor(lf3, Fraction(1))])
    classes = list(all_classes(alg))
    assert len(classes) == 4
    zero = H1Class.zero(alg)
    for x in classes:
        assert x + x == zero
        assert x + zero == x


def test_pairing_is_perfect(lf3):
    alg = _alg(lf3, [LineFactor(lf3, Fraction(0)),
                     LineFactor(lf3, Fraction(1)),
                     QuadFactor(lf3, 2)])
    S1 = alg.S1()
    assert S1 == [0, 1]  # the quadratic factor contains E
    classes = list(all_classes(alg))
    subsets = [lam for r in range(len(S1) + 1)
               for lam in itertools.combinations(S1, r)]
    chars = {lam: tuple(subset_pairing(alg, lam, x) for x in classes)
             for lam in subsets}
    assert len(set(chars.values())) == len(chars)
    for lam in subsets:
        for x in classes:
            for y in classes:
                assert subset_pairing(alg, lam, x + y) == \
                    subset_pairing(alg, lam, x) * subset_pairing(alg, lam, y)


def test_delta_family_is_a_torsor(lf3):
    rng = random.Random(5)
    alg = _alg(lf3, [LineFactor(lf3, Fraction(0)),
                     LineFactor(lf3, Fraction(1))])
    d = _companion_triple(alg, rng)
    fam = delta_family(lf3, d, alg)
    classes = list(all_classes(alg))
    for x in classes:
        for y in classes:
            assert inv(alg, fam[x], fam[y]) == x + y


def test_kappa_sign_restricts_the_pairing(lf3):
    alg = _alg(lf3, [LineFactor(lf3, Fraction(0)),
                     LineFactor(lf3, Fraction(1))])
    for x in all_classes(alg):
        assert kappa_sign(alg, [0, 1], x) == subset_pairing(alg, (), x)
        assert kappa_sign(alg, [0], x) * kappa_sign(alg, [1], x) == \
            kappa_sign(alg, [0, 1], x)
