from fractions import Fraction

import pytest

from orbitlab.etale import (EtaleAlgebra, LineFactor, QuadFactor,
                            UnsupportedAlgebraError, decompose,
                            squarefree_kernel, u1_cosets)
from orbitlab.quadext import Q2
from orbitlab.scalar import LocalField


def test_squarefree_kernel():
    assert squarefree_kernel(Fraction(12)) == 3
    assert squarefree_kernel(Fraction(9, 4)) == 1
    assert squarefree_kernel(Fraction(18)) == 2
    assert squarefree_kernel(Fraction(-8)) == -2


def test_quad_factor_classification(lf3):
    assert not QuadFactor(lf3, 2).ramified
    assert QuadFactor(lf3, 3).ramified
    assert QuadFactor(lf3, 2).q == 9
    assert QuadFactor(lf3, 3).q == 3
    with pytest.raises(UnsupportedAlgebraError):
        QuadFactor(lf3, 7)  # 7 is a square in Q_3


def test_contains_E(lf3):
    assert QuadFactor(lf3, 2).contains_E()
    assert not QuadFactor(lf3, 3).contains_E()
    assert not LineFactor(lf3, Fraction(1)).contains_E()


def test_repeated_factors_rejected(lf3):
    with pytest.raises(UnsupportedAlgebraError):
        EtaleAlgebra(lf3, [LineFactor(lf3, Fraction(1)),
                           LineFactor(lf3, Fraction(1))])


def test_decompose_round_trip(lf3):
    # companion matrix of (x - 1)(x^2 - 2)
    m = [[1, 0, 0], [0, 0, 2], [0, 1, 0]]
    alg, gamma = decompose(lf3, m)
    assert alg.m == 2
    assert alg.dim() == 3
    assert sorted(alg.S1() + alg.S2()) == [0, 1]
    # the characteristic polynomial is recovered exactly
    from orbitlab.spaces import char_poly
    cp = char_poly([[Fraction(c) for c in row] for row in m])
    alg_cp = alg.char_poly()
    assert list(alg_cp) == [Fraction(1)] + [cp[i] for i in (2, 1, 0)]


def test_decompose_rejects_non_squarefree(lf3):
    with pytest.raises(UnsupportedAlgebraError):
        decompose(lf3, [[1, 0], [0, 1]])


def test_u1_cosets_have_norm_one():
    for tau in (Fraction(2), Fraction(3)):
        lf = LocalField(3, tau)
        for k in (1, 2):
            reps = u1_cosets(lf, k)
            assert len(reps) == len(set(map(repr, reps)))
            for z in reps:
                assert z.norm() == 1


def test_u1_coset_counts_stabilize():
    lf = LocalField(3, Fraction(2))
    n1, n2 = len(u1_cosets(lf, 1)), len(u1_cosets(lf, 2))
    assert n2 == 3 * n1  # index of successive congruence subgroups
