"""Etale algebras F[gamma] = prod F_i over the base field, with exact
per-factor arithmetic, valuations, residue symbols and norm tests.

Supported factors are F itself and quadratic field extensions F(sqrt(d0))
with d0 a squarefree rational integer that is a non-square in Q_p.  The
ring of integers of a quadratic factor is Z_p[sqrt(d0)] (p odd, d0
squarefree), so coordinates in the basis (1, sqrt(d0)) are exact.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .cyclo import Cyc
from .quadext import Q2
from .scalar import INF, LocalField, legendre, rational_mod, unit_part, valuation


class UnsupportedAlgebraError(ValueError):
    """Raised when a characteristic polynomial falls outside the exactly
    representable factorization classes (degree > 2 irreducible over Q,
    repeated factors, or Q-irreducible quadratics that split over Q_p)."""


def squarefree_kernel(x) -> int:
    """The squarefree integer d0 with x = d0 * (rational square)."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("squarefree kernel of 0")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    d0 = 1
    for prime, exp in sympy.factorint(n).items():
        if exp % 2:
            d0 *= prime
    return sign * d0


class LineFactor:
    """The factor F itself, attached to a rational eigenvalue."""

    degree = 1
    f = 1
    e = 1

    def __init__(self, lf: LocalField, root: Fraction):
        self.lf = lf
        self.root = Fraction(root)
        self.q = lf.q

    @property
    def gamma(self):
        return self.root

    def contains_E(self) -> bool:
        return False

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_rational(self, x):
        return Fraction(x)

    def coords(self, x):
        return (Fraction(x),)

    def from_coords(self, c):
        return Fraction(c[0])

    def uniformizer(self):
        return Fraction(self.lf.p)

    def val(self, x):
        return valuation(x, self.lf.p)

    def residue_legendre(self, x) -> int:
        """Square test of the unit part of x in the residue field."""
        u = unit_part(x, self.lf.p)
        return legendre(rational_mod(u, self.lf.p, 1), self.lf.p)

    def hilbert(self, a, b) -> int:
        return self.lf.hilbert(a, b)

    def chi(self, x) -> int:
        """chi composed with the norm F_i -> F (here the identity)."""
        if x == 0:
            return 0
        return self.lf.chi(x)

    def norm_to_F(self, x) -> Fraction:
        return Fraction(x)

    def trace_to_F(self, x) -> Fraction:
        return Fraction(x)

    def chi_ramified_on_units(self) -> bool:
        """Whether chi (composed with the norm to F) is nontrivial on the
        unit group of this factor.  Its conductor is always at most 1."""
        return not self.lf.unramified

    def poly(self):
        return (Fraction(1), -self.root)

    def sort_key(self):
        return (1, (-self.root,))

    def __repr__(self):
        return f"LineFactor(root={self.root})"


class QuadFactor:
    """A quadratic field factor F(sqrt(d0)), d0 squarefree and non-square
    in Q_p, with ring of integers Z_p[sqrt(d0)]."""

    degree = 2

    def __init__(self, lf: LocalField, d0: int, gamma: Q2 | None = None):
        self.lf = lf
        self.d0 = Fraction(d0)
        if squarefree_kernel(d0) != d0:
            raise ValueError("d0 must be a squarefree integer")
        if lf.is_square(self.d0):
            raise UnsupportedAlgebraError("d0 is a square in Q_p")
        vp = valuation(self.d0, lf.p)
        self.ramified = vp % 2 == 1
        self.f = 1 if self.ramified else 2
        self.e = 2 if self.ramified else 1
        self.q = lf.q**self.f
        self.gamma = gamma if gamma is not None else Q2(self.d0, Fraction(0), Fraction(1))

    def contains_E(self) -> bool:
        return self.lf.square_class(self.d0) == self.lf.square_class(self.lf.tau)

    def zero(self):
        return Q2(self.d0, Fraction(0), Fraction(0))

    def one(self):
        return Q2(self.d0, Fraction(1), Fraction(0))

    def from_rational(self, x):
        return Q2(self.d0, Fraction(x), Fraction(0))

    def coords(self, x):
        x = self._lift(x)
        return (x.a, x.b)

    def from_coords(self, c):
        return Q2(self.d0, Fraction(c[0]), Fraction(c[1]))

    def _lift(self, x) -> Q2:
        if isinstance(x, Q2):
            if x.d != self.d0:
                raise ValueError("element from a different quadratic factor")
            return x
        return self.from_rational(x)

    def uniformizer(self):
        if self.ramified:
            return Q2(self.d0, Fraction(0), Fraction(1))  # sqrt(d0)
        return self.from_rational(self.lf.p)

    def val(self, x):
        x = self._lift(x)
        p = self.lf.p
        va, vb = valuation(x.a, p), valuation(x.b, p)
        if self.ramified:
            return min(2 * va, 2 * vb + 1)
        return min(va, vb)

    def residue_legendre(self, x) -> int:
        """Square test of the unit part of x in the residue field."""
        x = self._lift(x)
        v = self.val(x)
        if v == INF:
            raise ValueError("residue symbol of 0")
        u = x / self.uniformizer() ** v
        if self.ramified:
            # residue field F_p; the unit part has integral coordinates
            return legendre(rational_mod(u.a, self.lf.p, 1), self.lf.p)
        # residue field F_{p^2}: z^((q-1)/2) = legendre of Nm(z) over F_p
        return legendre(rational_mod(u.norm(), self.lf.p, 1), self.lf.p)

    def hilbert(self, a, b) -> int:
        """Tame Hilbert symbol over the quadratic factor."""
        a, b = self._lift(a), self._lift(b)
        va, vb = self.val(a), self.val(b)
        if va == INF or vb == INF:
            raise ValueError("Hilbert symbol needs nonzero arguments")
        eps = (self.q - 1) // 2
        s = (-1) ** (va * vb * eps)
        s *= self.residue_legendre(a) ** vb
        s *= self.residue_legendre(b) ** va
        return 1 if s == 1 else -1

    def chi(self, x) -> int:
        """chi composed with the norm F_i -> F."""
        x = self._lift(x)
        if not x:
            return 0
        if self.contains_E():
            return 1
        return self.hilbert(x, self.from_rational(self.lf.tau))

    def norm_to_F(self, x) -> Fraction:
        return self._lift(x).norm()

    def trace_to_F(self, x) -> Fraction:
        return self._lift(x).trace()

    def chi_ramified_on_units(self) -> bool:
        """Whether chi composed with the norm is nontrivial on units.

        Ramified factor: unit norms are squares times principal units, so
        any quadratic character of F is trivial on them.  Unramified
        factor: the norm is surjective on units, so this matches whether
        chi itself is ramified.  Conductor is at most 1 in all cases.
        """
        if self.ramified:
            return False
        return not self.lf.unramified

    def poly(self):
        g = self.gamma
        return (Fraction(1), -g.trace(), g.norm())

    def sort_key(self):
        _, c1, c0 = self.poly()
        return (2, (c1, c0))

    def __repr__(self):
        return f"QuadFactor(d0={self.d0}, gamma={self.gamma})"


class EtaleAlgebra:
    """A product of line and quadratic factors, as F[gamma] for a regular
    semisimple gamma."""

    def __init__(self, lf: LocalField, factors):
        self.lf = lf
        self.factors = list(factors)
        keys = [f.sort_key() for f in self.factors]
        if len(set(keys)) != len(keys):
            raise UnsupportedAlgebraError("repeated factors: not regular semisimple")

    @property
    def m(self) -> int:
        return len(self.factors)

    def S1(self) -> list[int]:
        """Indices of factors not containing E."""
        return [i for i, f in enumerate(self.factors) if not f.contains_E()]

    def S2(self) -> list[int]:
        return [i for i, f in enumerate(self.factors) if f.contains_E()]

    def dim(self) -> int:
        return sum(f.degree for f in self.factors)

    def gamma_element(self) -> "AlgElement":
        return AlgElement(self, [f.gamma for f in self.factors])

    def zero(self) -> "AlgElement":
        return AlgElement(self, [f.zero() for f in self.factors])

    def one(self) -> "AlgElement":
        return AlgElement(self, [f.one() for f in self.factors])

    def from_rational(self, x) -> "AlgElement":
        return AlgElement(self, [f.from_rational(x) for f in self.factors])

    def element(self, coords) -> "AlgElement":
        return AlgElement(self, list(coords))

    def char_poly(self):
        """Monic characteristic polynomial, as a coefficient tuple."""
        x = sympy.Symbol("x")
        poly = sympy.Integer(1)
        for f in self.factors:
            cs = f.poly()
            poly *= sum(sympy.Rational(c) * x ** (len(cs) - 1 - k)
                        for k, c in enumerate(cs))
        ps = sympy.Poly(sympy.expand(poly), x)
        return tuple(Fraction(str(c)) for c in ps.all_coeffs())

    def __repr__(self):
        return f"EtaleAlgebra({self.factors})"


class AlgElement:
    """An element of an etale algebra, stored per factor."""

    def __init__(self, algebra: EtaleAlgebra, coords):
        self.algebra = algebra
        self.coords = list(coords)

    def _binop(self, other, op):
        if isinstance(other, AlgElement):
            return AlgElement(self.algebra,
                              [op(a, b) for a, b in zip(self.coords, other.coords)])
        other = self.algebra.from_rational(other)
        return self._binop(other, op)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __neg__(self):
        return AlgElement(self.algebra, [-c for c in self.coords])

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def inverse(self) -> "AlgElement":
        out = []
        for f, c in zip(self.algebra.factors, self.coords):
            if isinstance(c, Q2):
                out.append(c.inverse())
            else:
                out.append(Fraction(1) / Fraction(c))
        return AlgElement(self.algebra, out)

    def is_unit(self) -> bool:
        return all(bool(c) for c in self.coords)

    def vals(self) -> list:
        return [f.val(c) for f, c in zip(self.algebra.factors, self.coords)]

    def norms_to_F(self) -> list[Fraction]:
        return [f.norm_to_F(c) for f, c in zip(self.algebra.factors, self.coords)]

    def chi_values(self) -> list[int]:
        return [f.chi(c) for f, c in zip(self.algebra.factors, self.coords)]

    def chi(self, indices=None) -> int:
        """Product of the per-factor chi values over the given indices."""
        idx = range(len(self.coords)) if indices is None else indices
        out = 1
        for i in idx:
            out *= self.algebra.factors[i].chi(self.coords[i])
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.coords == other.coords

    def __repr__(self):
        return f"AlgElement({self.coords})"


def decompose(lf: LocalField, matrix) -> tuple[EtaleAlgebra, "AlgElement"]:
    """Decompose F[gamma] for a square matrix gamma over F.

    Returns the etale algebra together with the image of gamma in it.
    Raises UnsupportedAlgebraError outside the representable classes.
    """
    mat = sympy.Matrix([[sympy.Rational(c) for c in row] for row in matrix])
    x = sympy.Symbol("x")
    chi = mat.charpoly(x).as_expr()
    _, factor_data = sympy.factor_list(sympy.Poly(chi, x))
    factors = []
    for poly, mult in factor_data:
        if mult > 1:
            raise UnsupportedAlgebraError("characteristic polynomial not squarefree")
        poly = sympy.Poly(poly, x)
        coeffs = [Fraction(str(c)) for c in poly.monic().all_coeffs()]
        if len(coeffs) == 2:
            factors.append(LineFactor(lf, -coeffs[1]))
        elif len(coeffs) == 3:
            _, c1, c0 = coeffs
            disc = c1 * c1 - 4 * c0
            d0 = squarefree_kernel(disc)
            if lf.is_square(Fraction(d0)):
                raise UnsupportedAlgebraError(
                    "quadratic factor splits over Q_p with irrational roots")
            s2 = disc / d0
            s = Fraction(sympy.sqrt(sympy.Rational(s2)))
            gamma_i = Q2(Fraction(d0), -c1 / 2, s / 2)
            factors.append(QuadFactor(lf, d0, gamma_i))
        else:
            raise UnsupportedAlgebraError(
                f"irreducible factor of degree {len(coeffs) - 1} over Q")
    factors.sort(key=lambda f: f.sort_key())
    alg = EtaleAlgebra(lf, factors)
    return alg, alg.gamma_element()


def u1_cosets(lf: LocalField, k: int) -> list[Q2]:
    """Exact representatives of U(1)(F) modulo the principal congruence
    subgroup of level k in E = F(sqrt(tau)); each representative has norm
    exactly 1, produced as w / conj(w)."""
    p, tau = lf.p, lf.tau
    if k < 0:
        raise ValueError("level must be nonnegative")
    if k == 0:
        return [Q2(tau, Fraction(1), Fraction(0))]
    fac = QuadFactor(lf, squarefree_kernel(tau))
    # scale tau to the squarefree model: sqrt(tau) = s * sqrt(d0)
    d0 = fac.d0
    s = Fraction(sympy.sqrt(sympy.Rational(tau / d0)))
    mod = p ** (k + 1)
    seen = {}
    for xa in range(mod):
        for xb in range(mod):
            w = Q2(d0, Fraction(xa), Fraction(xb))
            # w matters only up to F^x, so valuations 0 and 1 suffice
            if fac.val(w) not in (0, 1):
                continue
            z = w / w.conj()
            key = _e_residue_key(fac, z, k)
            if key not in seen:
                # express back in the (1, sqrt(tau)) basis
                seen[key] = Q2(tau, z.a, z.b / s)
    return list(seen.values())


def _e_residue_key(fac: QuadFactor, z: Q2, k: int):
    p = fac.lf.p
    if fac.ramified:
        ka, kb = (k + 1) // 2, k // 2
    else:
        ka = kb = k
    return (rational_mod(z.a, p, ka) if ka else 0,
            rational_mod(z.b, p, kb) if kb else 0)
