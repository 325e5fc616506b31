"""Orbit-integral engines: torus orbit integrals with germ-expansion
extraction, rank <= 2 general-linear and unitary orbit integrals,
nilpotent orbit integrals by analytic continuation, parabolic descent,
and Weil indices.  Everything is exact; s = 0 evaluations go through
ZetaElement, never through numeric limits.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cyclo import Cyc, sqrt_p
from .etale import EtaleAlgebra, AlgElement, LineFactor, QuadFactor
from .quadext import Q2
from .scalar import INF, LocalField, smallest_nonresidue, valuation
from .steps import LineBlock, QuadBlock, Space, StepFunction
from .zeta import FactorMode, ZetaElement, mult_zeta


def block_for_factor(lf: LocalField, fac):
    if fac.degree == 1:
        return LineBlock(lf)
    return QuadBlock(lf, fac.d0, fac.ramified)


def algebra_space(alg: EtaleAlgebra, copies: int = 2) -> Space:
    """The space A^copies with one coordinate block per factor per copy."""
    blocks = [block_for_factor(alg.lf, f) for f in alg.factors] * copies
    return Space(alg.lf, blocks)


def log_norm(fac, v) -> Fraction:
    """log_q |x|_i for v = val_i(x), with |.|_i the unique extension of
    the absolute value of F (so log_q |pi_i| = -1/e_i)."""
    return Fraction(-v, fac.e)


# ---------------------------------------------------------------------------
# torus orbit integrals and germ expansions


def torus_orbit_integral(alg: EtaleAlgebra, f: StepFunction,
                         eps: AlgElement) -> Cyc:
    """Integral over T of f(t, eps t^{-1}) chi(t) dt, as an exact value."""
    if not eps.is_unit():
        raise ValueError("eps must be invertible")
    modes = [FactorMode(eps=c, sigma=0, char=True) for c in eps.coords]
    return mult_zeta(alg, f, modes).value_at_one()


def c_empty_zeta(alg: EtaleAlgebra, f: StepFunction, signs) -> ZetaElement:
    """The analytic continuation defining c_empty: the sum over subsets
    L of the factors-without-E index set of

        int f(t_L, (t^{-1})_rest) chi(t) prod_rest chi(eps_i) dt

    with |t_i|^{+s} on L and |t_i|^{-s} on the rest; signs supplies
    chi(eps_i) per such factor."""
    S1 = alg.S1()
    sign_of = dict(zip(S1, signs))
    total = ZetaElement.zero(alg.lf.p)
    for lam in _subsets(S1):
        modes = []
        prefactor = 1
        for i in range(alg.m):
            if i not in S1:
                modes.append(FactorMode(integrate=False))
            elif i in lam:
                modes.append(FactorMode(slot2=False, sigma=1, char=True))
            else:
                modes.append(FactorMode(slot1=False, sigma=-1, char=True))
                prefactor *= sign_of[i]
        total = total + mult_zeta(alg, f, modes) * Fraction(prefactor)
    return total


def c_empty_closed_form(alg: EtaleAlgebra, f: StepFunction, signs) -> Cyc:
    return c_empty_zeta(alg, f, signs).value_at_one()


def _subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        yield from (frozenset(c) for c in itertools.combinations(xs, r))


def deep_element(fac, depth: int, sign: int):
    """An element of the factor with valuation >= depth and chi value equal
    to sign (the factor must not contain E when sign = -1)."""
    pi = fac.uniformizer()
    for a in (2 * depth, 2 * depth + 1):
        for unit in _unit_reps(fac):
            x = pi**a * unit
            if fac.chi(x) == sign:
                return x
    raise ValueError("no element of the requested norm class")


def _unit_reps(fac):
    yield fac.one()
    u = smallest_nonresidue(fac.lf.p)
    if fac.degree == 1:
        yield Fraction(u)
    else:
        yield fac.from_rational(u)
        for a in range(fac.lf.p):
            cand = fac.from_coords((Fraction(a), Fraction(1)))
            if fac.val(cand) == 0:
                yield cand


class GermExpansion:
    """The exact finite expansion of deep torus orbit integrals.

    predict(eps) = sum over L2 inside S2 of
        (-1)^{|S2 minus L2|} c_{L2}(signs(eps)) prod_{i in S2 minus L2} log_q|eps_i|
    valid once val(eps_i) >= radius on every factor.
    """

    def __init__(self, alg: EtaleAlgebra, radius: int, coeffs: dict):
        self.alg = alg
        self.radius = radius
        self.coeffs = coeffs  # (frozenset L2, sign tuple) -> Cyc

    def signs_of(self, eps: AlgElement):
        return tuple(self.alg.factors[i].chi(eps.coords[i])
                     for i in self.alg.S1())

    def c_empty(self, signs) -> Cyc:
        return self.coeffs[(frozenset(), tuple(signs))]

    def predict(self, eps: AlgElement) -> Cyc:
        S2 = self.alg.S2()
        signs = self.signs_of(eps)
        p = self.alg.lf.p
        out = Cyc.zero(p)
        for lam2 in _subsets(S2):
            rest = [i for i in S2 if i not in lam2]
            c = self.coeffs[(lam2, signs)]
            reg = Fraction(1)
            for i in rest:
                fac = self.alg.factors[i]
                reg *= log_norm(fac, fac.val(eps.coords[i]))
            out = out + c * Cyc.rational(Fraction(-1) ** len(rest) * reg, p)
        return out


def support_radius(alg: EtaleAlgebra, f: StepFunction) -> int:
    """A conservative depth beyond which the germ expansion is exact,
    read off from the box levels and center valuations in f."""
    m = alg.m
    bound = 1
    for t in f.terms:
        for i in range(m):
            fac = alg.factors[i]
            for c, l in ((f.space.block_coords(t.center, i), t.levels[i]),
                         (f.space.block_coords(t.center, m + i), t.levels[m + i])):
                v = fac.val(fac.from_coords(c))
                spread = abs(l) + (abs(v) if v != INF else 0)
                bound = max(bound, spread + 1)
    return 2 * bound


def germ_extract(alg: EtaleAlgebra, f: StepFunction,
                 radius: int | None = None, max_radius: int = 24) -> GermExpansion:
    """Solve for the expansion coefficients from torus orbit integrals on a
    grid of deep valuations, then certify out of sample; deepen on failure."""
    N = radius if radius is not None else support_radius(alg, f)
    while True:
        exp = _extract_at_radius(alg, f, N)
        if _certify(alg, f, exp):
            return exp
        N += 2
        if N > max_radius:
            raise ArithmeticError("germ expansion inconsistent within radius bound")


def _extract_at_radius(alg, f, N):
    S1, S2 = alg.S1(), alg.S2()
    p = alg.lf.p
    coeffs = {}
    for signs in itertools.product((1, -1), repeat=len(S1)):
        s1_parts = {i: deep_element(alg.factors[i], N, s)
                    for i, s in zip(S1, signs)}
        # sample the multilinear polynomial in the S2 log variables on a
        # 2^{|S2|} grid and take finite differences
        samples = {}
        for ks in itertools.product((0, 1), repeat=len(S2)):
            coords = []
            for i in range(alg.m):
                if i in s1_parts:
                    coords.append(s1_parts[i])
                else:
                    fac = alg.factors[i]
                    k = N * fac.e + ks[S2.index(i)]
                    coords.append(fac.uniformizer() ** k)
            eps = alg.element(coords)
            xs = tuple(log_norm(alg.factors[i], alg.factors[i].e * N + ks[j])
                       for j, i in enumerate(S2))
            samples[xs] = torus_orbit_integral(alg, f, eps)
        multi = _solve_multilinear(samples, len(S2), p)
        for lam2 in _subsets(S2):
            rest = frozenset(S2) - lam2
            key = frozenset(j for j, i in enumerate(S2) if i in rest)
            c = multi[key] * Cyc.rational(Fraction(-1) ** len(rest), p)
            coeffs[(lam2, signs)] = c
    return GermExpansion(alg, N, coeffs)


def _solve_multilinear(samples: dict, nvars: int, p) -> dict:
    """Given values of a multilinear polynomial on a full 2-point grid per
    variable, return its coefficients indexed by frozensets of variables."""
    if nvars == 0:
        return {frozenset(): next(iter(samples.values()))}
    # split on the last variable
    lows = {}
    highs = {}
    vals = sorted({xs[nvars - 1] for xs in samples})
    a, b = vals[0], vals[1]
    for xs, val in samples.items():
        head = xs[:-1]
        if xs[-1] == a:
            lows[head] = val
        else:
            highs[head] = val
    slope = {head: (highs[head] - lows[head]) * Cyc.rational(
        Fraction(1) / (b - a), p) for head in lows}
    const = {head: lows[head] - slope[head] * Cyc.rational(a, p)
             for head in lows}
    out = {}
    for key, c in _solve_multilinear(const, nvars - 1, p).items():
        out[key] = c
    for key, c in _solve_multilinear(slope, nvars - 1, p).items():
        out[key | {nvars - 1}] = c
    return out


def _certify(alg, f, exp: GermExpansion) -> bool:
    """Out-of-sample checks at deeper valuations and varied unit parts."""
    S1, S2 = alg.S1(), alg.S2()
    N = exp.radius
    for signs in itertools.product((1, -1), repeat=len(S1)):
        for shift in (2, 3):
            coords = []
            si = 0
            for i in range(alg.m):
                fac = alg.factors[i]
                if i in S1:
                    coords.append(deep_element(fac, N + shift, signs[si]))
                    si += 1
                else:
                    coords.append(fac.uniformizer() ** (N * fac.e + shift))
            eps = alg.element(coords)
            if torus_orbit_integral(alg, f, eps) != exp.predict(eps):
                return False
    return True


# ---------------------------------------------------------------------------
# rank-1 multiplicative reductions


def _rank1_zeta(lf: LocalField, f: StepFunction, gamma, v, vs,
                sigma) -> ZetaElement:
    """The zeta element of int f(gamma, t v, t^{-1} vs) chi(t)|t|^{sigma s} dt
    for f on F x F x F; a zero v (resp. vs) pins that argument to 0."""
    g = f.translate((Fraction(gamma), Fraction(0), Fraction(0)))
    g = g.restrict_zero([0])
    sv = Fraction(v) if v else Fraction(1)
    sw = Fraction(vs) if vs else Fraction(1)
    g = g.affine_pullback([[sv, Fraction(0)], [Fraction(0), sw]])
    alg = EtaleAlgebra(lf, [LineFactor(lf, Fraction(gamma))])
    mode = FactorMode(slot1=bool(v), slot2=bool(vs), sigma=sigma, char=True)
    return mult_zeta(alg, g, [mode])


def gl_orbit_integral(lf: LocalField, f: StepFunction, d) -> Cyc:
    """Orbit integral of a regular semisimple rank-1 triple:
    int over F^x of f(gamma, t v, v* t^{-1}) chi(t) dt (a finite sum)."""
    if d.n != 1:
        raise NotImplementedError("regular semisimple orbit integrals "
                                  "implemented at rank 1")
    if not d.is_rss():
        raise ValueError("triple is not regular semisimple")
    z = _rank1_zeta(lf, f, d.gamma[0][0], d.v[0], d.vstar[0], 0)
    return z.value_at_one()


def nilpotent_orbit_integral_gl(lf: LocalField, f: StepFunction, d) -> Cyc:
    """Orbit integral of a gamma-nilpotent triple, by evaluating the
    |t|^{+-s}-regularized torus integral at s = 0.

    Rank 1: exactly one of v, v* is nonzero; the group is its own torus.
    Rank 2: gamma diagonal with distinct rational eigenvalues, v = (v1, 0)
    and v* = (0, v2*); the Iwasawa decomposition reduces the integral to a
    compact chi-weighted average, a unipotent (additive) integration and a
    two-factor torus zeta integral.
    """
    if d.n == 1:
        v, vs = d.v[0], d.vstar[0]
        if bool(v) == bool(vs):
            raise ValueError("exactly one of v, v* must vanish")
        sigma = 1 if v else -1
        z = _rank1_zeta(lf, f, d.gamma[0][0], v, vs, sigma)
        return z.value_at_one()
    if d.n != 2:
        raise NotImplementedError("nilpotent orbit integrals implemented "
                                  "at rank <= 2")
    g = d.gamma
    if g[0][1] or g[1][0] or g[0][0] == g[1][1]:
        raise ValueError("gamma must be diagonal with distinct eigenvalues")
    l1, l2 = g[0][0], g[1][1]
    v1, v2 = d.v
    w1, w2 = d.vstar
    if not (v1 and w2) or v2 or w1:
        raise NotImplementedError("rank-2 engine needs v = (v1, 0) and "
                                  "v* = (0, v2*)")
    fK = chi_average_compact(lf, f)
    h = fK.translate((l1, Fraction(0), Fraction(0), l2,
                      Fraction(0), Fraction(0), Fraction(0), Fraction(0)))
    h = h.restrict_zero([0, 2, 3])  # pin x11, x21, x22; coords (u,v1,v2,w1,w2)
    scales = (l2 - l1, v1, Fraction(1), Fraction(1), w2)
    diag = [[scales[i] if i == j else Fraction(0) for j in range(5)]
            for i in range(5)]
    h = h.affine_pullback(diag)
    h = h.partial_integrate([0])  # the unipotent coordinate
    alg = EtaleAlgebra(lf, [LineFactor(lf, l1), LineFactor(lf, l2)])
    pos = [None, None]
    for i, fac in enumerate(alg.factors):
        pos[0 if fac.root == l1 else 1] = i
    # reorder (v1, v2, w1, w2) into the algebra's (slot1, slot1, slot2, slot2)
    perm = [None] * 4
    perm[pos[0]] = 0
    perm[pos[1]] = 1
    perm[2 + pos[0]] = 2
    perm[2 + pos[1]] = 3
    P = [[Fraction(1) if perm[i] == j else Fraction(0) for j in range(4)]
         for i in range(4)]
    h = h.affine_pullback(P)
    modes = [None, None]
    modes[pos[0]] = FactorMode(slot2=False, sigma=1, char=True)
    modes[pos[1]] = FactorMode(slot1=False, sigma=-1, char=True)
    return mult_zeta(alg, h, modes).value_at_one()


# ---------------------------------------------------------------------------
# compact chi-weighted averaging and parabolic descent (rank 2)


def _k_quotient_level(f: StepFunction) -> int:
    """A congruence level at which every term's box is stable under the
    compact group action (box level plus center denominator depth)."""
    bound = 1
    for t in f.terms:
        depth = max(0, -min((valuation(c, f.space.lf.p) for c in t.center),
                            default=0))
        bound = max(bound, max(t.levels) + depth)
    return bound


def _k_reps(p: int, m: int):
    """Representatives of GL_2(Z_p) modulo the level-m principal congruence
    subgroup: matrices mod p^m with unit determinant."""
    q = p**m
    for a in range(q):
        for b in range(q):
            for c in range(q):
                for e in range(q):
                    if (a * e - b * c) % p:
                        yield ((Fraction(a), Fraction(b)),
                               (Fraction(c), Fraction(e)))


def _action_matrix_gl2(k):
    """The 8 x 8 matrix of xi -> (k X k^{-1}, k v, v* k^{-1}) in the
    coordinates (x11, x12, x21, x22, v1, v2, w1, w2)."""
    (a, b), (c, e) = k
    det = a * e - b * c
    ki = ((e / det, -b / det), (-c / det, a / det))
    n = 8
    R = [[Fraction(0)] * n for _ in range(n)]
    for r in range(2):
        for s in range(2):
            for i in range(2):
                for j in range(2):
                    R[2 * r + s][2 * i + j] += k[r][i] * ki[j][s]
    for r in range(2):
        for i in range(2):
            R[4 + r][4 + i] = k[r][i]
            R[6 + r][6 + i] = ki[i][r]
    return R


def chi_average_compact(lf: LocalField, f: StepFunction,
                        level: int | None = None,
                        certify: bool = True) -> StepFunction:
    """The chi(det k)-weighted average of f over the maximal compact
    subgroup acting on gl_2 x V x V*, computed over a finite congruence
    quotient and optionally certified by a covariance spot check."""
    if f.space.dim != 8:
        raise ValueError("expected a function on gl_2 x V x V*")
    m = level if level is not None else _k_quotient_level(f)
    p = lf.p
    terms = []
    count = 0
    for k in _k_reps(p, m):
        det = k[0][0] * k[1][1] - k[0][1] * k[1][0]
        w = Cyc.rational(Fraction(lf.chi(det)), p)
        terms.extend(f.affine_pullback(_action_matrix_gl2(k)).scale(w).terms)
        count += 1
    total = StepFunction(f.space, terms)
    fK = total.scale(Cyc.rational(Fraction(1, count), p))
    if certify:
        pts = [tuple(Fraction((7 * i + 3 * j + i * j) % 5 - 2)
                     for j in range(8)) for i in range(8)]
        pts += [tuple(Fraction((7 * i + 3 * j + i * j) % (p**2), p)
                      for j in range(8)) for i in range(3)]
        pts += [tuple(Fraction(0) for _ in range(8))]
        for k in (((Fraction(1), Fraction(1)), (Fraction(1), Fraction(2))),
                  ((Fraction(2), Fraction(1)), (Fraction(p), Fraction(1)))):
            det = k[0][0] * k[1][1] - k[0][1] * k[1][0]
            R = _action_matrix_gl2(k)
            w = Cyc.rational(Fraction(lf.chi(det)), p)
            for x in pts:
                y = tuple(sum(R[i][j] * x[j] for j in range(8))
                          for i in range(8))
                if fK.eval(y) != fK.eval(x) * w:
                    raise ArithmeticError("compact averaging level too coarse")
    return fK


def parabolic_descent(lf: LocalField, f: StepFunction,
                      level: int | None = None,
                      certify: bool = True) -> StepFunction:
    """The descent of f along the (1,1) block decomposition: chi-weighted
    compact average, lower-left block pinned to 0, upper-right block
    integrated out.  Output coordinates: (x11, x22, v1, v2, w1, w2)."""
    fK = chi_average_compact(lf, f, level=level, certify=certify)
    h = fK.restrict_zero([2])
    return h.partial_integrate([1])


# ---------------------------------------------------------------------------
# unitary orbit integrals at rank 1


def unitary_orbit_integral(lf: LocalField, f: StepFunction, delta, w,
                           max_level: int = 16) -> Cyc:
    """int over U(1) of f(delta, g w) dg for f on F x E, with total mass 1;
    computed by congruence-coset averaging at a stabilized level."""
    from .etale import u1_cosets, squarefree_kernel
    d0 = Fraction(squarefree_kernel(lf.tau))
    s = _ratsqrt(lf.tau / d0)
    if not isinstance(w, Q2):
        w = Q2(d0, Fraction(w), Fraction(0))
    prev = None
    k = 1
    while k <= max_level:
        acc = Cyc.zero(lf.p)
        reps = u1_cosets(lf, k)
        for z in reps:
            z0 = Q2(d0, z.a, z.b * s)
            zw = z0 * w
            acc = acc + f.eval((delta, zw.a, zw.b))
        val = acc * Cyc.rational(Fraction(1, len(reps)), lf.p)
        if prev is not None and val == prev:
            return val
        prev = val
        k += 1
    raise ArithmeticError("unitary average did not stabilize")


def _ratsqrt(x: Fraction) -> Fraction:
    from math import isqrt
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise ValueError("not a rational square")
    return Fraction(rn, rd)


# ---------------------------------------------------------------------------
# Weil indices


def weil_index(lf: LocalField, a) -> Cyc:
    """The normalized Weil index of the quadratic form a x^2: the phase of
    the stabilized-lattice integral int psi(a x^2) dx, an eighth root of
    unity."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("nondegenerate form required")
    p = lf.p
    # the index only depends on the square class of the coefficient
    a = lf.square_class_rep(a)
    v = valuation(a, p)
    m = max(1, -(-(2 - v) // 2))
    i_m = _phase_sum(lf, a, m)
    if i_m != _phase_sum(lf, a, m + 1):
        raise ArithmeticError("lattice sum did not stabilize")
    rho_sq = (i_m * i_m.conj()).as_rational()
    if rho_sq is None or rho_sq <= 0:
        raise ArithmeticError("phase-sum norm is not a positive rational")
    w = valuation(rho_sq, p)
    root = _ratsqrt(rho_sq / Fraction(p) ** w)
    if w % 2 == 0:
        rho_inv = Cyc.rational(1 / (root * Fraction(p) ** (w // 2)), p)
    else:
        rho_inv = sqrt_p(p) * Cyc.rational(
            1 / (root * Fraction(p) ** ((w + 1) // 2)), p)
    gamma = i_m * rho_inv
    if gamma * gamma.conj() != Cyc.one(p):
        raise ArithmeticError("normalized index is not unitary")
    return gamma


def _phase_sum(lf: LocalField, a: Fraction, m: int) -> Cyc:
    """int over p^{-m} Z_p of psi(a x^2) dx as an exact finite sum."""
    p = lf.p
    v = valuation(a, p)
    r = max(0, m - v, -(-(-v) // 2))
    total = Cyc.zero(p)
    q = Fraction(1, p**m)
    for j in range(p ** (m + r)):
        x = Fraction(j) * q
        total = total + lf.psi(a * x * x)
    return total * Cyc.rational(Fraction(1, p**r), p)


def weil_index_form(lf: LocalField, coeffs) -> Cyc:
    """Weil index of the diagonal form sum a_i x_i^2 (product of the
    one-variable indices)."""
    out = Cyc.one(lf.p)
    for a in coeffs:
        out = out * weil_index(lf, a)
    return out
