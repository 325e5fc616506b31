"""Locally constant compactly supported functions with exact arithmetic.

A function is a finite sum of phase-box terms

    coeff * psi(lambda . x) * 1_{c + L},

where L is a product over coordinate blocks of pi^l O_i for the block's
ring of integers.  Blocks are either a line (Z_p) or the integers of a
quadratic extension in the basis (1, sqrt(d0)).  This family is closed
under addition, products, translation, monomial linear pullbacks,
integration and Fourier transform, with every operation exact.

The additive measure gives each block's ring of integers volume 1, and the
additive character has level 0, so the Fourier transform is involutive up
to parity flip without volume constants.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import Cyc
from .scalar import INF, LocalField, valuation


# ---------------------------------------------------------------------------
# blocks and spaces


class LineBlock:
    """One coordinate carrying Z_p."""

    dim = 1

    def __init__(self, lf: LocalField):
        self.lf = lf
        self.q = lf.q
        self.f = 1
        self.e = 1

    def shape(self, level: int) -> tuple[int, ...]:
        """Per-coordinate p-power exponents of the box pi^level O."""
        return (level,)

    def val(self, coords) -> int:
        return valuation(coords[0], self.lf.p)

    def descriptor(self):
        return ["line"]

    def __eq__(self, other):
        return isinstance(other, LineBlock) and other.lf == self.lf

    def __repr__(self):
        return "LineBlock"


class QuadBlock:
    """Two coordinates carrying Z_p[sqrt(d0)], d0 squarefree non-square."""

    dim = 2

    def __init__(self, lf: LocalField, d0, ramified: bool):
        self.lf = lf
        self.d0 = Fraction(d0)
        self.ramified = ramified
        self.f = 1 if ramified else 2
        self.e = 2 if ramified else 1
        self.q = lf.q**self.f

    def shape(self, level: int) -> tuple[int, ...]:
        if self.ramified:
            return ((level + 1) // 2, level // 2)
        return (level, level)

    def val(self, coords):
        p = self.lf.p
        va, vb = valuation(coords[0], p), valuation(coords[1], p)
        if self.ramified:
            return min(2 * va, 2 * vb + 1)
        return min(va, vb)

    def descriptor(self):
        return ["quad", str(self.d0), self.ramified]

    def __eq__(self, other):
        return (isinstance(other, QuadBlock) and other.lf == self.lf
                and other.d0 == self.d0 and other.ramified == self.ramified)

    def __repr__(self):
        return f"QuadBlock(d0={self.d0}, ram={self.ramified})"


class Space:
    """An ordered list of coordinate blocks over a fixed base field."""

    def __init__(self, lf: LocalField, blocks):
        self.lf = lf
        self.blocks = list(blocks)
        self.offsets = []
        d = 0
        for b in self.blocks:
            self.offsets.append(d)
            d += b.dim
        self.dim = d

    @staticmethod
    def lines(lf: LocalField, n: int) -> "Space":
        return Space(lf, [LineBlock(lf) for _ in range(n)])

    def block_coords(self, x, i):
        off = self.offsets[i]
        return tuple(x[off:off + self.blocks[i].dim])

    def coord_shapes(self, levels) -> tuple[int, ...]:
        out = []
        for b, l in zip(self.blocks, levels):
            out.extend(b.shape(l))
        return tuple(out)

    def concat(self, other: "Space") -> "Space":
        return Space(self.lf, self.blocks + other.blocks)

    def subspace(self, block_indices) -> "Space":
        return Space(self.lf, [self.blocks[i] for i in block_indices])

    def __eq__(self, other):
        return isinstance(other, Space) and self.blocks == other.blocks

    def __repr__(self):
        return f"Space({self.blocks})"


# ---------------------------------------------------------------------------
# canonical p-adic residues for exact rationals


def frac_mod_one(x: Fraction, p: int) -> Fraction:
    """Canonical representative of x modulo Z_p, in [0,1) with p-power
    denominator."""
    x = Fraction(x)
    e = max(0, -valuation(x, p)) if x else 0
    if e == 0:
        return Fraction(0)
    pe = p**e
    # x = n / (p^e * d') with d' prime to p
    dprime = x.denominator // (p**e)
    n = x.numerator
    r = (n * pow(dprime, -1, pe)) % pe
    return Fraction(r, pe)


def frac_mod_power(x: Fraction, p: int, m: int) -> Fraction:
    """Canonical representative of x modulo p^m Z_p (m of either sign)."""
    pm = Fraction(p) ** m
    return pm * frac_mod_one(Fraction(x) / pm, p)


# ---------------------------------------------------------------------------
# terms and functions


class Term:
    __slots__ = ("coeff", "center", "levels", "phase")

    def __init__(self, coeff: Cyc, center, levels, phase=None):
        self.coeff = coeff
        self.center = tuple(Fraction(c) for c in center)
        self.levels = tuple(int(l) for l in levels)
        if phase is None:
            phase = (Fraction(0),) * len(self.center)
        self.phase = tuple(Fraction(t) for t in phase)

    def __repr__(self):
        return (f"Term({self.coeff!r}, c={self.center}, l={self.levels}, "
                f"ph={self.phase})")


class StepFunction:
    def __init__(self, space: Space, terms=None):
        self.space = space
        self.terms = list(terms or [])

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(space: Space) -> "StepFunction":
        return StepFunction(space, [])

    @staticmethod
    def indicator(space: Space, center, levels, coeff=None, phase=None):
        c = coeff if isinstance(coeff, Cyc) else Cyc.rational(
            1 if coeff is None else coeff, space.lf.p)
        return StepFunction(space, [Term(c, center, levels, phase)])

    # -- evaluation --------------------------------------------------------

    def eval(self, x) -> Cyc:
        x = tuple(Fraction(c) for c in x)
        lf = self.space.lf
        out = Cyc.zero(lf.p)
        for t in self.terms:
            shapes = self.space.coord_shapes(t.levels)
            if all(valuation(xi - ci, lf.p) >= s
                   for xi, ci, s in zip(x, t.center, shapes)):
                ph = sum((l * xi for l, xi in zip(t.phase, x)), Fraction(0))
                out = out + t.coeff * lf.psi(ph)
        return out

    # -- linear structure --------------------------------------------------

    def __add__(self, other: "StepFunction") -> "StepFunction":
        if self.space != other.space:
            raise ValueError("adding functions on different spaces")
        return StepFunction(self.space, self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "StepFunction":
        c = c if isinstance(c, Cyc) else Cyc.rational(c, self.space.lf.p)
        return StepFunction(self.space,
                            [Term(t.coeff * c, t.center, t.levels, t.phase)
                             for t in self.terms])

    def mul_phase(self, lam) -> "StepFunction":
        """Multiply by psi(lam . x)."""
        lam = tuple(Fraction(v) for v in lam)
        return StepFunction(self.space,
                            [Term(t.coeff, t.center, t.levels,
                                  tuple(a + b for a, b in zip(t.phase, lam)))
                             for t in self.terms])

    def translate(self, a) -> "StepFunction":
        """Return g with g(x) = f(x + a)."""
        a = tuple(Fraction(v) for v in a)
        lf = self.space.lf
        out = []
        for t in self.terms:
            ph = sum((l * ai for l, ai in zip(t.phase, a)), Fraction(0))
            out.append(Term(t.coeff * lf.psi(ph),
                            tuple(c - ai for c, ai in zip(t.center, a)),
                            t.levels, t.phase))
        return StepFunction(self.space, out)

    def pointwise_mul(self, other: "StepFunction") -> "StepFunction":
        if self.space != other.space:
            raise ValueError("multiplying functions on different spaces")
        lf = self.space.lf
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                levels = tuple(max(a, b) for a, b in zip(t1.levels, t2.levels))
                ok = True
                center = []
                for i, blk in enumerate(self.space.blocks):
                    c1 = self.space.block_coords(t1.center, i)
                    c2 = self.space.block_coords(t2.center, i)
                    lo = min(t1.levels[i], t2.levels[i])
                    diff = tuple(a - b for a, b in zip(c1, c2))
                    if blk.val(diff) < lo:
                        ok = False
                        break
                    center.extend(c1 if t1.levels[i] >= t2.levels[i] else c2)
                if not ok:
                    continue
                out.append(Term(t1.coeff * t2.coeff, tuple(center), levels,
                                tuple(a + b for a, b in zip(t1.phase, t2.phase))))
        return StepFunction(self.space, out)

    # -- integration -------------------------------------------------------

    def _term_integral(self, t: Term, block_indices) -> Cyc | None:
        """Integral of the term over the chosen blocks' coordinates, or
        None when the oscillating phase kills it."""
        lf = self.space.lf
        val = Cyc.one(lf.p)
        ph = Fraction(0)
        for i in block_indices:
            blk = self.space.blocks[i]
            off = self.space.offsets[i]
            for j, s in enumerate(blk.shape(t.levels[i])):
                lam = t.phase[off + j]
                if lam and valuation(lam, lf.p) < -s:
                    return None
                ph += lam * t.center[off + j]
                val = val * Cyc.rational(Fraction(lf.p) ** (-s), lf.p)
        return val * lf.psi(ph) * t.coeff

    def integrate(self) -> Cyc:
        lf = self.space.lf
        out = Cyc.zero(lf.p)
        allb = range(len(self.space.blocks))
        for t in self.terms:
            v = self._term_integral(t, allb)
            if v is not None:
                out = out + v
        return out

    def partial_integrate(self, block_indices) -> "StepFunction":
        """Integrate out the chosen blocks, leaving a function on the rest."""
        keep = [i for i in range(len(self.space.blocks)) if i not in set(block_indices)]
        sub = self.space.subspace(keep)
        coords_keep = []
        for i in keep:
            off = self.space.offsets[i]
            coords_keep.extend(range(off, off + self.space.blocks[i].dim))
        out = []
        for t in self.terms:
            v = self._term_integral(t, block_indices)
            if v is None:
                continue
            out.append(Term(v,
                            tuple(t.center[j] for j in coords_keep),
                            tuple(t.levels[i] for i in keep),
                            tuple(t.phase[j] for j in coords_keep)))
        return StepFunction(sub, out)

    def restrict_zero(self, block_indices) -> "StepFunction":
        """Set the chosen blocks' coordinates to 0."""
        sel = set(block_indices)
        keep = [i for i in range(len(self.space.blocks)) if i not in sel]
        sub = self.space.subspace(keep)
        coords_keep = []
        for i in keep:
            off = self.space.offsets[i]
            coords_keep.extend(range(off, off + self.space.blocks[i].dim))
        lf = self.space.lf
        out = []
        for t in self.terms:
            ok = True
            for i in sel:
                blk = self.space.blocks[i]
                off = self.space.offsets[i]
                for j, s in enumerate(blk.shape(t.levels[i])):
                    if valuation(t.center[off + j], lf.p) < s:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            out.append(Term(t.coeff,
                            tuple(t.center[j] for j in coords_keep),
                            tuple(t.levels[i] for i in keep),
                            tuple(t.phase[j] for j in coords_keep)))
        return StepFunction(sub, out)

    # -- Fourier transform -------------------------------------------------

    def fourier(self, gram: "MonomialGram | None" = None,
                coords=None) -> "StepFunction":
        """Partial Fourier transform on the marked coordinates:

            F(f)(x) = integral over the marked coordinates of
                      f(y) psi(<x_marked, G y_marked>) dy_marked,

        exact term by term.  The marked coordinates must each fill a line
        block, and G (indexed within the marked coordinates) must be a
        symmetric monomial matrix.  Unmarked coordinates pass through.
        """
        n = self.space.dim
        lf = self.space.lf
        if coords is None:
            coords = list(range(n))
        coords = list(coords)
        marked = set(coords)
        for i, blk in enumerate(self.space.blocks):
            off = self.space.offsets[i]
            span = set(range(off, off + blk.dim))
            if span & marked:
                if not isinstance(blk, LineBlock):
                    raise ValueError("Fourier transform needs line blocks")
        if gram is None:
            gram = MonomialGram.identity(len(coords))
        if len(gram.perm) != len(coords):
            raise ValueError("Gram size mismatch")
        out = []
        for t in self.terms:
            vol = Fraction(1)
            ph_const = Fraction(0)
            center = list(t.center)
            levels = list(t.levels)
            phase = list(t.phase)
            # block index of each marked coordinate (line blocks: 1 coord each)
            for a, ja in enumerate(coords):
                ba = self._block_of_coord(ja)
                vol /= Fraction(lf.p) ** t.levels[ba]
                ph_const += t.phase[ja] * t.center[ja]
            newc = {}
            newl = {}
            newph = {}
            for a, ja in enumerate(coords):
                sa = coords[gram.perm[a]]
                g = gram.scales[a]
                ba = self._block_of_coord(ja)
                # condition (Gx)_a + lambda_a in p^{-k} Z_p on x_{perm(a)}
                newc[sa] = -t.phase[ja] / g
                newl[self._block_of_coord(sa)] = -t.levels[ba] - valuation(g, lf.p)
                newph[ja] = g * t.center[sa]
            for j in newc:
                center[j] = newc[j]
            for b in newl:
                levels[b] = newl[b]
            for j in newph:
                phase[j] = newph[j]
            out.append(Term(t.coeff * Cyc.rational(vol, lf.p) * lf.psi(ph_const),
                            tuple(center), tuple(levels), tuple(phase)))
        return StepFunction(self.space, out)

    def _block_of_coord(self, j: int) -> int:
        for i in range(len(self.space.blocks) - 1, -1, -1):
            if self.space.offsets[i] <= j:
                return i
        raise IndexError(j)

    def parity_flip(self) -> "StepFunction":
        """g(x) = f(-x)."""
        return StepFunction(self.space,
                            [Term(t.coeff, tuple(-c for c in t.center), t.levels,
                                  tuple(-v for v in t.phase))
                             for t in self.terms])

    # -- pullbacks ---------------------------------------------------------

    def affine_pullback(self, mat, shift=None) -> "StepFunction":
        """g(x) = f(A x + b) for invertible rational A (line blocks only)."""
        if any(not isinstance(b, LineBlock) for b in self.space.blocks):
            raise ValueError("affine pullback needs line blocks")
        n = self.space.dim
        lf = self.space.lf
        p = lf.p
        A = [[Fraction(c) for c in row] for row in mat]
        b = tuple(Fraction(c) for c in (shift or [0] * n))
        Ainv = _mat_inverse(A)
        At_lam = lambda lam: tuple(
            sum(A[i][j] * lam[i] for i in range(n)) for j in range(n))
        out = []
        unimodular = (all(valuation(c, p) >= 0 for row in A for c in row)
                      and valuation(_det(A), p) == 0)
        col_of = [next((j for j in range(n) if A[i][j]), None)
                  for i in range(n)]
        monomial = (all(sum(1 for c in row if c) == 1 for row in A)
                    and len(set(col_of)) == n)
        for t in self.terms:
            ph_b = sum((l * bi for l, bi in zip(t.phase, b)), Fraction(0))
            coeff = t.coeff * lf.psi(ph_b)
            phase = At_lam(t.phase)
            cmb = tuple(ci - bi for ci, bi in zip(t.center, b))
            new_center = tuple(
                sum(Ainv[i][j] * cmb[j] for j in range(n)) for i in range(n))
            if unimodular and len(set(t.levels)) == 1:
                out.append(Term(coeff, new_center, t.levels, phase))
                continue
            if monomial:
                # row i reads coordinate col_of[i]: one box maps to one box
                levels = [0] * n
                for i in range(n):
                    levels[col_of[i]] = t.levels[i] - valuation(
                        A[i][col_of[i]], p)
                out.append(Term(coeff, new_center, tuple(levels), phase))
                continue
            # general case: decompose A^{-1} * diag(p^k) Z_p^n into boxes
            B = [[Ainv[i][j] * Fraction(p) ** t.levels[j] for j in range(n)]
                 for i in range(n)]
            for box_center, box_levels in _lattice_boxes(B, p):
                c2 = tuple(a + dd for a, dd in zip(new_center, box_center))
                out.append(Term(coeff, c2, box_levels, phase))
        return StepFunction(self.space, out)

    # -- canonical form and equality ---------------------------------------

    def canonicalize(self) -> "StepFunction":
        """Refine to a common box level per block and merge matching terms."""
        if not self.terms:
            return self
        lf = self.space.lf
        p = lf.p
        nb = len(self.space.blocks)
        levels = tuple(max(t.levels[i] for t in self.terms) for i in range(nb))
        shapes = self.space.coord_shapes(levels)
        acc: dict[tuple, Cyc] = {}
        for t in self.terms:
            tshapes = self.space.coord_shapes(t.levels)
            ranges = [p ** (S - s) for s, S in zip(tshapes, shapes)]
            # canonical phase modulo the dual of the refined box
            lam = tuple(frac_mod_power(v, p, -S) for v, S in zip(t.phase, shapes))
            dlam = tuple(a - b for a, b in zip(t.phase, lam))
            idx = [0] * len(ranges)
            while True:
                center = tuple(
                    frac_mod_power(c + Fraction(p) ** s * k, p, S)
                    for c, s, S, k in zip(t.center, tshapes, shapes, idx))
                ph = sum((dv * c for dv, c in zip(dlam, center)), Fraction(0))
                ph += sum((lv * c for lv, c in zip(lam, center)), Fraction(0))
                # normalize so the stored phase constant is zero at the center:
                # represent the term as coeff' * psi(lam . (x - c)) * 1_box
                key = (center, lam)
                add = t.coeff * lf.psi(ph)
                acc[key] = acc.get(key, Cyc.zero(p)) + add
                j = 0
                while j < len(idx):
                    idx[j] += 1
                    if idx[j] < ranges[j]:
                        break
                    idx[j] = 0
                    j += 1
                else:
                    break
                if j == len(idx):
                    break
        out = []
        for (center, lam), coeff in acc.items():
            if coeff.is_zero():
                continue
            # stored form uses psi(lam . x); undo the centering factor
            ph = sum((lv * c for lv, c in zip(lam, center)), Fraction(0))
            out.append(Term(coeff * lf.psi(-ph), center, levels, lam))
        return StepFunction(self.space, out)

    def is_zero(self) -> bool:
        return not self.canonicalize().terms

    def __eq__(self, other):
        if not isinstance(other, StepFunction) or self.space != other.space:
            return NotImplemented
        return (self - other).is_zero()

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "space": [b.descriptor() for b in self.space.blocks],
            "terms": [{
                "center": [[c.numerator, c.denominator] for c in t.center],
                "level": list(t.levels),
                "phase": [[v.numerator, v.denominator] for v in t.phase],
                "coeff": t.coeff.to_json(),
            } for t in self.terms],
        }

    @staticmethod
    def from_json(data, lf: LocalField) -> "StepFunction":
        blocks = []
        for desc in data["space"]:
            if desc[0] == "line":
                blocks.append(LineBlock(lf))
            else:
                blocks.append(QuadBlock(lf, Fraction(desc[1]), desc[2]))
        space = Space(lf, blocks)
        terms = []
        for td in data["terms"]:
            terms.append(Term(
                Cyc.from_json(td["coeff"], lf.p),
                [Fraction(n, d) for n, d in td["center"]],
                td["level"],
                [Fraction(n, d) for n, d in td.get(
                    "phase", [[0, 1]] * sum(
                        2 if b[0] == "quad" else 1 for b in data["space"]))]))
        return StepFunction(space, terms)

    def __repr__(self):
        return f"StepFunction({len(self.terms)} terms on {self.space})"


class MonomialGram:
    """A symmetric monomial matrix G with G[j, perm[j]] = scales[j]."""

    def __init__(self, perm, scales):
        self.perm = tuple(perm)
        self.scales = tuple(Fraction(s) for s in scales)
        for j, sj in enumerate(self.perm):
            if self.perm[sj] != j or self.scales[sj] != self.scales[j]:
                raise ValueError("Gram matrix not symmetric")

    @staticmethod
    def identity(n: int) -> "MonomialGram":
        return MonomialGram(range(n), [1] * n)

    @staticmethod
    def diagonal(scales) -> "MonomialGram":
        return MonomialGram(range(len(scales)), scales)

    def apply(self, x):
        return tuple(self.scales[j] * x[self.perm[j]] for j in range(len(x)))

    def matrix(self):
        n = len(self.perm)
        out = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            out[j][self.perm[j]] = self.scales[j]
        return out


# ---------------------------------------------------------------------------
# small exact linear algebra over Q and box decompositions over Z_p


def _det(A):
    n = len(A)
    M = [row[:] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = Fraction(1) / M[col][col]
        for r in range(col + 1, n):
            fac = M[r][col] * inv
            if fac:
                M[r] = [a - fac * b for a, b in zip(M[r], M[col])]
    return det


def _mat_inverse(A):
    n = len(A)
    M = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = Fraction(1) / M[col][col]
        M[col] = [a * inv for a in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                fac = M[r][col]
                M[r] = [a - fac * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def smith_zp(B, p: int):
    """Z_p-Smith form: returns (U, d) with B Z_p^n = U diag(p^{d_i}) Z_p^n
    and U in GL_n(Z_p), all entries exact rationals.

    Row operations E on the working matrix are compensated by the column
    operation U -> U E^{-1}, keeping B Z_p^n = U M Z_p^n; column operations
    on M leave the lattice unchanged.
    """
    n = len(B)
    M = [row[:] for row in B]
    U = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i in range(n)]
    d = [0] * n
    for k in range(n):
        best = None
        bv = None
        for i in range(k, n):
            for j in range(k, n):
                if M[i][j]:
                    v = valuation(M[i][j], p)
                    if bv is None or v < bv:
                        bv, best = v, (i, j)
        if best is None:
            raise ValueError("singular lattice matrix")
        bi, bj = best
        if bi != k:
            M[k], M[bi] = M[bi], M[k]
            for row in U:
                row[k], row[bi] = row[bi], row[k]
        for row in M:
            row[k], row[bj] = row[bj], row[k]
        piv = M[k][k]
        # clear the column below using integral multipliers
        for i in range(k + 1, n):
            if M[i][k]:
                fac = M[i][k] / piv
                M[i] = [a - fac * b for a, b in zip(M[i], M[k])]
                for row in U:
                    row[k] += fac * row[i]
        # clear the row to the right (column ops on M only)
        for j in range(k + 1, n):
            if M[k][j]:
                fac = M[k][j] / piv
                for row in M:
                    row[j] -= fac * row[k]
        d[k] = valuation(piv, p)
        # absorb the unit part of the pivot by a unit column op on M
        unit = piv / Fraction(p) ** d[k]
        for row in M:
            row[k] /= unit
    return U, d


def _lattice_boxes(B, p: int):
    """Decompose the lattice B Z_p^n into standard boxes.

    Yields pairs (center, per-coordinate levels) so that the lattice is the
    disjoint union of center + diag(p^levels) Z_p^n.
    """
    n = len(B)
    U, d = smith_zp(B, p)
    # U is in GL_n(Z_p), so p^K Z^n sits inside the lattice once K >= max d
    K = max(d)
    levels = (K,) * n
    ranges = [p ** (K - di) for di in d]
    idx = [0] * n
    while True:
        vec = [Fraction(p) ** di * k for di, k in zip(d, idx)]
        center = tuple(
            sum(U[i][j] * vec[j] for j in range(n)) for i in range(n))
        yield center, levels
        j = 0
        while j < n:
            idx[j] += 1
            if idx[j] < ranges[j]:
                break
            idx[j] = 0
            j += 1
        else:
            break
        if j == n:
            break


def d_needed(c: Fraction, p: int) -> int:
    v = valuation(c, p)
    return max(0, -v) if c else 0
