"""Root systems of semisimple complex Lie groups, with exact arithmetic.

Weights are tuples of integers (or Fractions where noted) in the
fundamental-weight basis: coordinate i of a weight w is the pairing of w
against the i-th simple coroot.  With that convention dominance and
integrality are coordinate-wise checks, and the fundamental weights are the
standard basis vectors.

The Cartan matrix is stored so that ``cartan[i][j]`` is the pairing of the
j-th simple root against the i-th simple coroot; column j is therefore the
fundamental-weight coordinate vector of the j-th simple root.

Structure constants for a Chevalley basis ([e_a, e_b] = N(a,b) e_{a+b}) are
fixed by choosing the sign +(p+1) on the extraspecial pair of every positive
non-simple root, positive roots being ordered by height and then
lexicographically by simple-root coordinates.  All remaining constants are
forced by antisymmetry, the negation rule N(-a,-b) = -N(a,b), and the two
classical identities for root triples/quadruples summing to zero.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError

Coords = tuple  # weight in fundamental-weight coordinates

_SERIES_RE = re.compile(r"^([ABCDEFG])(\d+)$")

# rank bounds per series letter: (min, max); None means unbounded above
_RANK_BOUNDS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


def parse_series(series: str) -> list[tuple[str, int]]:
    """Parse a series label like ``"A2"`` or ``"B2xA3"`` into factor pairs."""
    if not isinstance(series, str) or not series.strip():
        raise DomainError("empty series label")
    factors = []
    for tok in series.strip().replace(" ", "").upper().split("X"):
        m = _SERIES_RE.match(tok)
        if not m:
            raise DomainError(f"malformed series factor {tok!r}")
        letter, rank = m.group(1), int(m.group(2))
        lo, hi = _RANK_BOUNDS[letter]
        if rank < lo or (hi is not None and rank > hi):
            raise DomainError(f"rank {rank} out of range for series {letter}")
        factors.append((letter, rank))
    return factors


def _cartan_factor(letter: str, n: int) -> list[list[int]]:
    """Cartan matrix of one simple factor, entry (i, j) = <alpha_j, coroot_i>."""
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, cij=-1, cji=-1):
        # c[i][j] = pairing of alpha_j against coroot_i
        c[i][j] = cij
        c[j][i] = cji

    if letter in ("A",):
        for i in range(n - 1):
            link(i, i + 1)
    elif letter == "B":
        # alpha_n short: <alpha_{n-1}, coroot_n> = -2
        for i in range(n - 1):
            link(i, i + 1)
        c[n - 1][n - 2] = -2
    elif letter == "C":
        # alpha_n long: <alpha_n, coroot_{n-1}> = -2
        for i in range(n - 1):
            link(i, i + 1)
        c[n - 2][n - 1] = -2
    elif letter == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif letter == "E":
        # chain 1-3-4-5-6(-7-8), node 2 hangs off node 4 (1-based labels)
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        if n >= 7:
            edges.append((5, 6))
        if n == 8:
            edges.append((6, 7))
        for i, j in edges:
            link(i, j)
    elif letter == "F":
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        link(0, 1)
        link(2, 3)
        c[1][2] = -1
        c[2][1] = -2
    elif letter == "G":
        # alpha_1 short, alpha_2 long
        c[0][1] = -3
        c[1][0] = -1
    return c


def _mat_inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class Root:
    """One root: simple-root coordinates, fw coordinates, coroot coordinates."""

    __slots__ = ("simple", "fw", "coroot", "height", "norm2")

    def __init__(self, simple, fw, coroot, norm2):
        self.simple = tuple(simple)
        self.fw = tuple(fw)
        self.coroot = tuple(coroot)
        self.height = sum(self.simple)
        self.norm2 = norm2

    def __repr__(self):
        return f"Root{self.simple}"

    def __eq__(self, other):
        return isinstance(other, Root) and self.simple == other.simple

    def __hash__(self):
        return hash(self.simple)

    def __neg__(self):
        return Root([-x for x in self.simple], [-x for x in self.fw],
                    [-x for x in self.coroot], self.norm2)


class RootSystem:
    """Root system of a (possibly product) semisimple group, exact throughout."""

    def __init__(self, series: str):
        self.factors = parse_series(series)
        self.series = "x".join(f"{l}{n}" for l, n in self.factors)
        self.rank = sum(n for _, n in self.factors)
        self.cartan = self._assemble_cartan()
        self.cartan_inv = _mat_inverse(self.cartan)
        self.factor_of_index = []
        for fi, (_, n) in enumerate(self.factors):
            self.factor_of_index.extend([fi] * n)
        self.d = self._symmetrizer()
        self.simple_roots = self._make_simple_roots()
        self.positive_roots = self._enumerate_positive()
        self.negative_roots = [-r for r in self.positive_roots]
        self.roots = self.positive_roots + self.negative_roots
        self._by_simple = {r.simple: r for r in self.roots}
        self._pos_order = {r.simple: k for k, r in enumerate(self.positive_roots)}
        self._nmemo: dict[tuple, int] = {}
        self._extraspecial: dict[tuple, tuple[Root, Root]] = {}

    # ----- construction ---------------------------------------------------

    def _assemble_cartan(self):
        blocks = [_cartan_factor(l, n) for l, n in self.factors]
        n = self.rank
        c = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            k = len(b)
            for i in range(k):
                for j in range(k):
                    c[off + i][off + j] = b[i][j]
            off += k
        return tuple(tuple(row) for row in c)

    def _symmetrizer(self):
        # d_i = half squared length of alpha_i; d_i * cartan[i][j] symmetric.
        d = [None] * self.rank
        for start in range(self.rank):
            if d[start] is not None:
                continue
            d[start] = Fraction(1)
            queue = [start]
            while queue:
                i = queue.pop()
                for j in range(self.rank):
                    if i != j and self.cartan[i][j] != 0 and d[j] is None:
                        d[j] = d[i] * self.cartan[i][j] / self.cartan[j][i]
                        queue.append(j)
        return tuple(d)

    def _norm2_of_simple_coords(self, simple) -> Fraction:
        total = Fraction(0)
        for i, ci in enumerate(simple):
            if ci == 0:
                continue
            for j, cj in enumerate(simple):
                if cj == 0:
                    continue
                total += ci * cj * self.d[i] * self.cartan[i][j]
        return total

    def _root_from_simple(self, simple) -> Root:
        n = self.rank
        fw = tuple(sum(self.cartan[i][j] * simple[j] for j in range(n)) for i in range(n))
        norm2 = self._norm2_of_simple_coords(simple)
        # coroot of a = sum_i c_i d_i / d_a * coroot_i, d_a = norm2 / 2
        da = norm2 / 2
        coroot = []
        for i, ci in enumerate(simple):
            e = Fraction(ci) * self.d[i] / da
            if e.denominator != 1:
                raise AssertionError("coroot coordinates must be integral")
            coroot.append(int(e))
        return Root(simple, fw, coroot, norm2)

    def _make_simple_roots(self):
        roots = []
        for i in range(self.rank):
            simple = tuple(1 if j == i else 0 for j in range(self.rank))
            roots.append(self._root_from_simple(simple))
        return roots

    def _enumerate_positive(self):
        """Close the simple roots under root strings, level by level in height."""
        found = {r.simple: r for r in self.simple_roots}
        level = list(self.simple_roots)
        out = list(self.simple_roots)
        while level:
            nxt = []
            for beta in level:
                for i, alpha in enumerate(self.simple_roots):
                    cand = tuple(b + a for b, a in zip(beta.simple, alpha.simple))
                    if cand in found:
                        continue
                    # beta + alpha_i is a root iff p - <beta, coroot_i> > 0,
                    # p = length of the alpha_i string below beta
                    p = 0
                    cur = tuple(b - a for b, a in zip(beta.simple, alpha.simple))
                    while cur in found or all(x == 0 for x in cur):
                        if all(x == 0 for x in cur):
                            break
                        p += 1
                        cur = tuple(c - a for c, a in zip(cur, alpha.simple))
                    if p - beta.fw[i] > 0:
                        r = self._root_from_simple(cand)
                        found[cand] = r
                        nxt.append(r)
            out.extend(nxt)
            level = nxt
        out.sort(key=lambda r: (r.height, r.simple))
        return out

    # ----- queries ---------------------------------------------------------

    def root(self, simple) -> Root:
        r = self._by_simple.get(tuple(simple))
        if r is None:
            raise DomainError(f"{tuple(simple)} is not a root")
        return r

    def is_root(self, simple) -> bool:
        return tuple(simple) in self._by_simple

    def pairing(self, weight: Coords, root: Root):
        """Pairing of a weight (fw coordinates) against the coroot of ``root``."""
        if len(weight) != self.rank:
            raise DomainError("weight has wrong rank")
        return sum(e * w for e, w in zip(root.coroot, weight))

    def simple_coords(self, weight: Coords) -> tuple[Fraction, ...]:
        """Expand a weight in the simple-root basis (rational in general)."""
        if len(weight) != self.rank:
            raise DomainError("weight has wrong rank")
        return tuple(sum(self.cartan_inv[i][j] * weight[j] for j in range(self.rank))
                     for i in range(self.rank))

    def bilinear(self, w1: Coords, w2: Coords) -> Fraction:
        """Invariant symmetric form on weights, normalized per factor by d."""
        n1 = self.simple_coords(w1)
        return sum(Fraction(n1[i]) * self.d[i] * w2[i] for i in range(self.rank))

    @property
    def rho(self) -> Coords:
        return tuple(1 for _ in range(self.rank))

    # ----- Chevalley structure constants ------------------------------------

    def _pos_key(self, r: Root):
        return (r.height, r.simple)

    def root_string_p(self, a: Root, b: Root) -> int:
        """Largest k >= 0 with b - k*a a root."""
        p = 0
        cur = tuple(x - y for x, y in zip(b.simple, a.simple))
        while cur in self._by_simple:
            p += 1
            cur = tuple(x - y for x, y in zip(cur, a.simple))
        return p

    def extraspecial_pair(self, gamma: Root) -> tuple[Root, Root]:
        """The minimal decomposition gamma = a + b with 0 < a < b positive roots."""
        key = gamma.simple
        hit = self._extraspecial.get(key)
        if hit is not None:
            return hit
        best = None
        for a in self.positive_roots:
            if self._pos_key(a) >= self._pos_key(gamma):
                break
            rem = tuple(g - x for g, x in zip(gamma.simple, a.simple))
            b = self._by_simple.get(rem)
            if b is None or b.height <= 0:
                continue
            if self._pos_key(a) < self._pos_key(b):
                best = (a, b)
                break
        if best is None:
            raise AssertionError(f"no special pair for {gamma}")
        self._extraspecial[key] = best
        return best

    def chevalley(self, a: Root, b: Root) -> int:
        """Structure constant N(a, b) with [e_a, e_b] = N(a, b) e_{a+b}.

        Returns 0 when a + b is neither a root nor zero, and 0 on opposite
        pairs (whose bracket lands in the Cartan subalgebra instead).
        """
        s = tuple(x + y for x, y in zip(a.simple, b.simple))
        if s not in self._by_simple:
            return 0
        key = (a.simple, b.simple)
        hit = self._nmemo.get(key)
        if hit is not None:
            return hit
        val = self._chevalley_compute(a, b)
        self._nmemo[key] = val
        q = self.root_string_p(a, b) + 1
        if abs(val) != q:
            raise AssertionError(f"constant for {a},{b} has size {val}, expected {q}")
        return val

    def _chevalley_compute(self, a: Root, b: Root) -> int:
        if a.height < 0 and b.height < 0:
            return -self.chevalley(-a, -b)
        if a.height > 0 and b.height > 0:
            if self._pos_key(a) > self._pos_key(b):
                return -self.chevalley(b, a)
            gamma = self._by_simple[tuple(x + y for x, y in zip(a.simple, b.simple))]
            ap, bp = self.extraspecial_pair(gamma)
            if (ap.simple, bp.simple) == (a.simple, b.simple):
                return self.root_string_p(ap, bp) + 1
            return self._special_from_extraspecial(a, b, gamma, ap, bp)
        # mixed signs: rotate the zero-sum triple (a, b, z) to a same-sign pair
        if a.height < 0:
            return -self.chevalley(b, a)
        z = self._by_simple[tuple(-(x + y) for x, y in zip(a.simple, b.simple))]
        if z.height < 0:
            val = Fraction(z.norm2, a.norm2) * self.chevalley(b, z)
        else:
            val = Fraction(z.norm2, b.norm2) * self.chevalley(z, a)
        if val.denominator != 1:
            raise AssertionError("non-integral structure constant")
        return int(val)

    def _special_from_extraspecial(self, a, b, gamma, ap, bp) -> int:
        # quadruple (bp, -a, ap, -b) sums to zero, no two opposite
        total = Fraction(0)
        diff1 = tuple(x - y for x, y in zip(bp.simple, a.simple))
        if diff1 in self._by_simple:
            r1 = self._by_simple[diff1]
            total += Fraction(self.chevalley(bp, -a) * self.chevalley(ap, -b), r1.norm2)
        diff2 = tuple(x - y for x, y in zip(ap.simple, a.simple))
        if diff2 in self._by_simple:
            r2 = self._by_simple[diff2]
            total += Fraction(self.chevalley(-a, ap) * self.chevalley(bp, -b), r2.norm2)
        val = gamma.norm2 * total / self.chevalley(ap, bp)
        if val.denominator != 1:
            raise AssertionError("non-integral structure constant")
        return int(val)

    def chevalley_constants(self) -> dict[tuple, int]:
        """All nonzero N(a, b) keyed by (a.simple, b.simple)."""
        out = {}
        for a, b in itertools.permutations(self.roots, 2):
            n = self.chevalley(a, b)
            if n != 0:
                out[(a.simple, b.simple)] = n
        return out

    # ----- helpers for weights ---------------------------------------------

    def check_integral(self, weight: Coords) -> tuple[int, ...]:
        if len(weight) != self.rank:
            raise DomainError("weight has wrong rank")
        out = []
        for x in weight:
            f = Fraction(x)
            if f.denominator != 1:
                raise DomainError(f"weight {tuple(weight)} is not integral")
            out.append(int(f))
        return tuple(out)


def build_root_system(series: str) -> RootSystem:
    return RootSystem(series)
