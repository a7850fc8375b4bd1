"""Characters and multiplicities for Levi-irreducible modules.

Everything is graded by the Levi factor of a parabolic: a character is a
finite multiset of weights (fundamental-weight coordinates -> positive int)
invariant under the Levi Weyl group.  Irreducible characters come from the
multiplicity recursion of Freudenthal run over the Levi positive roots; the
dimension comes independently from the Weyl product formula, and the two are
cross-checked in the tests.

Multiplicity tables for arrows and relations:

  arrow_mult(P, mu, lam)    multiplicity of the lam-irreducible inside
                            (dual nilradical) tensor (mu-irreducible)
  square_mult(P, mu, lam)   same with the exterior square of the dual
                            nilradical in place of the dual nilradical

Decomposition into irreducibles strips greedily at the weight maximal for
(Levi height, Sigma height, lex); Levi height strictly separates
dominance-comparable weights, which makes the greedy sound as well as
terminating.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .errors import DomainError
from .parabolic import ParabolicDatum
from .rootsys import Coords, _mat_inverse

CharacterMap = dict  # weight coords -> positive multiplicity


def weyl_dim(P: ParabolicDatum, lam: Coords) -> int:
    """Dimension of the Levi-irreducible with highest weight lam (Weyl product)."""
    lam = P.check_vertex(lam)
    rs = P.rs
    num, den = Fraction(1), Fraction(1)
    shifted = tuple(l + r for l, r in zip(lam, P.rho_levi))
    for alpha in P.levi_positive:
        num *= rs.pairing(shifted, alpha)
        den *= rs.pairing(P.rho_levi, alpha)
    d = num / den
    if d.denominator != 1 or d <= 0:
        raise AssertionError(f"Weyl dimension {d} is not a positive integer")
    return int(d)


def _dominate(P: ParabolicDatum, w):
    """Levi-dominant representative of a weight under the Levi Weyl group."""
    rs = P.rs
    w = list(w)
    while True:
        for i in P.levi_simple:
            if w[i] < 0:
                c = w[i]
                alpha_fw = rs.simple_roots[i].fw
                for j in range(rs.rank):
                    w[j] -= c * alpha_fw[j]
                break
        else:
            return tuple(w)


def _dominant_multiplicities(P: ParabolicDatum, lam) -> dict:
    """Freudenthal recursion: multiplicities at Levi-dominant weights of lam."""
    rs = P.rs
    simples = P.levi_simple
    if not simples:
        return {tuple(lam): 1}
    # box bound: the drop from lam in Levi simple-root coordinates is at most
    # the inverse Levi Cartan applied to the Levi coordinates of lam
    sub = [[rs.cartan[i][j] for j in simples] for i in simples]
    sub_inv = _mat_inverse(sub)
    fw_levi = [lam[i] for i in simples]
    bounds = []
    for a in range(len(simples)):
        hi = sum(sub_inv[a][b] * fw_levi[b] for b in range(len(simples)))
        bounds.append(int(hi) if hi >= 0 else -1)
    candidates = []
    for drop in product(*(range(b + 1) for b in bounds)):
        w = list(lam)
        for a, k in enumerate(drop):
            if k:
                alpha_fw = rs.simple_roots[simples[a]].fw
                for j in range(rs.rank):
                    w[j] -= k * alpha_fw[j]
        w = tuple(w)
        if all(w[i] >= 0 for i in simples):
            candidates.append((sum(drop), w))
    candidates.sort()
    rho = P.rho_levi
    lam_shift = tuple(x + r for x, r in zip(lam, rho))
    lam_norm = rs.bilinear(lam_shift, lam_shift)
    mult = {}
    for depth, w in candidates:
        if depth == 0:
            mult[w] = 1
            continue
        acc = Fraction(0)
        for alpha in P.levi_positive:
            k = 1
            while True:
                wk = tuple(x + k * a for x, a in zip(w, alpha.fw))
                m = mult.get(_dominate(P, wk), 0)
                if m == 0:
                    break
                acc += m * rs.bilinear(wk, alpha.fw)
                k += 1
        w_shift = tuple(x + r for x, r in zip(w, rho))
        den = lam_norm - rs.bilinear(w_shift, w_shift)
        if den == 0:
            continue
        m = 2 * acc / den
        if m.denominator != 1 or m < 0:
            raise AssertionError("Freudenthal recursion produced a bad multiplicity")
        if m:
            mult[w] = int(m)
    return mult


def _orbit(P: ParabolicDatum, w) -> set:
    rs = P.rs
    seen = {tuple(w)}
    queue = [tuple(w)]
    while queue:
        v = queue.pop()
        for i in P.levi_simple:
            c = v[i]
            if c == 0:
                continue
            alpha_fw = rs.simple_roots[i].fw
            im = tuple(x - c * a for x, a in zip(v, alpha_fw))
            if im not in seen:
                seen.add(im)
                queue.append(im)
    return seen


class _CharCache:
    """Per-parabolic memo for irreducible characters and decompositions."""

    def __init__(self):
        self.chars = {}
        self.out_tables = {}
        self.in_tables = {}
        self.square_tables = {}


_caches: dict = {}


def _cache(P: ParabolicDatum) -> _CharCache:
    key = (P.rs.series, P.sigma)
    if key not in _caches:
        _caches[key] = _CharCache()
    return _caches[key]


def character(P: ParabolicDatum, lam: Coords) -> CharacterMap:
    """Full weight multiset of the Levi-irreducible with highest weight lam."""
    lam = P.check_vertex(lam)
    cache = _cache(P).chars
    if lam in cache:
        return dict(cache[lam])
    out = {}
    for w, m in _dominant_multiplicities(P, lam).items():
        for v in _orbit(P, w):
            out[v] = m
    cache[lam] = out
    return dict(out)


def character_mass(char: CharacterMap) -> int:
    return sum(char.values())


def tensor(c1: CharacterMap, c2: CharacterMap) -> CharacterMap:
    out = {}
    for (w1, m1), (w2, m2) in product(c1.items(), c2.items()):
        w = tuple(x + y for x, y in zip(w1, w2))
        out[w] = out.get(w, 0) + m1 * m2
    return out


def exterior_square(char: CharacterMap) -> CharacterMap:
    """Weights of the exterior square of a module with the given character.

    Equal-weight pairs contribute binomial(m, 2) at the doubled weight;
    distinct weights contribute the plain product.
    """
    out = {}
    items = sorted(char.items())
    for i, (w1, m1) in enumerate(items):
        w = tuple(2 * x for x in w1)
        c = m1 * (m1 - 1) // 2
        if c:
            out[w] = out.get(w, 0) + c
        for w2, m2 in items[i + 1:]:
            w = tuple(x + y for x, y in zip(w1, w2))
            out[w] = out.get(w, 0) + m1 * m2
    return out


def nilradical_char(P: ParabolicDatum) -> CharacterMap:
    """Character of the nilradical opposite to the Levi (one per root)."""
    return {gamma.fw: 1 for gamma in P.nilradical}


def dual_nilradical_char(P: ParabolicDatum) -> CharacterMap:
    return {tuple(-x for x in gamma.fw): 1 for gamma in P.nilradical}


def decompose(P: ParabolicDatum, char: CharacterMap) -> dict:
    """Split a genuine Levi character into irreducible highest weights.

    Returns {highest weight: multiplicity}.  Raises DomainError when the
    input is not a character (negative coefficient or non-dominant top).
    """
    work = {w: m for w, m in char.items() if m}
    for w, m in work.items():
        if m < 0:
            raise DomainError("character has a negative coefficient")
    out = {}
    def key(w):
        return (P.levi_height(w), P.sigma_height(w), w)
    while work:
        top = max(work, key=key)
        if not P.is_dominant(top):
            raise DomainError(f"not a character: maximal weight {top} is not dominant")
        c = work[top]
        out[top] = c
        for w, m in character(P, top).items():
            r = work.get(w, 0) - c * m
            if r < 0:
                raise DomainError(f"not a character: multiplicity underflow at {w}")
            if r:
                work[w] = r
            else:
                work.pop(w, None)
    return out


def _out_table(P: ParabolicDatum, lam: Coords) -> dict:
    """Heads mu of arrows with tail lam: decomposition of nilradical (x) lam."""
    lam = P.check_vertex(lam)
    cache = _cache(P).out_tables
    if lam not in cache:
        cache[lam] = decompose(P, tensor(nilradical_char(P), character(P, lam)))
    return cache[lam]


def _in_table(P: ParabolicDatum, mu: Coords) -> dict:
    """Tails lam of arrows with head mu: decomposition of dual nilradical (x) mu."""
    mu = P.check_vertex(mu)
    cache = _cache(P).in_tables
    if mu not in cache:
        cache[mu] = decompose(P, tensor(dual_nilradical_char(P), character(P, mu)))
    return cache[mu]


def _square_table(P: ParabolicDatum, mu: Coords) -> dict:
    mu = P.check_vertex(mu)
    cache = _cache(P).square_tables
    if mu not in cache:
        cache[mu] = decompose(
            P, tensor(exterior_square(dual_nilradical_char(P)), character(P, mu)))
    return cache[mu]


def arrow_mult(P: ParabolicDatum, mu: Coords, lam: Coords) -> int:
    """Number of arrows lam -> mu: multiplicity of lam inside
    (dual nilradical) tensor (mu-irreducible), equivalently of mu inside
    (nilradical) tensor (lam-irreducible)."""
    return _in_table(P, mu).get(P.check_vertex(lam), 0)


def square_mult(P: ParabolicDatum, mu: Coords, lam: Coords) -> int:
    """Relation count lam -> mu: multiplicity of lam inside
    (exterior square of dual nilradical) tensor (mu-irreducible)."""
    return _square_table(P, mu).get(P.check_vertex(lam), 0)
