"""Quivers with relations attached to a parabolic subgroup.

Vertices are dominant integral weights for the parabolic inside a finite
window.  Arrows go from a weight to that weight plus a nilradical root
(Sigma-height strictly drops along every arrow):

  - when every factor is of type A/D/E, or the parabolic is a Borel, there
    is exactly one arrow per nilradical root whose head stays dominant
    (closed form);
  - otherwise arrow multiplicities come from the character tables.

Relation regimes:

  - ``borel-closed-form``: for a Borel, one relation per (tail, unordered
    pair of distinct nilradical roots) landing in the window, with terms
    (path via the first root) - (path via the second root) minus the
    Chevalley constant times the single arrow along the sum when the sum
    is again a root.  Terms whose arrows leave the window are dropped.
  - ``abelian-commuting-squares``: nilradical abelian and all arrow
    multiplicities one; a commuting square with coefficients (+1, -1) is
    emitted for every tail and root pair with all four vertices dominant,
    inside the window, and a positive relation count from the exterior
    square table.
  - ``unsupported-general-relations``: anything else; the arrow and
    relation multiplicity tables are attached instead of explicit
    relations.

Paths are stored as tuples of arrow ids in application order: the first id
acts first.  Exports: deterministic JSON (round-trips losslessly) and DOT
with vertices ranked by Sigma-height.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from . import charring
from .errors import DomainError
from .parabolic import ParabolicDatum
from .rootsys import RootSystem


class VertexWindow:
    """Finite vertex region: a coordinate box or an explicit weight list."""

    def __init__(self, kind, lo=None, hi=None, weights=None):
        self.kind = kind
        self.lo = tuple(lo) if lo is not None else None
        self.hi = tuple(hi) if hi is not None else None
        self.weights = tuple(tuple(w) for w in weights) if weights is not None else None

    @classmethod
    def box(cls, lo, hi):
        lo, hi = tuple(lo), tuple(hi)
        if len(lo) != len(hi) or any(a > b for a, b in zip(lo, hi)):
            raise DomainError("bad box bounds")
        return cls("box", lo=lo, hi=hi)

    @classmethod
    def explicit(cls, weights):
        return cls("explicit", weights=weights)

    @classmethod
    def default(cls, rank: int, radius: int = 9):
        return cls.box((-radius,) * rank, (radius,) * rank)

    def contains(self, w) -> bool:
        if self.kind == "box":
            return all(a <= x <= b for x, a, b in zip(w, self.lo, self.hi))
        return tuple(w) in self.weights

    def vertices(self, P: ParabolicDatum) -> list:
        if self.kind == "box":
            if len(self.lo) != P.rs.rank:
                raise DomainError("window rank does not match the root system")
            out = [w for w in product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))
                   if P.is_dominant(w)]
        else:
            out = [P.check_vertex(w) for w in self.weights]
            if len(set(out)) != len(out):
                raise DomainError("duplicate window vertices")
        return sorted(out, key=P.vertex_key)

    def to_json(self):
        if self.kind == "box":
            return {"kind": "box", "lo": list(self.lo), "hi": list(self.hi)}
        return {"kind": "explicit", "weights": [list(w) for w in self.weights]}

    @classmethod
    def from_json(cls, d):
        if d["kind"] == "box":
            return cls.box(d["lo"], d["hi"])
        return cls.explicit(d["weights"])


class Arrow:
    __slots__ = ("aid", "tail", "head", "root", "index")

    def __init__(self, aid, tail, head, root, index):
        self.aid = aid
        self.tail = tuple(tail)
        self.head = tuple(head)
        self.root = tuple(root) if root is not None else None  # nilradical root, simple coords
        self.index = index

    def __repr__(self):
        return f"Arrow({self.aid}: {self.tail}->{self.head})"


class Relation:
    """Linear combination of parallel paths that every representation kills."""

    __slots__ = ("vertex", "target", "pair", "terms")

    def __init__(self, vertex, target, pair, terms):
        self.vertex = tuple(vertex)
        self.target = tuple(target)
        self.pair = (tuple(pair[0]), tuple(pair[1]))
        self.terms = tuple((c, tuple(path)) for c, path in terms)


class Quiver:
    def __init__(self, P, window, vertices, arrows, relations, status,
                 boundary, n, mult_tables=None):
        self.P = P
        self.window = window
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.relations = tuple(relations)
        self.status = status
        self.boundary = tuple(boundary)
        self.n = dict(n)
        self.mult_tables = mult_tables
        self._by_id = {a.aid: a for a in self.arrows}

    def arrow(self, aid: str) -> Arrow:
        return self._by_id[aid]

    def arrows_from(self, v):
        v = tuple(v)
        return [a for a in self.arrows if a.tail == v]

    def arrows_into(self, v):
        v = tuple(v)
        return [a for a in self.arrows if a.head == v]


def build_quiver(P: ParabolicDatum, window: VertexWindow = None,
                 with_relations: bool = True) -> Quiver:
    """Construct the quiver with relations on a window of dominant weights."""
    rs = P.rs
    if window is None:
        window = VertexWindow.default(rs.rank)
    vertices = window.vertices(P)
    vset = set(vertices)
    n_map = {v: charring.weyl_dim(P, v) for v in vertices}

    closed = P.is_borel or all(l in ("A", "D", "E") for l, _ in rs.factors)
    raw_arrows = []     # (tail, head, root_simple|None, index)
    boundary = []

    if closed:
        for lam in vertices:
            for gamma in P.nilradical:
                mu = tuple(x + g for x, g in zip(lam, gamma.fw))
                if mu in vset:
                    raw_arrows.append((lam, mu, gamma.simple, 1))
                elif P.is_dominant(mu):
                    boundary.append({"vertex": lam, "direction": "out",
                                     "neighbor": mu, "count": 1})
                nu = tuple(x - g for x, g in zip(lam, gamma.fw))
                if nu not in vset and P.is_dominant(nu):
                    boundary.append({"vertex": lam, "direction": "in",
                                     "neighbor": nu, "count": 1})
    else:
        for lam in vertices:
            for mu, m in sorted(charring._out_table(P, lam).items()):
                if mu in vset:
                    for k in range(1, m + 1):
                        raw_arrows.append((lam, mu, None, k))
                else:
                    boundary.append({"vertex": lam, "direction": "out",
                                     "neighbor": mu, "count": m})
            for nu, m in sorted(charring._in_table(P, lam).items()):
                if nu not in vset:
                    boundary.append({"vertex": lam, "direction": "in",
                                     "neighbor": nu, "count": m})

    key = P.vertex_key
    raw_arrows.sort(key=lambda t: (key(t[0]), key(t[1]), t[3]))
    arrows = [Arrow(f"a{i}", tail, head, root, idx)
              for i, (tail, head, root, idx) in enumerate(raw_arrows)]
    boundary.sort(key=lambda b: (key(b["vertex"]), b["direction"], key(b["neighbor"])))

    mult_one = all(a.index == 1 for a in arrows)
    abelian = _nilradical_abelian(P)

    status = "unsupported-general-relations"
    relations = []
    mult_tables = None
    if P.is_borel:
        status = "borel-closed-form"
        if with_relations:
            relations = _borel_relations(P, vertices, vset, arrows)
    elif abelian and mult_one:
        status = "abelian-commuting-squares"
        if with_relations:
            relations = _square_relations(P, vertices, vset, arrows)
    else:
        if with_relations:
            mult_tables = _multiplicity_tables(P, vertices)

    return Quiver(P, window, vertices, arrows, relations, status, boundary,
                  n_map, mult_tables)


def _nilradical_abelian(P: ParabolicDatum) -> bool:
    rs = P.rs
    gams = P.nilradical
    for i, g1 in enumerate(gams):
        for g2 in gams[i + 1:]:
            if rs.is_root(tuple(a + b for a, b in zip(g1.simple, g2.simple))):
                return False
    return True


def _gamma_order(P):
    # nilradical roots ordered by the positive order of their negatives
    return sorted(P.nilradical, key=lambda g: ((-g).height, (-g).simple))


def _borel_relations(P, vertices, vset, arrows):
    rs = P.rs
    look = {(a.tail, a.root): a for a in arrows if a.root is not None}
    gammas = _gamma_order(P)
    out = []
    for lam in vertices:
        for i, g1 in enumerate(gammas):
            for g2 in gammas[i + 1:]:
                mu = tuple(x + a + b for x, a, b in zip(lam, g1.fw, g2.fw))
                if mu not in vset:
                    continue
                terms = []
                a1 = look.get((lam, g1.simple))
                mid1 = tuple(x + a for x, a in zip(lam, g1.fw))
                b1 = look.get((mid1, g2.simple))
                if a1 and b1:
                    terms.append((1, (a1.aid, b1.aid)))
                a2 = look.get((lam, g2.simple))
                mid2 = tuple(x + a for x, a in zip(lam, g2.fw))
                b2 = look.get((mid2, g1.simple))
                if a2 and b2:
                    terms.append((-1, (a2.aid, b2.aid)))
                ssum = tuple(a + b for a, b in zip(g1.simple, g2.simple))
                if rs.is_root(ssum):
                    nconst = rs.chevalley(rs.root(g2.simple), rs.root(g1.simple))
                    c = look.get((lam, ssum))
                    if c and nconst:
                        terms.append((-nconst, (c.aid,)))
                if terms:
                    out.append(Relation(lam, mu, (g1.simple, g2.simple), terms))
    return out


def _square_relations(P, vertices, vset, arrows):
    look = {(a.tail, a.head): a for a in arrows}
    gammas = _gamma_order(P)
    out = []
    for lam in vertices:
        for i, g1 in enumerate(gammas):
            for g2 in gammas[i + 1:]:
                mid1 = tuple(x + a for x, a in zip(lam, g1.fw))
                mid2 = tuple(x + a for x, a in zip(lam, g2.fw))
                mu = tuple(x + a for x, a in zip(mid1, g2.fw))
                if not (mu in vset and mid1 in vset and mid2 in vset):
                    continue
                if charring.square_mult(P, mu, lam) <= 0:
                    continue
                a1, b1 = look.get((lam, mid1)), look.get((mid1, mu))
                a2, b2 = look.get((lam, mid2)), look.get((mid2, mu))
                if not (a1 and b1 and a2 and b2):
                    continue
                out.append(Relation(lam, mu, (g1.simple, g2.simple),
                                    [(1, (a1.aid, b1.aid)), (-1, (a2.aid, b2.aid))]))
    return out


def _multiplicity_tables(P, vertices):
    vset = set(vertices)
    arrow_t, square_t = {}, {}
    for mu in vertices:
        for lam, m in sorted(charring._in_table(P, mu).items()):
            if m and lam in vset:
                arrow_t[(lam, mu)] = m
        for lam, m in sorted(charring._square_table(P, mu).items()):
            if m and lam in vset:
                square_t[(lam, mu)] = m
    return {"arrow_mult": arrow_t, "square_mult": square_t}


# ---------------------------------------------------------------------------
# structure checks


class DirectednessReport:
    __slots__ = ("acyclic", "order", "cycle", "graded")

    def __init__(self, acyclic, order, cycle, graded):
        self.acyclic = acyclic
        self.order = tuple(order) if order is not None else None
        self.cycle = tuple(cycle) if cycle is not None else None
        self.graded = graded


def check_directed(Q: Quiver) -> DirectednessReport:
    """Topological certificate, or a concrete cycle when there is one.

    ``graded`` reports whether every arrow strictly lowers Sigma-height,
    which certifies the sort by descending vertex order as topological.
    """
    P = Q.P
    graded = all(P.sigma_height(a.tail) > P.sigma_height(a.head) for a in Q.arrows)
    indeg = {v: 0 for v in Q.vertices}
    outs = {v: [] for v in Q.vertices}
    for a in Q.arrows:
        indeg[a.head] += 1
        outs[a.tail].append(a.head)
    ready = sorted((v for v, d in indeg.items() if d == 0),
                   key=P.vertex_key, reverse=True)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        changed = False
        for w in outs[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
                changed = True
        if changed:
            ready.sort(key=P.vertex_key, reverse=True)
    if len(order) == len(Q.vertices):
        return DirectednessReport(True, order, None, graded)
    # every leftover vertex keeps a predecessor among the leftovers, so
    # walking incoming edges must loop; reverse the walk to orient the cycle
    left = {v for v, d in indeg.items() if d > 0}
    ins = {v: [] for v in left}
    for a in Q.arrows:
        if a.tail in left and a.head in left:
            ins[a.head].append(a.tail)
    path, seen = [], {}
    v = next(iter(sorted(left, key=P.vertex_key)))
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = sorted(ins[v], key=P.vertex_key)[0]
    cycle = path[seen[v]:] + [v]
    cycle.reverse()
    return DirectednessReport(False, None, cycle, graded)


def filtration_order(P: ParabolicDatum, support) -> list:
    """Support weights sorted ascending: the order of the induced filtration."""
    vs = [P.check_vertex(v) for v in support]
    if len(set(vs)) != len(vs):
        raise DomainError("duplicate weights in support")
    return sorted(vs, key=P.vertex_key)


def components(Q: Quiver) -> list:
    """Connected components of the underlying undirected graph."""
    adj = {v: set() for v in Q.vertices}
    for a in Q.arrows:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    seen, out = set(), []
    for v in Q.vertices:
        if v in seen:
            continue
        comp, queue = [], [v]
        seen.add(v)
        while queue:
            u = queue.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        out.append(sorted(comp, key=Q.P.vertex_key))
    out.sort(key=lambda c: Q.P.vertex_key(c[0]))
    return out


# ---------------------------------------------------------------------------
# serialization


def _frac_str(x):
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def quiver_to_json(Q: Quiver) -> dict:
    d = {
        "series": Q.P.rs.series,
        "sigma": sorted(Q.P.sigma),
        "window": Q.window.to_json(),
        "status": Q.status,
        "vertices": [list(v) for v in Q.vertices],
        "n": {",".join(map(str, v)): Q.n[v] for v in Q.vertices},
        "arrows": [{"id": a.aid, "tail": list(a.tail), "head": list(a.head),
                    "index": a.index,
                    **({"root": list(a.root)} if a.root is not None else {})}
                   for a in Q.arrows],
        "relations": [{"vertex": list(r.vertex), "target": list(r.target),
                       "pair": [list(r.pair[0]), list(r.pair[1])],
                       "terms": [{"coeff": _frac_str(c), "path": list(p)}
                                 for c, p in r.terms]}
                      for r in Q.relations],
        "boundary": [{"vertex": list(b["vertex"]), "direction": b["direction"],
                      "neighbor": list(b["neighbor"]), "count": b["count"]}
                     for b in Q.boundary],
    }
    if Q.mult_tables is not None:
        d["arrow_mult"] = [[list(l), list(m), c]
                           for (l, m), c in sorted(Q.mult_tables["arrow_mult"].items())]
        d["square_mult"] = [[list(l), list(m), c]
                            for (l, m), c in sorted(Q.mult_tables["square_mult"].items())]
    return d


def _parse_frac(s):
    f = Fraction(s)
    return int(f) if f.denominator == 1 else f


def quiver_from_json(d: dict) -> Quiver:
    rs = RootSystem(d["series"])
    P = ParabolicDatum(rs, frozenset(d["sigma"]))
    window = VertexWindow.from_json(d["window"])
    vertices = [tuple(v) for v in d["vertices"]]
    arrows = [Arrow(a["id"], a["tail"], a["head"], a.get("root"), a["index"])
              for a in d["arrows"]]
    relations = [Relation(r["vertex"], r["target"], (r["pair"][0], r["pair"][1]),
                          [(_parse_frac(t["coeff"]), t["path"]) for t in r["terms"]])
                 for r in d["relations"]]
    boundary = [{"vertex": tuple(b["vertex"]), "direction": b["direction"],
                 "neighbor": tuple(b["neighbor"]), "count": b["count"]}
                for b in d["boundary"]]
    n = {tuple(int(x) for x in k.split(",")): v for k, v in d["n"].items()}
    mult = None
    if "arrow_mult" in d:
        mult = {"arrow_mult": {(tuple(l), tuple(m)): c for l, m, c in d["arrow_mult"]},
                "square_mult": {(tuple(l), tuple(m)): c for l, m, c in d["square_mult"]}}
    return Quiver(P, window, vertices, arrows, relations, d["status"], boundary, n, mult)


def quiver_to_dot(Q: Quiver) -> str:
    def name(v):
        return '"(' + ",".join(map(str, v)) + ')"'

    lines = ["digraph quiver {", "  rankdir=TB;", "  node [shape=ellipse];"]
    levels = {}
    for v in Q.vertices:
        levels.setdefault(Q.P.sigma_height(v), []).append(v)
    for h in sorted(levels, reverse=True):
        row = " ".join(f"{name(v)};" for v in sorted(levels[h], key=Q.P.vertex_key))
        lines.append(f"  {{ rank=same; {row} }}")
    for a in Q.arrows:
        lines.append(f"  {name(a.tail)} -> {name(a.head)} [label=\"{a.aid}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
