"""Quiver representations with exact stability decisions at desk scale.

A representation assigns a finite-dimensional space to each vertex and a
matrix to each arrow.  Everything is exact: entries live either in the
rationals ("Q") or in a prime field ("Fp:5").  Point-base bookkeeping:

  deg(R) = sum over vertices of (n_lam * degree_lam - tau'_lam * rank_lam)
  slope  = deg / sum of n_lam * rank_lam

with decorations (rank, degree) when present, else (dim, 0).

Stability is decided over a prime field by exhaustive subspace
enumeration (RREF canonical forms per vertex, arrow-invariance filtering
with early pruning along the vertex order).  Rational representations are
reduced mod p first, auto-incrementing p past any denominator it cannot
invert.  The enumeration is exact for the reduced representation; the
relation of that verdict to the rational one is a small-height heuristic,
which is why fixtures are authored over the prime field or with small
integer matrices.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from .errors import DomainError
from .quiverbuild import Quiver

DEFAULT_PRIME = 5


# ---------------------------------------------------------------------------
# fields


class QQ:
    """Exact rationals."""

    tag = "Q"

    @staticmethod
    def convert(x):
        try:
            return Fraction(x)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational entry: {x!r}") from exc

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def inv(x):
        return 1 / x


class GF:
    """Prime field of order p; elements are ints in range(p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.tag = f"Fp:{p}"
        self.zero = 0
        self.one = 1 % p

    def convert(self, x):
        if isinstance(x, int):
            return x % self.p
        f = Fraction(x)
        if f.denominator % self.p == 0:
            raise NonInvertible(f"denominator {f.denominator} not a unit mod {self.p}")
        return (f.numerator * pow(f.denominator, -1, self.p)) % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError
        return pow(x, -1, self.p)


class NonInvertible(ArithmeticError):
    pass


def field_from_tag(tag: str):
    if tag == "Q":
        return QQ
    if tag.startswith("Fp:"):
        return GF(int(tag.split(":", 1)[1]))
    raise DomainError(f"unknown field tag {tag!r}")


# ---------------------------------------------------------------------------
# dense exact matrices as lists of rows


def zeros(rows, cols, field):
    return [[field.zero] * cols for _ in range(rows)]


def mat_mul(A, B, field):
    if not A or not B:
        return [[field.zero] * (len(B[0]) if B else 0) for _ in A]
    n, k, m = len(A), len(B), len(B[0])
    out = zeros(n, m, field)
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a == field.zero:
                continue
            Bt = B[t]
            for j in range(m):
                row[j] = row[j] + a * Bt[j] if field is QQ else (row[j] + a * Bt[j]) % field.p
    return out


def mat_scale_add(acc, coeff, M, field):
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            v = acc[i][j] + coeff * x
            acc[i][j] = v if field is QQ else v % field.p
    return acc


def rref(M, field):
    """Row-reduce a copy of M; return (reduced, pivot column list)."""
    A = [list(r) for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if A[i][c] != field.zero), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = field.inv(A[r][c])
        A[r] = [x * inv if field is QQ else (x * inv) % field.p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != field.zero:
                f = A[i][c]
                A[i] = [x - f * y if field is QQ else (x - f * y) % field.p
                        for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def mat_rank(M, field):
    return len(rref(M, field)[1])


def columns_contain(basis_cols, vec_cols, field):
    """Do the columns of vec_cols lie in the span of the columns of basis_cols?"""
    if not vec_cols or not vec_cols[0]:
        return True
    joined = [b + v for b, v in zip(basis_cols, vec_cols)] if basis_cols else vec_cols
    base_rank = mat_rank(_transpose(basis_cols), field) if basis_cols else 0
    return mat_rank(_transpose(joined), field) == base_rank


def _transpose(M):
    return [list(col) for col in zip(*M)] if M and M[0] else []


def solve_in_span(basis_cols, target_col, field):
    """Coefficients x with basis_cols @ x = target_col, or None."""
    n = len(target_col)
    k = len(basis_cols[0]) if basis_cols and basis_cols[0] else 0
    if k == 0:
        return [] if all(t == field.zero for t in target_col) else None
    aug = [[basis_cols[i][j] for j in range(k)] + [target_col[i]] for i in range(n)]
    red, pivots = rref(aug, field)
    if k in pivots:
        return None
    x = [field.zero] * k
    for r, c in enumerate(pivots):
        x[c] = red[r][k]
    return x


# ---------------------------------------------------------------------------
# representations


class QuiverRep:
    """Spaces on vertices, matrices on arrows, optional sheaf decorations."""

    def __init__(self, quiver: Quiver, dims: dict, maps: dict, field="Q",
                 decorations=None):
        self.quiver = quiver
        self.field = field_from_tag(field) if isinstance(field, str) else field
        given = {tuple(v): int(d) for v, d in dims.items()}
        unknown = set(given) - set(quiver.vertices)
        if unknown:
            raise DomainError(f"dims given for non-vertices {sorted(unknown)}")
        if any(d < 0 for d in given.values()):
            raise DomainError("negative dimension")
        self.dims = {v: given.get(v, 0) for v in quiver.vertices}
        self.maps = {}
        for a in quiver.arrows:
            rows, cols = self.dims[a.head], self.dims[a.tail]
            M = maps.get(a.aid)
            if M is None:
                M = zeros(rows, cols, self.field)
            else:
                M = [[self.field.convert(x) for x in row] for row in M]
                if len(M) != rows or any(len(r) != cols for r in M):
                    raise DomainError(
                        f"map {a.aid} must be {rows}x{cols}, got "
                        f"{len(M)}x{len(M[0]) if M else 0}")
            self.maps[a.aid] = M
        for aid in maps:
            if aid not in self.maps:
                raise DomainError(f"map for unknown arrow {aid!r}")
        self.decorations = None
        if decorations is not None:
            self.decorations = {}
            for v, (rk, dg) in decorations.items():
                v = tuple(v)
                if v not in self.dims:
                    raise DomainError(f"decoration for non-vertex {v}")
                self.decorations[v] = (Fraction(rk), Fraction(dg))

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def rank_degree(self, v):
        if self.decorations is not None and v in self.decorations:
            return self.decorations[v]
        return Fraction(self.dims[v]), Fraction(0)

    def support(self):
        return [v for v in self.quiver.vertices if self.dims[v] > 0]


def check_relations(R: QuiverRep):
    """Evaluate every relation by path composition; list the violations."""
    bad = []
    for rel in R.quiver.relations:
        rows, cols = R.dims[rel.target], R.dims[rel.vertex]
        if rows == 0 or cols == 0:
            continue
        acc = zeros(rows, cols, R.field)
        for coeff, path in rel.terms:
            M = R.maps[path[0]]
            for aid in path[1:]:
                M = mat_mul(R.maps[aid], M, R.field)
            mat_scale_add(acc, R.field.convert(coeff), M, R.field)
        if any(x != R.field.zero for row in acc for x in row):
            bad.append((rel, acc))
    return bad


# ---------------------------------------------------------------------------
# degrees and slopes


def _as_param_map(R, values) -> dict:
    out = {}
    for v, x in values.items():
        v = tuple(v)
        if v not in R.dims:
            raise DomainError(f"parameter for non-vertex {v}")
        out[v] = Fraction(x)
    return out


def tau_degree(R: QuiverRep, tau_prime: dict, n: dict = None) -> Fraction:
    tau_prime = _as_param_map(R, tau_prime)
    _require_support_params(R, tau_prime)
    n = R.quiver.n if n is None else {tuple(v): int(x) for v, x in n.items()}
    total = Fraction(0)
    for v in R.support():
        rk, dg = R.rank_degree(v)
        total += n[v] * dg - tau_prime[v] * rk
    return total


def weighted_rank(R: QuiverRep, n: dict = None) -> Fraction:
    n = R.quiver.n if n is None else {tuple(v): int(x) for v, x in n.items()}
    return sum((n[v] * R.rank_degree(v)[0] for v in R.support()), Fraction(0))


def tau_slope(R: QuiverRep, tau_prime: dict, n: dict = None) -> Fraction:
    den = weighted_rank(R, n)
    if den <= 0:
        raise DomainError("slope needs positive weighted rank")
    return tau_degree(R, tau_prime, n) / den


# ---------------------------------------------------------------------------
# reduction to a prime field


def _next_prime(k: int) -> int:
    k += 1
    while any(k % q == 0 for q in range(2, int(k ** 0.5) + 1)):
        k += 1
    return k


def reduce_mod_prime(R: QuiverRep, p: int = DEFAULT_PRIME):
    """Reduce a rational representation mod the first usable prime >= p."""
    if isinstance(R.field, GF):
        return R, R.field.p
    while True:
        try:
            gf = GF(p)
            maps = {aid: [[gf.convert(x) for x in row] for row in M]
                    for aid, M in R.maps.items()}
            return QuiverRep(R.quiver, R.dims, maps, field=gf,
                             decorations=R.decorations), p
        except NonInvertible:
            p = _next_prime(p)


# ---------------------------------------------------------------------------
# subspace enumeration


def _all_subspaces(n: int, field: GF):
    """All subspaces of F_p^n as column-basis matrices (n x k), RREF-canonical."""
    p = field.p
    out = [([[field.zero] * 0 for _ in range(n)], 0)]  # zero subspace
    for k in range(1, n + 1):
        for pivots in combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(n)
                    if c > pivots[r] and c not in pivots]
            for fill in product(range(p), repeat=len(free)):
                rowech = zeros(k, n, field)
                for r in range(k):
                    rowech[r][pivots[r]] = field.one
                for (r, c), val in zip(free, fill):
                    rowech[r][c] = val
                cols = [[rowech[r][i] for r in range(k)] for i in range(n)]
                out.append((cols, k))
    return out


class SubrepWitness:
    """Arrow-invariant subspace tuple, with per-vertex column bases."""

    __slots__ = ("dims", "bases")

    def __init__(self, dims, bases):
        self.dims = dict(dims)
        self.bases = dict(bases)

    def dim_vector(self, order):
        return tuple(self.dims.get(v, 0) for v in order)

    def total(self):
        return sum(self.dims.values())


def verify_invariance(R: QuiverRep, w: SubrepWitness) -> bool:
    """Independent re-check: every arrow maps the witness into the witness."""
    for a in R.quiver.arrows:
        if R.dims[a.tail] == 0 or R.dims[a.head] == 0:
            if any(x != R.field.zero for row in R.maps[a.aid] for x in row):
                return False
            continue
        Wt = w.bases[a.tail]
        image = mat_mul(R.maps[a.aid], Wt, R.field) if Wt and Wt[0] else []
        if image and image[0]:
            if not columns_contain(w.bases[a.head], image, R.field):
                return False
    return True


def _iter_subreps(R: QuiverRep, bound: int):
    if not isinstance(R.field, GF):
        raise DomainError("subspace enumeration needs a prime field; reduce first")
    if R.total_dim > bound:
        raise DomainError(
            f"total dimension {R.total_dim} exceeds the enumeration bound {bound}")
    order = [v for v in R.quiver.vertices]
    # choose per vertex in ascending order; arrows point downward in the
    # vertex order, so both endpoints are fixed once the tail is chosen
    per_vertex = {v: _all_subspaces(R.dims[v], R.field) for v in order}
    arrows_by_tail = {}
    for a in R.quiver.arrows:
        arrows_by_tail.setdefault(a.tail, []).append(a)

    def extend(i, chosen):
        if i == len(order):
            yield dict(chosen)
            return
        v = order[i]
        for cols, k in per_vertex[v]:
            ok = True
            for a in arrows_by_tail.get(v, []):
                if a.head not in chosen:
                    continue  # same-height or forward arrow: checked at the end
                if R.dims[v] and cols and cols[0]:
                    img = mat_mul(R.maps[a.aid], cols, R.field)
                    if img and img[0] and not columns_contain(
                            chosen[a.head][0], img, R.field):
                        ok = False
                        break
            if ok:
                chosen[v] = (cols, k)
                yield from extend(i + 1, chosen)
                del chosen[v]

    for assignment in extend(0, {}):
        w = SubrepWitness({v: k for v, (c, k) in assignment.items()},
                          {v: c for v, (c, k) in assignment.items()})
        if verify_invariance(R, w):
            yield w


def enumerate_subreps(R: QuiverRep, bound: int = 8):
    """All arrow-invariant subspace tuples, one witness per dimension vector."""
    order = R.quiver.vertices
    seen = {}
    for w in _iter_subreps(R, bound):
        key = w.dim_vector(order)
        if key not in seen:
            seen[key] = w
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# stability


def _point_slope(dims: dict, tau_prime: dict, n: dict) -> Fraction:
    """Point-base slope -sum(tau'*d)/sum(n*d); decorations play no part here."""
    num = Fraction(0)
    den = Fraction(0)
    for v, d in dims.items():
        if d:
            num -= tau_prime[v] * d
            den += n[v] * d
    return num / den


def _require_support_params(R: QuiverRep, tau_prime: dict):
    missing = [v for v in R.support() if v not in tau_prime]
    if missing:
        raise DomainError(f"tau' missing on support vertices {missing}")


def is_semistable(R: QuiverRep, tau_prime: dict, n: dict = None, bound: int = 8,
                  prime: int = DEFAULT_PRIME):
    """Exact point-base verdict: stable, strictly-semistable, or unstable.

    Returns (verdict, witness): the witness is a maximizing proper nonzero
    subrepresentation when the verdict is not "stable", else None.
    """
    if R.total_dim == 0:
        raise DomainError("stability of the zero representation is undefined")
    tau_prime = _as_param_map(R, tau_prime)
    _require_support_params(R, tau_prime)
    n = R.quiver.n if n is None else {tuple(v): int(x) for v, x in n.items()}
    Rp, _ = reduce_mod_prime(R, prime)
    order = R.quiver.vertices
    full = tuple(R.dims[v] for v in order)
    mu = _point_slope(R.dims, tau_prime, n)
    best = None
    best_key = None
    for w in _iter_subreps(Rp, bound):
        vec = w.dim_vector(order)
        if w.total() == 0 or vec == full:
            continue
        s = _point_slope(w.dims, tau_prime, n)
        key = (s, vec)
        if best_key is None or key > best_key:
            best, best_key = w, key
    if best is None:
        return "stable", None
    if best_key[0] > mu:
        return "unstable", best
    if best_key[0] == mu:
        return "strictly-semistable", best
    return "stable", None


def _restrict_to_witness(R: QuiverRep, w: SubrepWitness) -> QuiverRep:
    """Representation induced on the witness subspaces (prime field)."""
    dims = {v: w.dims.get(v, 0) for v in R.quiver.vertices}
    maps = {}
    for a in R.quiver.arrows:
        k_t, k_h = dims[a.tail], dims[a.head]
        if k_t == 0 or k_h == 0:
            continue
        Wt, Wh = w.bases[a.tail], w.bases[a.head]
        img = mat_mul(R.maps[a.aid], Wt, R.field)
        cols = []
        for j in range(k_t):
            col = [img[i][j] for i in range(len(img))]
            x = solve_in_span(Wh, col, R.field)
            if x is None:
                raise DomainError("witness is not arrow-invariant")
            cols.append(x)
        maps[a.aid] = [[cols[j][i] for j in range(k_t)] for i in range(k_h)]
    return QuiverRep(R.quiver, dims, maps, field=R.field)


def is_polystable(R: QuiverRep, tau_prime: dict, n: dict = None, bound: int = 8,
                  prime: int = DEFAULT_PRIME) -> bool:
    """Direct sum of equal-slope stables?  Decided recursively.

    A strictly semistable representation is polystable exactly when some
    equal-slope subrepresentation admits an arrow-invariant complement
    with both pieces recursively polystable.
    """
    if R.total_dim == 0:
        return True
    tau_prime = _as_param_map(R, tau_prime)
    _require_support_params(R, tau_prime)
    n = R.quiver.n if n is None else {tuple(v): int(x) for v, x in n.items()}
    verdict, _ = is_semistable(R, tau_prime, n, bound, prime)
    if verdict == "stable":
        return True
    if verdict == "unstable":
        return False
    Rp, _ = reduce_mod_prime(R, prime)
    order = R.quiver.vertices
    full = tuple(Rp.dims[v] for v in order)
    mu = _point_slope(Rp.dims, tau_prime, n)
    subs = [w for w in _iter_subreps(Rp, bound)
            if 0 < w.total() < Rp.total_dim]
    for w in subs:
        if _point_slope(w.dims, tau_prime, n) != mu:
            continue
        comp_vec = tuple(f - w.dims.get(v, 0) for f, v in zip(full, order))
        for c in subs:
            if c.dim_vector(order) != comp_vec:
                continue
            if not _is_complement(Rp, w, c):
                continue
            return (is_polystable(_restrict_to_witness(Rp, w), tau_prime, n,
                                  bound, prime)
                    and is_polystable(_restrict_to_witness(Rp, c), tau_prime, n,
                                      bound, prime))
    return False


def _is_complement(R, w, c):
    for v in R.quiver.vertices:
        d = R.dims[v]
        if d == 0:
            continue
        joined = [w.bases[v][i] + c.bases[v][i] for i in range(d)]
        if mat_rank(_transpose(joined), R.field) != d:
            return False
    return True


# ---------------------------------------------------------------------------
# serialization


def _entry_str(x, field):
    if isinstance(field, GF):
        return int(x)
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def rep_to_json(R: QuiverRep) -> dict:
    d = {
        "field": R.field.tag,
        "dims": {",".join(map(str, v)): R.dims[v] for v in R.quiver.vertices
                 if R.dims[v]},
        "maps": {aid: [[_entry_str(x, R.field) for x in row] for row in M]
                 for aid, M in sorted(R.maps.items())
                 if any(x != R.field.zero for row in M for x in row)},
    }
    if R.decorations is not None:
        d["decorations"] = {
            ",".join(map(str, v)): [_entry_str(rk, QQ), _entry_str(dg, QQ)]
            for v, (rk, dg) in sorted(R.decorations.items())}
    return d


def rep_from_json(d: dict, quiver: Quiver) -> QuiverRep:
    dims = {tuple(int(x) for x in k.split(",")): v for k, v in d["dims"].items()}
    maps = {aid: [[Fraction(x) for x in row] for row in M]
            for aid, M in d.get("maps", {}).items()}
    deco = None
    if "decorations" in d:
        deco = {tuple(int(x) for x in k.split(",")): (Fraction(a), Fraction(b))
                for k, (a, b) in d["decorations"].items()}
    return QuiverRep(quiver, dims, maps, field=d.get("field", "Q"),
                     decorations=deco)
