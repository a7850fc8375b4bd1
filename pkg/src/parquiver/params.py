"""Stability-parameter calculus for the dimensional-reduction pipeline.

Three parameter levels are tied together by exact rational formulas:

  - ``tau``: one rational per occupied vertex, the filtration-level
    parameters;
  - ``tau_prime``: quiver-level parameters,
    tau'_lam = n_lam * (tau_lam - slope_O(lam));
  - ``sigma``: consecutive differences sigma_s = tau_{s+1} - tau_s along
    the ascending vertex order.

``slope_O`` is the slope of the irreducible homogeneous bundle attached to
a dominant weight: the epsilon-weighted sum of coroot pairings over the
positive roots complementary to the Levi.  The Kaehler parameters are one
positive rational per Sigma root, extended to all complementary positive
roots by pairing with fundamental weights.

Everything here is exact (fractions.Fraction); floats belong to the flow
solver only.  Parameter files are flat ``key = value`` text with dotted
keys (``epsilon.a1``, ``tau.(1,0)``, ``sigma.0``).
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from . import charring
from .errors import DomainError
from .parabolic import ParabolicDatum


def _frac(x) -> Fraction:
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {x!r}") from exc


# ---------------------------------------------------------------------------
# epsilon extension and slopes


def check_epsilon(P: ParabolicDatum, eps) -> dict:
    """Validate a Kaehler parameter set: positive rational per Sigma index."""
    out = {}
    for key, val in eps.items():
        if key not in P.sigma:
            raise DomainError(f"epsilon key {key!r} is not a Sigma index")
        v = _frac(val)
        if v <= 0:
            raise DomainError(f"epsilon must be positive, got {v} at index {key}")
        out[key] = v
    missing = set(P.sigma) - set(out)
    if missing:
        raise DomainError(f"missing epsilon values for Sigma indices {sorted(missing)}")
    return out


def extend_epsilon(P: ParabolicDatum, eps) -> dict:
    """Extend epsilon from Sigma to every positive root outside the Levi.

    eps_alpha = sum over beta in Sigma of eps_beta * <fundweight_beta,
    coroot(alpha)>; the pairing is the beta-th coroot coordinate of alpha,
    so simple Sigma roots keep their given values and all outputs stay
    positive.
    """
    eps = check_epsilon(P, eps)
    out = {}
    for alpha in P.opposite_positive:
        val = sum((eps[b] * alpha.coroot[b] for b in P.sigma), Fraction(0))
        if val <= 0:
            raise DomainError(f"extended epsilon non-positive at {alpha.simple}")
        out[alpha.simple] = val
    return out


def slope_O(P: ParabolicDatum, eps, lam) -> Fraction:
    """Slope of the homogeneous bundle of a dominant weight.

    Sum of <lam, coroot(alpha)> / eps_alpha over the positive roots alpha
    carrying Sigma support.  Linear in lam.
    """
    lam = P.check_vertex(lam)
    ext = extend_epsilon(P, eps)
    total = Fraction(0)
    for alpha in P.opposite_positive:
        total += Fraction(P.rs.pairing(lam, alpha), 1) / ext[alpha.simple]
    return total


# ---------------------------------------------------------------------------
# tau <-> tau' <-> sigma


def tau_to_tauprime(P: ParabolicDatum, eps, tau: dict) -> dict:
    """tau'_lam = n_lam * (tau_lam - slope_O(lam)); exact."""
    out = {}
    for lam, t in tau.items():
        lam = P.check_vertex(lam)
        n = charring.weyl_dim(P, lam)
        out[lam] = n * (_frac(t) - slope_O(P, eps, lam))
    return out


def tauprime_to_tau(P: ParabolicDatum, eps, tau_prime: dict) -> dict:
    """Exact inverse of tau_to_tauprime."""
    out = {}
    for lam, tp in tau_prime.items():
        lam = P.check_vertex(lam)
        n = charring.weyl_dim(P, lam)
        out[lam] = _frac(tp) / n + slope_O(P, eps, lam)
    return out


def _check_ascending(P: ParabolicDatum, vertex_order) -> list:
    vs = [P.check_vertex(v) for v in vertex_order]
    keys = [P.vertex_key(v) for v in vs]
    if any(k2 <= k1 for k1, k2 in zip(keys, keys[1:])):
        raise DomainError("vertex order is not strictly ascending")
    return vs


def sigma_to_tauprime(P: ParabolicDatum, eps, sigma, vertex_order) -> dict:
    """tau'_{lam_s} = n_{lam_s} * (sigma_0 + ... + sigma_{s-1} - slope_O(lam_s)).

    The implied normalization is tau_{lam_0} = 0.  Non-positive sigma
    values are outside the stability regime and only warn.
    """
    vs = _check_ascending(P, vertex_order)
    sigma = [_frac(s) for s in sigma]
    if len(sigma) != len(vs) - 1:
        raise DomainError(
            f"need {len(vs) - 1} sigma values for {len(vs)} vertices, got {len(sigma)}")
    if any(s <= 0 for s in sigma):
        warnings.warn("sigma outside the positive stability regime", stacklevel=2)
    out, prefix = {}, Fraction(0)
    for s, lam in enumerate(vs):
        if s > 0:
            prefix += sigma[s - 1]
        n = charring.weyl_dim(P, lam)
        out[lam] = n * (prefix - slope_O(P, eps, lam))
    return out


def tauprime_to_sigma(P: ParabolicDatum, eps, tau_prime: dict, vertex_order) -> list:
    """sigma_s = tau_{s+1} - tau_s recovered from quiver-level parameters."""
    vs = _check_ascending(P, vertex_order)
    if set(vs) != set(tuple(v) for v in tau_prime):
        raise DomainError("vertex order does not match the tau' support")
    tau = tauprime_to_tau(P, eps, tau_prime)
    return [tau[b] - tau[a] for a, b in zip(vs, vs[1:])]


# ---------------------------------------------------------------------------
# degrees, ranks, constraint


def check_constraint(tau, quotient_ranks, deg_F):
    """Exact test of: sum of tau_i * rk(F_i/F_{i-1}) equals deg(F).

    The residual reported is deg(F) minus the weighted-rank total.
    """
    tau = [_frac(t) for t in tau]
    ranks = [_frac(r) for r in quotient_ranks]
    if len(tau) != len(ranks):
        raise DomainError("tau and quotient ranks must have equal length")
    residual = _frac(deg_F) - sum((t * r for t, r in zip(tau, ranks)), Fraction(0))
    return residual == 0, residual


def product_degree(P: ParabolicDatum, eps, lam, rank_E, deg_E):
    """Rank and degree of the twisted product sheaf attached to one vertex.

    rank = n_lam * rank_E; degree = n_lam * deg_E + n_lam *
    slope_O(lam) * rank_E.
    """
    lam = P.check_vertex(lam)
    rank_E = _frac(rank_E)
    if rank_E < 0:
        raise DomainError("rank must be non-negative")
    n = charring.weyl_dim(P, lam)
    mu = slope_O(P, eps, lam)
    return n * rank_E, n * _frac(deg_E) + n * mu * rank_E


def sigma_degree(sigma, step_ranks, deg_F) -> Fraction:
    """deg_sigma(F) = deg(F) + sum over proper steps of sigma_i * rk(F_i).

    ``step_ranks`` lists rk(F_0), ..., rk(F_m); the sum stops at m-1.
    """
    sigma = [_frac(s) for s in sigma]
    ranks = [_frac(r) for r in step_ranks]
    if len(ranks) != len(sigma) + 1:
        raise DomainError("need one more filtration rank than sigma values")
    return _frac(deg_F) + sum((s * r for s, r in zip(sigma, ranks)), Fraction(0))


def sigma_slope(sigma, step_ranks, deg_F) -> Fraction:
    total = _frac(step_ranks[-1])
    if total <= 0:
        raise DomainError("total rank must be positive")
    return sigma_degree(sigma, step_ranks, deg_F) / total


# ---------------------------------------------------------------------------
# the two-vertex (triple) special case


def triple_epsilon(rank0, deg0, rank1, deg1, tau0) -> Fraction:
    """Kaehler parameter making the two-step filtration plain-stability.

    Under sigma_0 = 0 (both tau equal) the trace constraint forces
    2/eps = ((rank0 + rank1) * tau0 - (deg0 + deg1)) / rank1.
    """
    rank0, rank1 = _frac(rank0), _frac(rank1)
    if rank0 < 0 or rank1 <= 0:
        raise DomainError("ranks must be non-negative with rank1 positive")
    rhs = ((rank0 + rank1) * _frac(tau0) - (_frac(deg0) + _frac(deg1))) / rank1
    if rhs <= 0:
        raise DomainError("parameters give a non-positive epsilon")
    return 2 / rhs


def triple_tau_primes(rank0, deg0, rank1, deg1, tau0):
    """tau' pair of the triple: tau'_0 = tau0, tau'_1 = tau0 - 2/eps."""
    eps = triple_epsilon(rank0, deg0, rank1, deg1, tau0)
    tp0 = _frac(tau0)
    return eps, (tp0, tp0 - 2 / eps)


# ---------------------------------------------------------------------------
# parameter files


def parse_param_file(text: str) -> dict:
    """Flat key = value lines; values parsed as exact rationals.

    Returns nested dict by dotted prefix: {"epsilon": {...}, "tau": {...},
    "tauprime": {...}, "sigma": {...}}.  Tau and tauprime keys are weight
    tuples "(1,0)"; epsilon keys are root labels "a1"; sigma keys are
    integer step indices.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if "." not in key:
            raise DomainError(f"line {lineno}: key {key!r} lacks a dotted prefix")
        prefix, _, rest = key.partition(".")
        bucket = out.setdefault(prefix, {})
        if prefix == "epsilon":
            k = rest
        elif prefix in ("tau", "tauprime"):
            k = parse_weight(rest)
        elif prefix == "sigma":
            try:
                k = int(rest)
            except ValueError as exc:
                raise DomainError(f"line {lineno}: bad sigma index {rest!r}") from exc
        else:
            raise DomainError(f"line {lineno}: unknown prefix {prefix!r}")
        if k in bucket:
            raise DomainError(f"line {lineno}: duplicate key {key!r}")
        bucket[k] = _frac(val)
    return out


def parse_weight(text: str) -> tuple:
    """Parse "(1,-2)" or "1,-2" into an integer tuple."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    try:
        return tuple(int(p.strip()) for p in s.split(","))
    except ValueError as exc:
        raise DomainError(f"bad weight {text!r}") from exc


def epsilon_from_labels(P: ParabolicDatum, labeled: dict) -> dict:
    """Map {"a1": value} (or {"1": value}, 1-based) to Sigma-indexed epsilon."""
    out = {}
    for label, val in labeled.items():
        name = str(label).strip().lower()
        name = name.removeprefix("alpha").removeprefix("a")
        try:
            idx = int(name) - 1
        except ValueError as exc:
            raise DomainError(f"bad epsilon label {label!r}") from exc
        out[idx] = _frac(val)
    return check_epsilon(P, out)
