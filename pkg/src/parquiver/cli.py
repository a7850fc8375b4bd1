"""Command-line front end for the parabolic quiver toolkit.

Subcommands cover the pipeline end to end: build a quiver with relations,
print relations, order a filtration support, evaluate slopes, convert
stability parameters, check the degree constraint, decide exact stability,
run the numeric moment-map flow, and reproduce the worked examples.

Exit codes: 0 success, 2 domain error (bad input, malformed file), 3
numeric failure inside the flow.

Weights are written in fundamental-weight coordinates "(l1,l2)".  For the
projective-plane family (group A2, sigma = a2) the twist presentation
"(x1,x2)" is also supported via --coords; it is the default there because
that is how this family is usually labeled.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import params as prm
from .errors import DomainError, NumericFailure
from .parabolic import build_parabolic, parse_sigma
from .quiverbuild import (VertexWindow, build_quiver, check_directed,
                          components, filtration_order, quiver_from_json,
                          quiver_to_dot, quiver_to_json)
from .quiverrep import (DEFAULT_PRIME, is_polystable, is_semistable,
                        reduce_mod_prime, rep_from_json)
from .rootsys import RootSystem
from .vortexsolve import (HermitianRep, chain_vortex_equations,
                          kempf_ness_flow, residual_trace_csv)

PRIME_ENV = "PARQUIVER_PRIME"

WINDOW_HELP = ("window syntax: 'box:R' for the cube [-R,R]^rank, "
               "'box:l1,l2:h1,h2' for an explicit box, or "
               "'explicit:(1,2);(0,0)' for a fixed vertex list; the default "
               "is the fundamental-weight box [-9,9]^rank intersected with "
               "dominance")


# ---------------------------------------------------------------------------
# shared parsing helpers


def _frac_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else \
        f"{f.numerator}/{f.denominator}"


def _vstr(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


def _parabolic(args):
    rs = RootSystem(args.group)
    sigma = parse_sigma(rs, args.sigma)
    return build_parabolic(rs, sigma)


def _window(args, rank: int) -> VertexWindow:
    spec = getattr(args, "window", None)
    if spec is None:
        return VertexWindow.default(rank)
    s = spec.strip()
    if s.startswith("box:"):
        body = s[len("box:"):]
        parts = body.split(":")
        if len(parts) == 1:
            r = int(parts[0])
            return VertexWindow.box([-r] * rank, [r] * rank)
        if len(parts) == 2:
            lo = [int(x) for x in parts[0].split(",")]
            hi = [int(x) for x in parts[1].split(",")]
            return VertexWindow.box(lo, hi)
        raise DomainError(f"bad window syntax {spec!r}")
    if s.startswith("explicit:"):
        body = s[len("explicit:"):]
        weights = [prm.parse_weight(tok) for tok in body.split(";") if tok.strip()]
        return VertexWindow.explicit(weights)
    raise DomainError(f"bad window syntax {spec!r}")


def _parse_params_file(args) -> dict:
    if getattr(args, "params", None):
        return prm.parse_param_file(_read_file(args.params))
    return {}


def _epsilon(args, P) -> dict:
    """--eps VALUE (same on all of Sigma) or --eps a1=1,a2=2, or params file."""
    parsed = _parse_params_file(args)
    if getattr(args, "eps", None):
        text = args.eps.strip()
        if "=" in text:
            labeled = {}
            for tok in text.split(","):
                k, _, v = tok.partition("=")
                if not v:
                    raise DomainError(f"bad epsilon entry {tok!r}")
                labeled[k.strip()] = v.strip()
            return prm.epsilon_from_labels(P, labeled)
        val = Fraction(text)
        return prm.check_epsilon(P, {i: val for i in P.sigma})
    if "epsilon" in parsed:
        return prm.epsilon_from_labels(P, parsed["epsilon"])
    raise DomainError("no epsilon given: pass --eps or a params file with "
                      "epsilon.* entries")


def _tau_prime(args, P, parsed: dict) -> dict:
    """tauprime.* directly, or tau.* + epsilon.* converted."""
    if "tauprime" in parsed:
        return dict(parsed["tauprime"])
    if "tau" in parsed:
        eps = _epsilon(args, P)
        return prm.tau_to_tauprime(P, eps, parsed["tau"])
    raise DomainError("params file needs tauprime.* entries (or tau.* plus "
                      "epsilon.*)")


# ---------------------------------------------------------------------------
# twist presentation for the projective-plane family


def _is_plane(P) -> bool:
    return P.rs.series == "A2" and sorted(P.sigma) == [1]


def fw_to_x(l) -> tuple:
    return (l[0] - l[1], -2 * l[0] - l[1])


def x_to_fw(x) -> tuple:
    if (x[0] - x[1]) % 3 != 0:
        raise DomainError(f"twist pair {tuple(x)} is not integral: "
                          "x1 - x2 must be divisible by 3")
    l1 = (x[0] - x[1]) // 3
    return (l1, l1 - x[0])


def _resolve_coords(args, P) -> str:
    mode = getattr(args, "coords", "auto") or "auto"
    if mode == "auto":
        return "x" if _is_plane(P) else "fw"
    if mode == "x" and not _is_plane(P):
        raise DomainError("--coords x is only defined for group A2 with "
                          "sigma = a2")
    return mode


# ---------------------------------------------------------------------------
# subcommands


def cmd_build_quiver(args) -> int:
    P = _parabolic(args)
    Q = build_quiver(P, _window(args, P.rs.rank),
                     with_relations=not args.no_relations)
    if args.format == "json":
        print(json.dumps(quiver_to_json(Q), indent=2, sort_keys=True))
    elif args.format == "dot":
        print(quiver_to_dot(Q), end="")
    else:
        comps = components(Q)
        print(f"group {P.rs.series}  sigma {{{','.join(f'a{i+1}' for i in sorted(P.sigma))}}}")
        print(f"status {Q.status}")
        print(f"vertices {len(Q.vertices)}  arrows {len(Q.arrows)}  "
              f"relations {len(Q.relations)}  components {len(comps)}")
        rep = check_directed(Q)
        print(f"directed acyclic: {rep.acyclic}  graded: {rep.graded}")
        for v in Q.vertices:
            print(f"  vertex {_vstr(v)}  n={Q.n[v]}")
        for a in Q.arrows:
            print(f"  arrow {a.aid}: {_vstr(a.tail)} -> {_vstr(a.head)}")
    return 0


def _relation_line(rel) -> str:
    terms = []
    for coeff, path in rel.terms:
        c = Fraction(coeff)
        sign = "+" if c >= 0 else "-"
        mag = abs(c)
        coeff_txt = "" if mag == 1 else f"{_frac_str(mag)}*"
        terms.append(f"{sign}{coeff_txt}[{';'.join(path)}]")
    return (f"at {_vstr(rel.vertex)} -> {_vstr(rel.target)}: "
            + " ".join(terms))


def cmd_show_relations(args) -> int:
    P = _parabolic(args)
    Q = build_quiver(P, _window(args, P.rs.rank))
    if args.format == "json":
        blob = quiver_to_json(Q)
        print(json.dumps({"status": Q.status, "relations": blob["relations"]},
                         indent=2, sort_keys=True))
    else:
        print(f"status {Q.status}")
        for rel in Q.relations:
            print(_relation_line(rel))
    return 0


def cmd_filtration_order(args) -> int:
    P = _parabolic(args)
    support = [prm.parse_weight(tok)
               for tok in args.support.split(";") if tok.strip()]
    for v in filtration_order(P, support):
        print(_vstr(v))
    return 0


def cmd_slope(args) -> int:
    P = _parabolic(args)
    coords = _resolve_coords(args, P)
    lam = prm.parse_weight(args.weight)
    if coords == "x":
        lam = x_to_fw(lam)
    eps = _epsilon(args, P)
    print(_frac_str(prm.slope_O(P, eps, lam)))
    return 0


def cmd_convert_params(args) -> int:
    P = _parabolic(args)
    parsed = _parse_params_file(args)
    if not parsed:
        raise DomainError("convert-params needs --params FILE")
    eps = _epsilon(args, P)
    direction = args.direction
    out_lines = []
    payload = {}
    if direction == "tau-to-tauprime":
        if "tau" not in parsed:
            raise DomainError("params file lacks tau.* entries")
        out = prm.tau_to_tauprime(P, eps, parsed["tau"])
        for v in sorted(out, key=P.vertex_key):
            out_lines.append(f"tauprime.{_vstr(v)} = {_frac_str(out[v])}")
            payload[_vstr(v)] = _frac_str(out[v])
    elif direction == "tauprime-to-tau":
        if "tauprime" not in parsed:
            raise DomainError("params file lacks tauprime.* entries")
        out = prm.tauprime_to_tau(P, eps, parsed["tauprime"])
        for v in sorted(out, key=P.vertex_key):
            out_lines.append(f"tau.{_vstr(v)} = {_frac_str(out[v])}")
            payload[_vstr(v)] = _frac_str(out[v])
    elif direction == "sigma-to-tauprime":
        if "sigma" not in parsed:
            raise DomainError("params file lacks sigma.* entries")
        if not args.support:
            raise DomainError("sigma-to-tauprime needs --support")
        support = [prm.parse_weight(tok)
                   for tok in args.support.split(";") if tok.strip()]
        steps = parsed["sigma"]
        if sorted(steps) != list(range(len(steps))):
            raise DomainError("sigma.* indices must be 0..m-1 without gaps")
        sigma = [steps[i] for i in range(len(steps))]
        out = prm.sigma_to_tauprime(P, eps, sigma, support)
        for v in sorted(out, key=P.vertex_key):
            out_lines.append(f"tauprime.{_vstr(v)} = {_frac_str(out[v])}")
            payload[_vstr(v)] = _frac_str(out[v])
    elif direction == "tauprime-to-sigma":
        if "tauprime" not in parsed:
            raise DomainError("params file lacks tauprime.* entries")
        support = sorted(parsed["tauprime"], key=P.vertex_key)
        sigma = prm.tauprime_to_sigma(P, eps, parsed["tauprime"], support)
        for s, val in enumerate(sigma):
            out_lines.append(f"sigma.{s} = {_frac_str(val)}")
            payload[str(s)] = _frac_str(val)
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown direction {direction!r}")
    if args.format == "json":
        print(json.dumps({"direction": direction, "values": payload},
                         indent=2, sort_keys=True))
    else:
        for line in out_lines:
            print(line)
    return 0


def cmd_check_constraint(args) -> int:
    taus = [Fraction(t) for t in args.tau.split(",")]
    ranks = [int(r) for r in args.ranks.split(",")]
    ok, res = prm.check_constraint(taus, ranks, Fraction(args.deg))
    if args.format == "json":
        print(json.dumps({"ok": ok, "residual": _frac_str(res)}))
    elif ok:
        print("constraint satisfied (residual 0)")
    else:
        print(f"constraint violated (residual {_frac_str(res)})")
    return 0


def _default_prime(args) -> int:
    if getattr(args, "prime", None):
        return args.prime
    env = os.environ.get(PRIME_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise DomainError(f"{PRIME_ENV} must be an integer, got {env!r}") \
                from exc
    return DEFAULT_PRIME


def cmd_check_stability(args) -> int:
    P = _parabolic(args)
    Q = build_quiver(P, _window(args, P.rs.rank))
    rep_blob = json.loads(_read_file(args.rep))
    R = rep_from_json(rep_blob, Q)
    parsed = _parse_params_file(args)
    tp = _tau_prime(args, P, parsed)
    prime = _default_prime(args)
    Rp, used = reduce_mod_prime(R, prime)
    verdict, witness = is_semistable(Rp, tp, bound=args.bound)
    poly = is_polystable(Rp, tp, bound=args.bound)
    wit_dims = None
    if witness is not None:
        wit_dims = {_vstr(v): d for v, d in sorted(witness.dims.items())
                    if d > 0}
    if args.format == "json":
        print(json.dumps({"verdict": verdict, "polystable": poly,
                          "prime": used, "witness_dims": wit_dims},
                         indent=2, sort_keys=True))
    else:
        print(f"verdict: {verdict}")
        print(f"polystable: {'yes' if poly else 'no'}")
        print(f"prime: {used}")
        if wit_dims:
            dims_txt = ", ".join(f"{k}:{v}" for k, v in wit_dims.items())
            print(f"witness dims: {dims_txt}")
    return 0


def _parse_complex(entry):
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, str):
        try:
            return complex(entry.replace(" ", ""))
        except ValueError as exc:
            raise DomainError(f"bad complex entry {entry!r}") from exc
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    raise DomainError(f"bad complex entry {entry!r}")


def cmd_solve_vortex(args) -> int:
    P = _parabolic(args)
    Q = build_quiver(P, _window(args, P.rs.rank))
    blob = json.loads(_read_file(args.rep))
    dims = {prm.parse_weight(k): int(v) for k, v in blob["dims"].items()}
    maps = {aid: np.array([[_parse_complex(e) for e in row] for row in M],
                          dtype=np.complex128)
            for aid, M in blob.get("maps", {}).items()}
    parsed = _parse_params_file(args)
    tp = {v: float(x) for v, x in _tau_prime(args, P, parsed).items()}
    H = HermitianRep(Q, dims, maps, tp)
    report, final_maps = kempf_ness_flow(
        H, step=args.step, tol=args.tol, max_iters=args.max_iters)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(residual_trace_csv(report))
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print(f"verdict: {report.verdict}")
        print(f"iterations: {report.iterations}")
        print(f"final residual: {report.final_residual:.6e}")
        print(f"converged: {'yes' if report.converged else 'no'}")
    return 0


# ---------------------------------------------------------------------------
# worked examples (outputs are golden-filed byte for byte)


def _example_p2() -> str:
    P = build_parabolic(RootSystem("A2"), {1})
    pts = []
    for a in range(-3, 4):
        for b in range(-3, 4):
            x = (3 * a, 3 * b)
            if x[0] >= x[1]:
                pts.append(x_to_fw(x))
    Q = build_quiver(P, VertexWindow.explicit(pts))
    eps = {1: Fraction(1)}
    lines = [
        "projective plane family: group A2, sigma = a2",
        "component of the trivial twist inside the box |x_i| <= 9",
        "twist coordinates (x1,x2); multiplicity n = 1 + (x1-x2)/3; "
        "slope at eps = 1 is -(x1+x2)",
        "",
        "vertices:",
        "  (x1,x2)    n    slope",
    ]
    for v in Q.vertices:
        x = fw_to_x(v)
        lines.append(f"  {_vstr(x):>9}  {Q.n[v]:>3}  {_frac_str(prm.slope_O(P, eps, v)):>5}")
    lines += ["", "arrows (x1,x2) -> (x1,x2+3) and (x1,x2) -> (x1+3,x2):"]
    for a in Q.arrows:
        lines.append(f"  {a.aid}: {_vstr(fw_to_x(a.tail))} -> {_vstr(fw_to_x(a.head))}")
    lines += ["", f"commuting-square relations: {len(Q.relations)}"]
    for rel in Q.relations:
        terms = " ".join(
            f"{'+' if Fraction(c) >= 0 else '-'}[{';'.join(path)}]"
            for c, path in rel.terms)
        lines.append(f"  at {_vstr(fw_to_x(rel.vertex))} -> "
                     f"{_vstr(fw_to_x(rel.target))}: {terms}")
    return "\n".join(lines) + "\n"


def _example_p1xp1() -> str:
    P = build_parabolic(RootSystem("A1xA1"), {0, 1})
    Q = build_quiver(P, VertexWindow.box([-3, -3], [3, 3]))
    lines = [
        "product of two projective lines: group A1xA1, sigma = a1,a2",
        "grid window [-3,3]^2; arrows subtract 2 from one coordinate",
        "two arrow-closed classes by the parity of l1+l2",
        "",
        "vertices (l1,l2) with parity class:",
    ]
    for v in Q.vertices:
        lines.append(f"  {_vstr(v):>9}  parity {(v[0] + v[1]) % 2}")
    lines += ["", "arrows:"]
    for a in Q.arrows:
        lines.append(f"  {a.aid}: {_vstr(a.tail)} -> {_vstr(a.head)}")
    lines += ["", f"commuting-square relations: {len(Q.relations)}"]
    for rel in Q.relations:
        lines.append("  " + _relation_line(rel))
    return "\n".join(lines) + "\n"


def _example_borel_a2() -> str:
    rs = RootSystem("A2")
    P = build_parabolic(rs, {0, 1})
    Q = build_quiver(P, VertexWindow.box([-2, -2], [2, 2]))
    g1, g2 = rs.root((-1, 0)), rs.root((0, -1))
    n_const = rs.chevalley(rs.root((0, 1)), rs.root((1, 0)))
    lines = [
        "full flag variety of A2: sigma = a1,a2 (Borel case)",
        "arrow shifts in fundamental-weight coordinates:",
        f"  gamma1 = -alpha1: {_vstr(tuple(g1.fw))}",
        f"  gamma2 = -alpha2: {_vstr(tuple(g2.fw))}",
        f"  gamma12 = -alpha1-alpha2: {_vstr(tuple((rs.root((-1, -1))).fw))}",
        f"structure constant N(alpha2,alpha1) = {n_const}",
        "",
        "relations (window [-2,2]^2): commutators against the single arrow "
        "along gamma1+gamma2",
    ]
    for rel in Q.relations:
        lines.append("  " + _relation_line(rel))
    return "\n".join(lines) + "\n"


def _example_triple() -> str:
    rank0, deg0, rank1, deg1 = 1, 0, 1, 0
    tau0 = Fraction(1)
    eps, (tp0, tp1) = prm.triple_tau_primes(rank0, deg0, rank1, deg1, tau0)
    P = build_parabolic(RootSystem("A1"), {0})
    Q = build_quiver(P, VertexWindow.explicit([(2,), (0,)]))
    aid = Q.arrows[0].aid
    H = HermitianRep(Q, {(0,): 1, (2,): 1}, {aid: np.array([[2.0]])},
                     {(0,): float(tp0), (2,): float(tp1)})
    eqs = chain_vortex_equations(H)
    report, final_maps = kempf_ness_flow(H)
    lines = [
        "three-step filtration on the line family (two quiver vertices)",
        f"inputs: ranks ({rank0},{rank1}), degrees ({deg0},{deg1}), "
        f"tau_0 = {_frac_str(tau0)}, sigma_0 = 0",
        "",
        f"epsilon = {_frac_str(eps)}",
        f"tau' = ({_frac_str(tp0)}, {_frac_str(tp1)}) at weights (0) and (2)",
        f"constraint deg0+deg1 = tau'_0*rank0 + tau'_1*rank1: "
        f"{deg0 + deg1} = {_frac_str(tp0 * rank0 + tp1 * rank1)}",
        "",
        "vortex equations at the start phi = 2 "
        "(defect = moment map - tau'):",
    ]
    for v, defect in eqs:
        lines.append(f"  at {_vstr(v)}: defect {defect[0, 0].real:+.6f}")
    lines += [
        "",
        f"flow verdict: {report.verdict}",
        f"limit |phi|^2 = {abs(final_maps[aid][0, 0]) ** 2:.6f} "
        f"(target tau'_0 = {_frac_str(tp0)})",
    ]
    return "\n".join(lines) + "\n"


EXAMPLES = {
    "p2": _example_p2,
    "p1xp1": _example_p1xp1,
    "borel-a2": _example_borel_a2,
    "triple": _example_triple,
}


def cmd_reproduce_example(args) -> int:
    print(EXAMPLES[args.name](), end="")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_group_args(sp, window=True):
    sp.add_argument("--group", required=True,
                    help="root system series, e.g. A2 or A1xA1 or B2")
    sp.add_argument("--sigma", required=True,
                    help="simple roots excluded from the Levi, e.g. 'a2' or "
                         "'a1,a2' or 'all'")
    if window:
        sp.add_argument("--window", help=WINDOW_HELP)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="parquiver",
        description="Quivers with relations from parabolic subgroups: "
                    "construction, stability parameters, exact stability, "
                    "and numeric moment-map flows.",
        epilog="Default vertex window: fundamental-weight box [-9,9]^rank "
               "intersected with dominance.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build-quiver", help="construct the quiver with "
                        "relations over a vertex window")
    _add_group_args(sp)
    sp.add_argument("--format", choices=["json", "dot", "table"],
                    default="table")
    sp.add_argument("--no-relations", action="store_true",
                    help="skip relation generation")
    sp.set_defaults(func=cmd_build_quiver)

    sp = sub.add_parser("show-relations", help="print the relations over a "
                        "vertex window")
    _add_group_args(sp)
    sp.add_argument("--format", choices=["json", "table"], default="table")
    sp.set_defaults(func=cmd_show_relations)

    sp = sub.add_parser("filtration-order", help="sort a support set into "
                        "filtration order")
    _add_group_args(sp, window=False)
    sp.add_argument("--support", required=True,
                    help="semicolon-separated weights, e.g. '(1,2);(0,0)'")
    sp.set_defaults(func=cmd_filtration_order)

    sp = sub.add_parser("slope", help="slope of one irreducible summand")
    _add_group_args(sp, window=False)
    sp.add_argument("--weight", required=True, help="weight, e.g. '(3,0)'")
    sp.add_argument("--eps", help="epsilon: single value for all of Sigma, "
                    "or 'a1=1,a2=2'")
    sp.add_argument("--params", help="params file with epsilon.* entries")
    sp.add_argument("--coords", choices=["auto", "fw", "x"], default="auto",
                    help="weight presentation: fundamental-weight 'fw' or "
                         "twist 'x' (A2/a2 only); 'auto' picks x exactly "
                         "there")
    sp.set_defaults(func=cmd_slope)

    sp = sub.add_parser("convert-params", help="convert between tau, tau', "
                        "and sigma parameters")
    _add_group_args(sp, window=False)
    sp.add_argument("--direction", required=True,
                    choices=["tau-to-tauprime", "tauprime-to-tau",
                             "sigma-to-tauprime", "tauprime-to-sigma"])
    sp.add_argument("--params", required=True,
                    help="params file (epsilon.* plus tau.*/tauprime.*/"
                         "sigma.* as needed)")
    sp.add_argument("--eps", help="epsilon override, as in slope")
    sp.add_argument("--support", help="semicolon-separated weights (needed "
                    "for sigma-to-tauprime)")
    sp.add_argument("--format", choices=["json", "table"], default="table")
    sp.set_defaults(func=cmd_convert_params)

    sp = sub.add_parser("check-constraint", help="verify the filtration "
                        "degree constraint deg F = sum tau_i rk(F_i/F_{i-1})")
    sp.add_argument("--tau", required=True, help="comma-separated rationals")
    sp.add_argument("--ranks", required=True, help="comma-separated integers")
    sp.add_argument("--deg", required=True, help="total degree (rational)")
    sp.add_argument("--format", choices=["json", "table"], default="table")
    sp.set_defaults(func=cmd_check_constraint)

    sp = sub.add_parser("check-stability", help="exact stability verdict for "
                        "a representation file")
    _add_group_args(sp)
    sp.add_argument("--rep", required=True, help="representation JSON file")
    sp.add_argument("--params", required=True,
                    help="params file with tauprime.* (or tau.* + epsilon.*)")
    sp.add_argument("--eps", help="epsilon override, as in slope")
    sp.add_argument("--prime", type=int,
                    help=f"prime for the reduction (default from "
                         f"${PRIME_ENV} or {DEFAULT_PRIME})")
    sp.add_argument("--bound", type=int, default=8,
                    help="total-dimension bound for subspace enumeration")
    sp.add_argument("--format", choices=["json", "table"], default="table")
    sp.set_defaults(func=cmd_check_stability)

    sp = sub.add_parser("solve-vortex", help="run the numeric moment-map "
                        "flow on a representation file")
    _add_group_args(sp)
    sp.add_argument("--rep", required=True,
                    help="JSON file {dims: {'(l1,l2)': d}, maps: {aid: "
                         "[[entries]]}}; entries may be numbers, '1+2j' "
                         "strings, or [re,im] pairs")
    sp.add_argument("--params", required=True,
                    help="params file with tauprime.* (or tau.* + epsilon.*)")
    sp.add_argument("--eps", help="epsilon override, as in slope")
    sp.add_argument("--step", type=float, help="initial step size")
    sp.add_argument("--tol", type=float, help="convergence tolerance")
    sp.add_argument("--max-iters", type=int, help="iteration budget")
    sp.add_argument("--csv", help="write the residual trace as CSV here")
    sp.add_argument("--format", choices=["json", "table"], default="table")
    sp.set_defaults(func=cmd_solve_vortex)

    sp = sub.add_parser("reproduce-example", help="print a worked example "
                        "(deterministic output)")
    sp.add_argument("name", choices=sorted(EXAMPLES))
    sp.set_defaults(func=cmd_reproduce_example)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
