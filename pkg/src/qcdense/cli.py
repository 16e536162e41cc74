"""
Command-line interface: ``qc <command> [options]``.

Every command writes one JSON report to stdout. Exit status: 0 when the
property holds / the computation succeeded, 1 when it is violated (the report
carries the counterexample), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import determining as det
from . import finite as fin
from . import models as mod
from . import qc
from . import solenoid as sol
from .report import Report, certificates_json
from .search import SearchTooLarge, search_min_dense
from .torus import OpenArc, format_rational, in_t_plus, parse_rational


class UsageError(Exception):
    pass


def _group(args):
    if not args.group:
        raise UsageError("--group is required")
    return fin.parse_group(args.group)


def _set(G, args):
    return fin.parse_element_set(G, args.set or "")


def _arc(args):
    if args.arc is None:
        raise UsageError("--arc is required")
    return OpenArc(parse_rational(args.arc))


def _fmt(S):
    return fin.format_element_set(S)


def _canonical_inputs(G, X, **extra):
    d = {"group": str(G), "set": _fmt(X)}
    d.update({k: v for k, v in extra.items() if v is not None})
    return d


# finite-group commands -------------------------------------------------------------


def cmd_hull(args):
    G = _group(args)
    X = _set(G, args)
    H = qc.qc_hull(G, X)
    rep = Report("hull", _canonical_inputs(G, X))
    rep.result = {"hull": _fmt(H), "size": len(H), "quasi_convex_input": H == X}
    return rep, 0


def cmd_polar(args):
    G = _group(args)
    S = _set(G, args)
    if args.left:
        P = qc.polar_left(G, S)
        rep = Report("polar", _canonical_inputs(G, S, side="left"))
        rep.result = {"polar_left": _fmt(P)}
    else:
        P = qc.polar_right(G, S)
        rep = Report("polar", _canonical_inputs(G, S, side="right"))
        rep.result = {"polar_right": _fmt(P)}
    return rep, 0


def cmd_dense(args):
    if args.model:
        M = mod.parse_model(args.model)
        X = mod.parse_point_set(M, args.set or "")
        B = _model_bound(M, args)
        r = mod.verify_qc_dense_up_to(M, X, B, threads=args.threads)
        rep = Report("dense", {"model": str(M), "set": ",".join(mod.format_point(M, x) for x in X)})
        rep.result = {"qc_dense": r.ok, "label": r.label}
        rep.bound = str(B)
        rep.certificates = certificates_json(M, r.certificates)
        if not r.ok:
            rep.result["counterexample"] = mod.character_json(M, r.failures[0])
        return rep, 0 if r.ok else 1
    G = _group(args)
    X = _set(G, args)
    chi = qc.polar_counterexample(G, X)
    rep = Report("dense", _canonical_inputs(G, X))
    rep.result = {"qc_dense": chi is None, "label": "exact"}
    if chi is None:
        rep.certificates = certificates_json(G, qc.dense_certificates(G, X))
        return rep, 0
    rep.result["counterexample"] = list(chi)
    rep.result["polar"] = _fmt(qc.polar_right(G, X))
    return rep, 1


def cmd_wset(args):
    G = _group(args)
    X = _set(G, args)
    U = _arc(args)
    W = qc.w_set(G, X, U)
    rep = Report("wset", _canonical_inputs(G, X, arc=str(U)))
    rep.result = {"w_set": _fmt(W), "trivial": W == {G.zero}}
    return rep, 0


def cmd_sumset(args):
    G = _group(args)
    X = _set(G, args)
    K = qc.sumset_k_n(G, X, args.n)
    rep = Report("sumset", _canonical_inputs(G, X, n=args.n))
    rep.result = {"sumset": _fmt(K), "qc_dense": qc.is_qc_dense(G, K)}
    return rep, 0


def cmd_min_sumset(args):
    G = _group(args)
    X = _set(G, args)
    U = _arc(args)
    rep = Report("min-sumset", _canonical_inputs(G, X, arc=str(U)))
    try:
        cert = qc.min_sumset_qc_dense(G, X, U)
    except qc.PreconditionError as e:
        rep.result = {"error": str(e), "w_set": _fmt(qc.w_set(G, X, U))}
        return rep, 1
    rep.result = {"n": cert.n, "v_n_bound": cert.bound, "sumset": _fmt(cert.sumset)}
    rep.certificates = certificates_json(G, cert.certificates)
    return rep, 0


def cmd_fan(args):
    if not args.factor or len(args.factor) != len(args.set or []):
        raise UsageError("give one --set per --factor")
    groups = [fin.parse_group(g) for g in args.factor]
    subsets = [fin.parse_element_set(g, s) for g, s in zip(groups, args.set)]
    G, X = mod.fan_finite(groups, subsets)
    rep = Report("fan", {"factors": [str(g) for g in groups], "sets": [_fmt(s) for s in subsets]})
    chi = qc.polar_counterexample(G, X)
    factor_dense = [qc.is_qc_dense(g, s) for g, s in zip(groups, subsets)]
    rep.result = {"group": str(G), "fan": _fmt(X), "qc_dense": chi is None, "factors_qc_dense": factor_dense}
    if chi is None:
        rep.certificates = certificates_json(G, qc.dense_certificates(G, X))
        return rep, 0
    rep.result["counterexample"] = list(chi)
    return rep, 1


def cmd_three_space(args):
    if not args.hom:
        raise UsageError("--hom is required")
    f = fin.parse_homomorphism(args.hom)
    X = fin.parse_element_set(f.source, args.set or "")
    rep = Report("three-space", {"hom": json.loads(f.to_json()), "set": _fmt(X)})
    try:
        v = qc.check_three_space(f, X)
    except qc.PreconditionError as e:
        rep.result = {"precondition": False, "error": str(e)}
        return rep, 1
    rep.result = {
        "precondition": True,
        "x_qc_dense": v.x_dense,
        "image_qc_dense": v.image_dense,
        "biconditional_holds": v.holds,
    }
    if not v.holds:
        rep.result["counterexample"] = list(v.counterexample)
        return rep, 1
    return rep, 0


def cmd_near_char(args):
    G = _group(args)
    X = _set(G, args)
    v = det.check_near_characterization(G, X)
    rep = Report("near-char", _canonical_inputs(G, X))
    rep.result = {
        "arc_exists": v.arc_exists,
        "restriction_injective": v.injective,
        "arc_radius": format_rational(v.radius),
        "equivalence_holds": v.holds,
        "kernel": _fmt(det.restriction_kernel(G, X)),
    }
    return rep, 0 if v.holds else 1


def cmd_determine(args):
    if args.model:
        M = mod.parse_model(args.model)
        gens = mod.parse_point_set(M, args.set or "")
        X = mod.parse_point_set(M, args.witness) if args.witness else gens
        B = _model_bound(M, args)
        arc = OpenArc(parse_rational(args.arc)) if args.arc else None
        rep = Report(
            "determine",
            {
                "model": str(M),
                "set": ",".join(mod.format_point(M, x) for x in gens),
                "witness": ",".join(mod.format_point(M, x) for x in X),
            },
        )
        try:
            v = det.determine_by_witness(M, gens, X, B, arc)
        except det.NotInSubgroup as e:
            raise UsageError(str(e))
        rep.bound = str(B)
        rep.result = {"determines": v.verdict, "label": v.label, "kn_exponent": v.kn_exponent}
        rep.certificates = certificates_json(M, v.report.certificates)
        if not v.verdict:
            rep.result["counterexample"] = mod.character_json(M, v.counterexample)
        return rep, 0 if v.verdict else 1
    G = _group(args)
    gens = _set(G, args)
    D = fin.generated_subgroup(G, gens)
    ok = det.determines_finite(G, D)
    rep = Report("determine", _canonical_inputs(G, gens))
    rep.result = {"subgroup": _fmt(D), "subgroup_order": len(D), "determines": ok, "label": "exact"}
    if not ok:
        kern = det.restriction_kernel(G, D)
        rep.result["counterexample"] = list(min(kern - {G.zero}))
    return rep, 0 if ok else 1


def cmd_build_seq(args):
    bounds = det.SequenceBounds(
        seq_len=args.seq_len or 50,
        levels=args.levels or 4,
        char_bound=args.char_bound or (args.seq_len or 50),
        support=args.support or 2,
    )
    if args.model:
        M = mod.parse_model(args.model)
        seq, r = det.build_determining_supersequence(M, bounds)
        rep = Report("build-seq", {"model": str(M), "seq_len": bounds.seq_len, "levels": bounds.levels,
                                   "char_bound": bounds.char_bound, "support": bounds.support})
        rep.bound = str(r.bound)
    else:
        M = _group(args)
        seq, r = det.build_determining_supersequence(M, bounds)
        rep = Report("build-seq", {"group": str(M)})
    rep.result = {
        "points": [mod.format_point(M, x) for x in seq.points()],
        "size": len(seq),
        "qc_dense": r.ok,
        "label": r.label,
    }
    rep.certificates = certificates_json(M, r.certificates)
    return rep, 0 if r.ok else 1


def cmd_search(args):
    if args.what != "min-dense":
        raise UsageError("unknown search %r" % args.what)
    G = _group(args)
    try:
        res = search_min_dense(G, heuristic=args.heuristic)
    except SearchTooLarge as e:
        raise UsageError(str(e))
    rep = Report("search min-dense", {"group": str(G), "heuristic": args.heuristic})
    rep.result = {
        "size": res.size,
        "subsets": [_fmt(S) for S in res.subsets],
        "representatives_up_to_negation": [_fmt(S) for S in res.representatives],
        "heuristic": res.heuristic,
    }
    return rep, 0


def cmd_witness(args):
    kind = args.kind
    if kind == "torus":
        N = args.seq_len or 100
        B = args.char_bound if args.char_bound is not None else N
        M = mod.Torus()
        S = mod.torus_qc_sequence(N)
        inputs = {"seq_len": N, "char_bound": B}
    elif kind == "zp":
        if not args.prime:
            raise UsageError("--prime is required")
        L = args.levels or 5
        B = args.char_bound if args.char_bound is not None else L
        M = mod.PAdic(args.prime)
        S = mod.zp_qc_sequence(args.prime, L)
        inputs = {"prime": args.prime, "levels": L, "char_bound": B}
    elif kind == "fan":
        if not args.model:
            raise UsageError("--model is required")
        M = mod.parse_model(args.model)
        if not isinstance(M, mod.Product):
            raise UsageError("witness fan needs a product model")
        bounds = det.SequenceBounds(args.seq_len or 20, args.levels or 3, args.char_bound or (args.seq_len or 20), args.support or 2)
        S, B = det.build_sequence(M, bounds)
        inputs = {"model": str(M), "seq_len": bounds.seq_len, "levels": bounds.levels,
                  "char_bound": bounds.char_bound, "support": bounds.support}
    elif kind == "qhat":
        return _witness_qhat(args)
    else:
        raise UsageError("unknown witness kind %r" % kind)
    r = mod.verify_qc_dense_up_to(M, S, B, threads=args.threads)
    mismatches = []
    for chi, _, _ in r.certificates:
        try:
            x, v = mod.constructive_witness(M, chi, S)
        except mod.BoundsInsufficient as e:
            raise UsageError(str(e))
        if in_t_plus(v):
            mismatches.append(chi)
    rep = Report("witness " + kind, inputs)
    rep.bound = str(B)
    ok = r.ok and not mismatches
    rep.result = {"qc_dense": r.ok, "label": r.label, "constructive_agrees": not mismatches,
                  "characters_checked": len(r.certificates) + len(r.failures)}
    if r.failures:
        rep.result["counterexample"] = mod.character_json(M, r.failures[0])
    rep.certificates = certificates_json(M, r.certificates)
    return rep, 0 if ok else 1


def _witness_qhat(args):
    H = args.height or 10
    N0, P0, L0 = sol.required_parameters(H)
    N, P, L = args.seq_len or N0, args.prime_max or P0, args.levels or L0
    X = sol.qhat_qc_sequence(N, P, L)
    rep = Report("witness qhat", {"height": H, "seq_len": N, "prime_max": P, "levels": L})
    try:
        r = sol.verify_qhat_qc_dense(X, H)
    except sol.InsufficientParameters as e:
        raise UsageError(str(e))
    rep.bound = r.bound
    rep.result = {"qc_dense": r.ok, "label": r.label, "characters_checked": len(r.certificates) + len(r.failures)}
    if r.failures:
        rep.result["counterexample"] = format_rational(r.failures[0])
    rep.certificates = certificates_json(None, r.certificates)
    return rep, 0 if r.ok else 1


def cmd_experiment(args):
    if args.what != "theorem1":
        raise UsageError("unknown experiment %r" % args.what)
    d = args.dim or 1
    X = [tuple(parse_rational(c) for c in t) for t in fin.parse_tuples(args.set or "", str)]
    U = _arc(args)
    schedule = [int(s) for s in (args.schedule or "10,100,1000").split(",")]
    res = det.theorem1_experiment(d, X, U, schedule)
    rep = Report("experiment theorem1", {
        "dim": d,
        "set": ",".join("(" + ",".join(format_rational(c) for c in x) + ")" for x in X),
        "arc": str(U),
        "schedule": ",".join(str(m) for m in sorted(schedule)),
    })
    rep.result = {
        "rows": [{"M": r.M, "count": r.count, "fraction": format_rational(r.fraction)} for r in res.rows],
        "density_at_smallest_M": format_rational(res.density) if res.density is not None else None,
        "stable": res.stable,
        "increasing": res.increasing,
    }
    if args.csv:
        det.write_theorem1_csv(res, args.csv)
        rep.result["csv"] = args.csv
    return rep, 0 if res.stable else 1


def _model_bound(M, args):
    B = args.char_bound if args.char_bound is not None else (args.levels or 10)
    if isinstance(M, mod.Product):
        levels = []
        for f in M.factors:
            levels.append(args.levels if isinstance(f, mod.PAdic) and args.levels else B)
        return M.bound(tuple(levels), args.support)
    if isinstance(M, mod.PAdic) and args.levels and args.char_bound is None:
        return args.levels
    return B


# parser ------------------------------------------------------------------------------


def _common(p, group=True, model=False):
    if group:
        p.add_argument("--group", help="finite group, e.g. Z4xZ9")
    if model:
        p.add_argument("--model", help="compact model: T, Zp(3), prod(T,Zp(3))")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qc", description=__doc__.strip().splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hull", help="quasi-convex hull E^>< of a set")
    _common(p)
    p.add_argument("--set", default="")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("polar", help="polar of a set of elements (or of characters with --left)")
    _common(p)
    p.add_argument("--set", default="")
    p.add_argument("--left", action="store_true")
    p.set_defaults(func=cmd_polar)

    p = sub.add_parser("dense", help="is the set qc-dense")
    _common(p, model=True)
    p.add_argument("--set", default="")
    p.add_argument("--char-bound", type=int)
    p.add_argument("--levels", type=int)
    p.add_argument("--support", type=int)
    p.set_defaults(func=cmd_dense)

    p = sub.add_parser("wset", help="W(X,U) for an open arc U")
    _common(p)
    p.add_argument("--set", default="")
    p.add_argument("--arc")
    p.set_defaults(func=cmd_wset)

    p = sub.add_parser("sumset", help="n-fold sumset K_n of X u {0}")
    _common(p)
    p.add_argument("--set", default="")
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_sumset)

    p = sub.add_parser("min-sumset", help="least n with K_n qc-dense")
    _common(p)
    p.add_argument("--set", default="")
    p.add_argument("--arc")
    p.set_defaults(func=cmd_min_sumset)

    p = sub.add_parser("witness", help="witness reports for the explicit qc-dense sequences")
    p.add_argument("kind", choices=["torus", "zp", "qhat", "fan"])
    _common(p, group=False, model=True)
    p.add_argument("--seq-len", type=int)
    p.add_argument("--char-bound", type=int)
    p.add_argument("--prime", type=int)
    p.add_argument("--levels", type=int)
    p.add_argument("--prime-max", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--support", type=int)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("fan", help="fan of subsets of finite factor groups")
    p.add_argument("--factor", action="append", help="factor group, repeat once per factor")
    p.add_argument("--set", action="append", help="subset of the matching factor")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("three-space", help="X qc-dense in G iff f(X) qc-dense in H, on one instance")
    p.add_argument("--hom", help='JSON: {"source":"Z4","target":"Z2","matrix":[[1]]}')
    p.add_argument("--set", default="")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_three_space)

    p = sub.add_parser("near-char", help="W(X,U)={0} for some U vs injectivity of restriction")
    _common(p)
    p.add_argument("--set", default="")
    p.set_defaults(func=cmd_near_char)

    p = sub.add_parser("determine", help="does the subgroup generated by --set determine the group")
    _common(p, model=True)
    p.add_argument("--set", default="")
    p.add_argument("--witness")
    p.add_argument("--char-bound", type=int)
    p.add_argument("--levels", type=int)
    p.add_argument("--support", type=int)
    p.add_argument("--arc")
    p.set_defaults(func=cmd_determine)

    p = sub.add_parser("build-seq", help="qc-dense super-sequence converging to 0")
    _common(p, model=True)
    p.add_argument("--seq-len", type=int)
    p.add_argument("--levels", type=int)
    p.add_argument("--char-bound", type=int)
    p.add_argument("--support", type=int)
    p.set_defaults(func=cmd_build_seq)

    p = sub.add_parser("search", help="exhaustive searches")
    p.add_argument("what", choices=["min-dense"])
    _common(p)
    p.add_argument("--heuristic", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("experiment", help="counting experiments")
    p.add_argument("what", choices=["theorem1"])
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--set", default="", help='points of T^d, e.g. "(1/6,0),(0,1/10)"')
    p.add_argument("--arc")
    p.add_argument("--schedule", default="10,100,1000")
    p.add_argument("--csv")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        rep, code = args.func(args)
    except (UsageError, ValueError, fin.EnumerationCapExceeded) as e:
        print(json.dumps({"command": args.command, "error": str(e)}), file=out)
        return 2
    out.write(rep.finish().dumps() + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
