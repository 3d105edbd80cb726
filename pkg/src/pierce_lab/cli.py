"""Command line entry point: ``pierce-lab <verb> [flags]``.

Results go to stdout as JSON. Exit codes: 0 success, 1 usage or input
error, 2 the input violates a hypothesis, 3 a proven bound failed (the
counterexample is written to disk), 4 the solver node budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dinterval import DIntervalFamily, kaiser_check
from .errors import HypothesisViolation, PierceLabError, SolverBudgetExhausted, TheoremViolation
from .generators import (
    gen_clusters,
    gen_cycle,
    gen_dinterval,
    gen_helly4,
    gen_quadrant,
    gen_random_pairwise,
    gen_random_pq,
    triangle_fixture,
)
from .geom import Point
from .reduction import pierce_8, pierce_pairwise_p, pierce_pq_composite, pierce_quadrant_condition_p
from .serialize import (
    dinterval_from_dict,
    dinterval_to_dict,
    dumps,
    instance_digest,
    instance_from_dict,
    instance_to_dict,
    load_json,
    save_dinterval,
)
from .solver import max_packing, min_hitting_set
from .suite import CAMPAIGNS, EXIT_BUDGET, EXIT_HYPOTHESIS, EXIT_OK, EXIT_THEOREM, RunConfig, run_suite
from .trace import Instance, has_pq_property, trace
from .verify import PTInstance, pt_fixture, verify_halman, verify_pach_tardos

EXIT_ERROR = 1
GEN_KINDS = ("pairwise", "pq", "quadrant", "clusters", "helly4", "cycle", "triangle", "dinterval", "pt")


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load(path):
    """Instance or d-interval family, told apart by the ``d`` key."""
    if path is None:
        raise PierceLabError("--in is required")
    data = load_json(path)
    if "d" in data and "members" in data:
        return dinterval_from_dict(data)
    return instance_from_dict(data)


def _load_instance(path) -> Instance:
    obj = _load(path)
    if not isinstance(obj, Instance):
        raise PierceLabError(f"{path} holds a d-interval family, not an instance")
    return obj


def _dump_path(args, inst: Instance) -> Path:
    if args.dump:
        return Path(args.dump)
    return Path(f"counterexample-{instance_digest(inst)[:12]}.json")


def _result_json(res, inst: Instance) -> dict:
    out = {
        "digest": instance_digest(inst),
        "stage": res.stage,
        "size": len(res),
        "bound": res.bound,
        "points": [list(p) for p in res.points],
        "point_indices": list(res.point_indices),
        "nodes": res.nodes,
    }
    if res.guards is not None:
        out["guards"] = list(res.guards.indices)
    if res.origin is not None:
        out["origin"] = list(res.origin)
    for key in ("tau_reduced", "nu_reduced", "nu_trace", "faithful", "geometric_tau"):
        if getattr(res, key) is not None:
            out[key] = getattr(res, key)
    if res.classes:
        out["classes"] = [
            {"anchor": list(c.anchor), "rects": list(c.rect_indices), "points": list(c.result.point_indices)}
            for c in res.classes
        ]
    return out


def cmd_gen(args) -> int:
    kind = args.kind
    count = args.count or 1
    docs = []
    for i in range(count):
        seed = args.seed + i
        if kind == "pairwise":
            obj = gen_random_pairwise(seed, args.n_rects, args.n_points, args.span)
        elif kind == "pq":
            obj = gen_random_pq(seed, args.n_rects, args.n_points, args.span, args.p)
        elif kind == "quadrant":
            obj = gen_quadrant(seed, args.n_rects, args.n_points, args.span, args.p)
        elif kind == "clusters":
            obj = gen_clusters(seed, args.clusters, max(1, args.n_rects // args.clusters), args.n_points,
                               args.span, args.p)
        elif kind == "helly4":
            obj = gen_helly4(seed, args.n_rects, args.n_points, args.span)
        elif kind == "cycle":
            obj = gen_cycle(args.k)
        elif kind == "triangle":
            obj = triangle_fixture()
        elif kind == "dinterval":
            obj = gen_dinterval(seed, args.d or 2, args.n_rects, args.max_line)
        else:
            obj = pt_fixture(args.d or 2, 1).as_instance()
        docs.append(dinterval_to_dict(obj) if isinstance(obj, DIntervalFamily) else instance_to_dict(obj))

    if args.out is None:
        for doc in docs:
            print(dumps(doc))
        return EXIT_OK
    out = Path(args.out)
    if count == 1:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(dumps(docs[0]) + "\n")
    else:
        out.mkdir(parents=True, exist_ok=True)
        for i, doc in enumerate(docs):
            (out / f"{kind}-{args.seed + i}.json").write_text(dumps(doc) + "\n")
    return EXIT_OK


def _set_system(obj):
    return obj.set_system() if isinstance(obj, DIntervalFamily) else trace(obj).set_system()


def cmd_tau(args) -> int:
    obj = _load(args.in_path)
    res = min_hitting_set(_set_system(obj), budget=args.budget)
    out = {"tau": res.value, "certificate": list(res.certificate), "nodes": res.nodes}
    if isinstance(obj, Instance):
        out["points"] = [list(obj.points[i]) for i in res.certificate]
    _emit(out, args.out)
    return EXIT_OK


def cmd_nu(args) -> int:
    obj = _load(args.in_path)
    res = max_packing(_set_system(obj), budget=args.budget)
    _emit({"nu": res.value, "certificate": list(res.certificate), "nodes": res.nodes}, args.out)
    return EXIT_OK


def cmd_pierce8(args) -> int:
    inst = _load_instance(args.in_path)
    res = pierce_8(inst, args.budget, dump_path=_dump_path(args, inst))
    _emit(_result_json(res, inst), args.out)
    return EXIT_OK


def cmd_pierce_p(args) -> int:
    inst = _load_instance(args.in_path)
    origin = Point(*args.origin) if args.origin else None
    res = pierce_pairwise_p(inst, args.p, origin=origin, budget=args.budget, dump_path=_dump_path(args, inst))
    _emit(_result_json(res, inst), args.out)
    return EXIT_OK


def cmd_pierce_quadrant_p(args) -> int:
    inst = _load_instance(args.in_path)
    if args.origin:
        origin = Point(*args.origin)
    elif "origin" in inst.metadata:
        origin = Point(*inst.metadata["origin"])
    else:
        raise PierceLabError("an origin is required: pass --origin X Y or store it in the instance metadata")
    res = pierce_quadrant_condition_p(inst, args.p, origin, budget=args.budget, dump_path=_dump_path(args, inst))
    _emit(_result_json(res, inst), args.out)
    return EXIT_OK


def cmd_pierce_composite(args) -> int:
    inst = _load_instance(args.in_path)
    res = pierce_pq_composite(inst, args.p, budget=args.budget, dump_path=_dump_path(args, inst))
    _emit(_result_json(res, inst), args.out)
    return EXIT_OK


def cmd_check_pq(args) -> int:
    inst = _load_instance(args.in_path)
    res = has_pq_property(trace(inst), args.p, args.q)
    _emit({"p": args.p, "q": args.q, "holds": res.holds, "witness": res.witness and list(res.witness),
           "method": res.method}, args.out)
    return EXIT_OK if res.holds else EXIT_HYPOTHESIS


def cmd_verify_halman(args) -> int:
    inst = _load_instance(args.in_path)
    dump = _dump_path(args, inst)
    rep = verify_halman(inst, dump_path=dump)
    rec = rep.to_record()
    if rep.verdict == "fail":
        rec["counterexample"] = str(dump)
    _emit(rec, args.out)
    return {"pass": EXIT_OK, "hypothesis-unmet": EXIT_HYPOTHESIS, "fail": EXIT_THEOREM}[rep.verdict]


def cmd_verify_kaiser(args) -> int:
    if args.in_path:
        fams = [_load(args.in_path)]
        if not isinstance(fams[0], DIntervalFamily):
            raise PierceLabError(f"{args.in_path} holds an instance, not a d-interval family")
    else:
        fams = [gen_dinterval(args.seed + i, args.d or 2, args.n_rects, args.max_line) for i in range(args.count or 1)]
    reports = []
    code = EXIT_OK
    for i, fam in enumerate(fams):
        rep = kaiser_check(fam, args.budget)
        reports.append({"family": i, "d": rep.d, "tau": rep.tau, "nu": rep.nu, "bound": rep.bound,
                        "passed": rep.passed, "tau_certificate": list(rep.tau_certificate),
                        "nu_certificate": list(rep.nu_certificate)})
        if not rep.passed:
            dump = Path(args.dump or f"dinterval-counterexample-{i}.json")
            save_dinterval(fam, dump)
            reports[-1]["counterexample"] = str(dump)
            code = EXIT_THEOREM
    _emit(reports if len(reports) > 1 else reports[0], args.out)
    return code


def cmd_verify_pt(args) -> int:
    if args.in_path:
        pt = PTInstance.from_instance(_load_instance(args.in_path))
    else:
        pt = pt_fixture(args.d or 2, 1)
    rep = verify_pach_tardos(pt)
    _emit(rep.to_record(), args.out)
    return EXIT_OK if rep.passed else EXIT_HYPOTHESIS


def cmd_run_suite(args) -> int:
    cfg = RunConfig(
        campaign=args.campaign,
        count=args.count if args.count is not None else 100,
        seed=args.seed,
        n_rects=args.n_rects,
        n_points=args.n_points,
        span=args.span,
        p=args.p,
        d=args.d,
        budget=args.budget,
        out_dir=args.out or f"suite-{args.campaign}",
        workers=args.workers,
    )
    report = run_suite(cfg)
    summary = json.loads(report.summary_path.read_text())
    summary["csv"] = str(report.csv_path)
    summary["records"] = str(report.jsonl_path)
    _emit(summary)
    if report.counterexample:
        print(f"counterexample written to {report.counterexample}", file=sys.stderr)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--in", dest="in_path", help="input JSON file (instance or d-interval family)")
    common.add_argument("--out", help="output file (or directory for gen --count > 1 and run-suite)")
    common.add_argument("--p", type=int, default=2)
    common.add_argument("--q", type=int, default=2)
    common.add_argument("--d", type=int, default=None)
    common.add_argument("--budget", type=int, default=None, help="solver node budget (default: $PIERCE_LAB_BUDGET or 10^7)")
    common.add_argument("--count", type=int, default=None)
    common.add_argument("--dump", help="where to write a counterexample instance")
    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--n-rects", type=int, default=10)
    sizes.add_argument("--n-points", type=int, default=30)
    sizes.add_argument("--span", type=int, default=100)
    sizes.add_argument("--max-line", type=int, default=12, help="largest line size for d-interval families")

    ap = argparse.ArgumentParser(prog="pierce-lab", description="Exact piercing experiments for rectangles and points.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text, parents=(common,)):
        p = sub.add_parser(name, parents=list(parents), help=help_text)
        p.set_defaults(func=func)
        return p

    g = verb("gen", cmd_gen, "write seeded instances", (common, sizes))
    g.add_argument("--kind", choices=GEN_KINDS, default="pairwise")
    g.add_argument("--k", type=int, default=4, help="rectangle count for --kind cycle")
    g.add_argument("--clusters", type=int, default=2)
    verb("tau", cmd_tau, "exact piercing number of the trace")
    verb("nu", cmd_nu, "exact packing number of the trace")
    verb("pierce8", cmd_pierce8, "pierce a pairwise trace-intersecting family with at most 8 points")
    pp = verb("pierce-p", cmd_pierce_p, "pierce a pairwise intersecting (p,2) family with at most 12(p-1) points")
    pp.add_argument("--origin", type=int, nargs=2, metavar=("X", "Y"))
    pq = verb("pierce-quadrant-p", cmd_pierce_quadrant_p, "pierce under the opposite-quadrant condition")
    pq.add_argument("--origin", type=int, nargs=2, metavar=("X", "Y"))
    verb("pierce-composite", cmd_pierce_composite, "pierce a (p,2) family class by class")
    verb("check-pq", cmd_check_pq, "test the (p,q)-property of the trace (exit 2 if it fails)")
    verb("verify-halman", cmd_verify_halman, "check that 4-wise trace intersection forces a common point")
    verb("verify-kaiser", cmd_verify_kaiser, "check tau <= (d^2 - d) nu on d-interval families", (common, sizes))
    verb("verify-pt", cmd_verify_pt, "structural checks on a lower-bound instance (fixture if no --in)")
    rs = verb("run-suite", cmd_run_suite, "run a seeded verification campaign", (common, sizes))
    rs.add_argument("--campaign", choices=CAMPAIGNS, required=True)
    rs.add_argument("--workers", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except TheoremViolation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_THEOREM
    except SolverBudgetExhausted as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    except (PierceLabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
