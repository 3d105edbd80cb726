"""Verification campaigns over seeded instance streams.

A campaign draws ``count`` instances, each from its own seed derived from
the config seed and the instance index, runs one pipeline or verifier per
instance, and writes three files into ``out_dir``:

``records.jsonl``
    one JSON record per instance, in index order
``results.csv``
    one row per instance under the fixed header :data:`CSV_HEADER`
``summary.json``
    the config, max observed tau and pierce size, tau histogram, failures
    and runtimes

A theorem violation halts the campaign; the offending instance is written
under ``out_dir/counterexamples`` and the report's exit code is 3.
"""

from __future__ import annotations

import csv
import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .errors import HypothesisViolation, InvalidParameters, SolverBudgetExhausted, TheoremViolation
from .generators import gen_clusters, gen_dinterval, gen_helly4, gen_quadrant, gen_random_pairwise, gen_random_pq
from .dinterval import kaiser_check
from .geom import Point
from .reduction import pierce_8, pierce_pairwise_p, pierce_pq_composite, pierce_quadrant_condition_p
from .serialize import instance_digest, save_instance
from .solver import min_hitting_set
from .trace import Instance, trace
from .verify import corrupt_pt, find_disjoint_pair, pt_fixture, verify_halman, verify_pach_tardos

CSV_HEADER = ("instance", "seed", "n_rects", "n_points", "tau_exact", "pierce_size", "bound", "verdict", "nodes", "millis")
TIMING_COLUMNS = ("millis",)
CAMPAIGNS = ("pierce8", "pairwise-p", "quadrant-p", "composite", "halman", "kaiser", "pt-verify")

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_THEOREM = 3
EXIT_BUDGET = 4


@dataclass(frozen=True)
class RunConfig:
    campaign: str
    count: int
    seed: int = 0
    n_rects: int = 10
    n_points: int = 30
    span: int = 100
    p: int = 2
    d: Optional[int] = None
    budget: Optional[int] = None
    out_dir: str = "suite-out"
    workers: int = 1

    def __post_init__(self):
        if self.campaign not in CAMPAIGNS:
            raise InvalidParameters(f"unknown campaign {self.campaign!r}; choose from {', '.join(CAMPAIGNS)}")
        if self.count < 0 or self.n_rects < 1 or self.n_points < 1 or self.span < 2:
            raise InvalidParameters("count must be >= 0, sizes >= 1 and span >= 2")
        if self.p < 2:
            raise InvalidParameters("p must be at least 2")
        if self.d is not None and self.d < 2:
            raise InvalidParameters("d must be at least 2")

    def to_dict(self) -> dict:
        # output location is not part of the experiment
        out = asdict(self)
        out.pop("out_dir")
        out.pop("workers")
        return out


def instance_seed(seed: int, index: int) -> int:
    return (seed * 1_000_003 + index) % (2**63)


@dataclass
class _Row:
    n_rects: int
    n_points: int
    tau_exact: Optional[int] = None
    pierce_size: Optional[int] = None
    bound: Optional[int] = None
    verdict: str = "pass"
    nodes: int = 0
    detail: dict = field(default_factory=dict)
    violation: Optional[Instance] = None


def _tau(inst: Instance, budget) -> tuple[int, int]:
    res = min_hitting_set(trace(inst).set_system(), budget=budget)
    return res.value, res.nodes


def _check_piercing(row: _Row, res, inst: Instance, budget) -> _Row:
    row.pierce_size = len(res)
    row.bound = res.bound
    row.tau_exact, tau_nodes = _tau(inst, budget)
    row.nodes = res.nodes + tau_nodes
    row.detail.update({"stage": res.stage, "points": [list(p) for p in res.points],
                       "tau_reduced": res.tau_reduced, "nu_reduced": res.nu_reduced,
                       "nu_trace": res.nu_trace, "faithful": res.faithful})
    if res.family is not None:
        pair = find_disjoint_pair(res.family)
        row.detail["disjoint_pair"] = list(pair) if pair else None
    problems = []
    if len(res) > res.bound:
        problems.append(f"piercing of size {len(res)} exceeds {res.bound}")
    if row.tau_exact > res.bound:
        problems.append(f"exact tau {row.tau_exact} exceeds {res.bound}")
    if res.faithful is False:
        problems.append("4-interval membership differs from containment")
    if res.nu_reduced is not None and res.nu_trace is not None and res.nu_reduced > res.nu_trace:
        problems.append(f"4-interval packing {res.nu_reduced} exceeds trace packing {res.nu_trace}")
    if problems:
        row.verdict = "fail"
        row.detail["problems"] = problems
        row.violation = inst
    return row


def _size_rng(seed: int) -> random.Random:
    # sizes use a stream separate from the generator's own
    return random.Random(seed ^ 0x5EED)


def _run_pierce8(cfg: RunConfig, seed: int) -> _Row:
    nr = _size_rng(seed).randint(1, cfg.n_rects)
    inst = gen_random_pairwise(seed, nr, cfg.n_points, cfg.span)
    row = _Row(len(inst.rects), len(inst.points))
    return _check_piercing(row, pierce_8(inst, cfg.budget), inst, cfg.budget)


def _run_pairwise_p(cfg: RunConfig, seed: int) -> _Row:
    nr = _size_rng(seed).randint(1, cfg.n_rects)
    inst = gen_random_pq(seed, nr, cfg.n_points, cfg.span, cfg.p, avoid_core=False)
    row = _Row(len(inst.rects), len(inst.points))
    return _check_piercing(row, pierce_pairwise_p(inst, cfg.p, budget=cfg.budget), inst, cfg.budget)


def _run_quadrant_p(cfg: RunConfig, seed: int) -> _Row:
    nr = _size_rng(seed).randint(1, cfg.n_rects)
    inst = gen_quadrant(seed, nr, cfg.n_points, cfg.span, cfg.p)
    origin = Point(*inst.metadata["origin"])
    row = _Row(len(inst.rects), len(inst.points), detail={"origin": list(origin)})
    res = pierce_quadrant_condition_p(inst, cfg.p, origin, budget=cfg.budget)
    return _check_piercing(row, res, inst, cfg.budget)


def _run_composite(cfg: RunConfig, seed: int) -> _Row:
    rng = _size_rng(seed)
    n_clusters = rng.randint(1, cfg.p + 1)
    per = max(1, rng.randint(1, cfg.n_rects) // n_clusters)
    inst = gen_clusters(seed, n_clusters, per, cfg.n_points, cfg.span, cfg.p)
    row = _Row(len(inst.rects), len(inst.points))
    res = pierce_pq_composite(inst, cfg.p, budget=cfg.budget)
    row.detail.update({"geometric_tau": res.geometric_tau, "n_classes": len(res.classes)})
    return _check_piercing(row, res, inst, cfg.budget)


def _run_halman(cfg: RunConfig, seed: int) -> _Row:
    nr = _size_rng(seed).randint(1, cfg.n_rects)
    inst = gen_helly4(seed, nr, cfg.n_points, cfg.span)
    rep = verify_halman(inst)
    row = _Row(len(inst.rects), len(inst.points), bound=4, verdict=rep.verdict, detail=dict(rep.quantities))
    if rep.verdict == "pass":
        row.tau_exact, row.nodes = _tau(inst, cfg.budget)
    elif rep.verdict == "fail":
        row.violation = inst
        row.detail["witness"] = rep.witness
    return row


def _run_kaiser(cfg: RunConfig, seed: int) -> _Row:
    rng = _size_rng(seed)
    d = cfg.d if cfg.d is not None else rng.randint(2, 4)
    fam = gen_dinterval(seed, d, rng.randint(1, cfg.n_rects), 12)
    rep = kaiser_check(fam, cfg.budget)
    return _Row(
        len(fam.members), sum(fam.line_sizes), tau_exact=rep.tau, bound=rep.bound,
        verdict="pass" if rep.passed else "fail", nodes=rep.nodes,
        detail={"d": d, "nu_exact": rep.nu, "tau_certificate": list(rep.tau_certificate),
                "nu_certificate": list(rep.nu_certificate)},
    )


_PT_CASES = (None, "overlap", "count", "classes")


def _run_pt(cfg: RunConfig, seed: int, index: int) -> _Row:
    # fixture plus its three corruptions in rotation; the verdict says whether the verifier judged correctly
    kind = _PT_CASES[index % len(_PT_CASES)]
    pt = pt_fixture(cfg.d or 2, 1)
    expected = None
    if kind is not None:
        pt, expected = corrupt_pt(pt, kind)
    rep = verify_pach_tardos(pt)
    if kind is None:
        correct = rep.verdict == "pass"
    else:
        check = {"overlap": "class_disjoint", "count": "points_per_rect", "classes": "class_count"}[kind]
        w = rep.checks[check].get("witness")
        got = {k: w[k] for k in expected} if isinstance(expected, dict) and isinstance(w, dict) else w
        correct = rep.verdict == "fail" and got == expected
    return _Row(
        len(pt.rects), len(pt.points), tau_exact=None, bound=2**pt.d,
        verdict="pass" if correct else "fail",
        detail={"case": kind or "valid", "verifier_verdict": rep.verdict, "witness": rep.witness,
                "quantities": rep.quantities},
    )


_RUNNERS: dict[str, Callable] = {
    "pierce8": _run_pierce8,
    "pairwise-p": _run_pairwise_p,
    "quadrant-p": _run_quadrant_p,
    "composite": _run_composite,
    "halman": _run_halman,
    "kaiser": _run_kaiser,
}


def run_instance(cfg: RunConfig, index: int) -> dict:
    """Run one campaign instance and return its record (counterexample instance under ``_violation``)."""
    seed = instance_seed(cfg.seed, index)
    start = time.perf_counter()
    try:
        if cfg.campaign == "pt-verify":
            row = _run_pt(cfg, seed, index)
        else:
            row = _RUNNERS[cfg.campaign](cfg, seed)
    except TheoremViolation as exc:
        row = _Row(len(exc.instance.rects), len(exc.instance.points), verdict="fail",
                   detail={"problems": [str(exc)]}, violation=exc.instance)
    except SolverBudgetExhausted as exc:
        row = _Row(0, 0, verdict="budget", nodes=exc.nodes, detail={"error": str(exc)})
    except HypothesisViolation as exc:
        row = _Row(0, 0, verdict="hypothesis-unmet", detail={"error": str(exc)})
    millis = round((time.perf_counter() - start) * 1000, 3)
    record = {
        "instance": index, "seed": seed, "n_rects": row.n_rects, "n_points": row.n_points,
        "tau_exact": row.tau_exact, "pierce_size": row.pierce_size, "bound": row.bound,
        "verdict": row.verdict, "nodes": row.nodes, "millis": millis, "detail": row.detail,
    }
    if row.violation is not None:
        record["_violation"] = row.violation
    return record


def _run_indexed(args) -> dict:
    return run_instance(*args)


@dataclass(frozen=True)
class SuiteReport:
    exit_code: int
    records: tuple[dict, ...]
    csv_path: Path
    jsonl_path: Path
    summary_path: Path
    counterexample: Optional[Path] = None

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.records if r["verdict"] == "fail"]


def _summary(cfg: RunConfig, records: list[dict], counterexample: Optional[Path]) -> dict:
    taus = [r["tau_exact"] for r in records if r["tau_exact"] is not None]
    sizes = [r["pierce_size"] for r in records if r["pierce_size"] is not None]
    verdicts = Counter(r["verdict"] for r in records)
    millis = [r["millis"] for r in records]
    return {
        "config": cfg.to_dict(),
        "instances": len(records),
        "max_tau_exact": max(taus, default=None),
        "max_pierce_size": max(sizes, default=None),
        "tau_histogram": {str(k): v for k, v in sorted(Counter(taus).items())},
        "verdicts": dict(sorted(verdicts.items())),
        "failures": [r["instance"] for r in records if r["verdict"] == "fail"],
        "counterexample": str(counterexample) if counterexample else None,
        "millis_total": round(sum(millis), 3),
        "millis_max": max(millis, default=None),
    }


def run_suite(cfg: RunConfig) -> SuiteReport:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(cfg, i) for i in range(cfg.count)]
    records: list[dict] = []
    counterexample = None

    def consume(stream):
        nonlocal counterexample
        for rec in stream:
            violation = rec.pop("_violation", None)
            records.append(rec)
            if violation is not None:
                counterexample = out / "counterexamples" / f"instance-{rec['instance']}-{instance_digest(violation)[:12]}.json"
                save_instance(violation, counterexample)
                rec["detail"]["counterexample"] = str(counterexample)
                return

    if cfg.workers > 1 and jobs:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            # map yields in submission order, so records stay ordered by index
            consume(pool.map(_run_indexed, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        consume(map(_run_indexed, jobs))

    jsonl_path = out / "records.jsonl"
    with jsonl_path.open("w") as fh:
        for rec in records:
            fh.write(json.dumps({"config": cfg.to_dict(), **rec}, sort_keys=True) + "\n")
    csv_path = out / "results.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(["" if rec[c] is None else rec[c] for c in CSV_HEADER])
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(_summary(cfg, records, counterexample), indent=2) + "\n")

    verdicts = {r["verdict"] for r in records}
    if "fail" in verdicts:
        code = EXIT_THEOREM
    elif "budget" in verdicts:
        code = EXIT_BUDGET
    elif "hypothesis-unmet" in verdicts:
        code = EXIT_HYPOTHESIS
    else:
        code = EXIT_OK
    return SuiteReport(code, tuple(records), csv_path, jsonl_path, summary_path, counterexample)


def read_csv_rows(path, drop_timing: bool = True) -> list[dict]:
    """Rows of a results CSV, optionally without the timing columns (for determinism checks)."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if drop_timing:
        for row in rows:
            for c in TIMING_COLUMNS:
                row.pop(c, None)
    return rows
