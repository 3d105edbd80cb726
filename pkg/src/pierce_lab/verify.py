"""Verification harnesses: the discrete Helly number for planar boxes,
disjoint-pair certificates, and a structural checker for the rectangle
families used in lower-bound constructions."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Any, Optional, Union

from .dinterval import DIntervalFamily
from .errors import InvalidParameters
from .geom import Point, Rect, rects_intersect
from .serialize import instance_digest, save_instance
from .solver import SetSystem, max_packing
from .trace import Instance, TraceFamily, trace

HALMAN_MAX_RECTS = 40
PT_EXACT_LIMIT = 24


@dataclass(frozen=True)
class VerifyReport:
    """One verdict per instance: ``pass``, ``fail`` or ``hypothesis-unmet``.

    A ``fail`` always carries a witness that can be re-checked against the
    instance.
    """

    theorem: str
    digest: str
    verdict: str
    witness: Any = None
    quantities: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_record(self) -> dict:
        return asdict(self)


def verify_halman(inst: Instance, max_rects: int = HALMAN_MAX_RECTS, dump_path=None) -> VerifyReport:
    """Check that intersecting traces on all subfamilies of size <= 4 force a common point of P."""
    n = len(inst.rects)
    if n > max_rects:
        raise InvalidParameters(f"size limit exceeded: {n} rectangles > {max_rects}")
    digest = instance_digest(inst)
    masks = trace(inst).masks

    # smallest failing subfamily first: scan by size
    for size in range(1, min(4, n) + 1):
        for combo in itertools.combinations(range(n), size):
            acc = -1
            for i in combo:
                acc &= masks[i]
            if not acc:
                return VerifyReport("helly-boxes-d2", digest, "hypothesis-unmet", list(combo), {"n_rects": n})

    full = -1
    for m in masks:
        full &= m
    if n == 0 or full:
        common = bin(full).count("1") if n else len(inst.points)
        return VerifyReport("helly-boxes-d2", digest, "pass", None, {"n_rects": n, "common_points": common})
    # hypothesis met, conclusion failed: a counterexample
    if dump_path is not None:
        save_instance(inst, dump_path)
    return VerifyReport("helly-boxes-d2", digest, "fail", list(range(n)), {"n_rects": n})


def _masks_of(fam) -> list[int]:
    if isinstance(fam, DIntervalFamily):
        return fam.set_system().masks
    if isinstance(fam, (TraceFamily, SetSystem)):
        return fam.masks
    raise TypeError(f"unsupported family type {type(fam).__name__}")


def find_disjoint_pair(fam: Union[DIntervalFamily, TraceFamily, SetSystem]) -> Optional[tuple[int, int]]:
    masks = _masks_of(fam)
    for i, j in itertools.combinations(range(len(masks)), 2):
        if not masks[i] & masks[j]:
            return (i, j)
    return None


@dataclass(frozen=True)
class PTInstance:
    rects: tuple[Rect, ...]
    labels: tuple[int, ...]
    points: tuple[Point, ...]
    d: int
    r: int

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        object.__setattr__(self, "labels", tuple(int(c) for c in self.labels))
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.labels) != len(self.rects):
            raise InvalidParameters("one class label per rectangle is required")

    def as_instance(self) -> Instance:
        return Instance.build(
            self.points, self.rects, {"d": self.d, "r": self.r, "class_labels": list(self.labels)}
        )

    @classmethod
    def from_instance(cls, inst: Instance) -> "PTInstance":
        md = inst.metadata
        try:
            return cls(inst.rects, tuple(md["class_labels"]), inst.points, int(md["d"]), int(md["r"]))
        except KeyError as exc:
            raise InvalidParameters(f"instance metadata lacks {exc}") from None


def largest_r(d: int) -> int:
    """Largest r >= 0 with 4 r 4^r <= d (0 when even r = 1 is too large)."""
    r = 0
    while 4 * (r + 1) * 4 ** (r + 1) <= d:
        r += 1
    return r


def verify_pach_tardos(pt: PTInstance) -> VerifyReport:
    """Check the listed structural properties of a supplied instance.

    Structural checks decide the verdict: class layout, within-class
    disjointness, point counts, and (for small instances) the exact packing
    number of the trace. Parameter consistency is reported on its own.
    """
    inst = Instance.build(pt.points, pt.rects)
    digest = instance_digest(inst)
    k = 2**pt.d
    checks: dict[str, dict] = {}

    classes = sorted(set(pt.labels))
    expected = list(range(pt.d + 1))
    if classes != expected:
        checks["class_count"] = {"status": "fail", "witness": {"labels": classes, "expected": expected}}
    else:
        checks["class_count"] = {"status": "pass"}

    bad_size = next(
        ((c, pt.labels.count(c)) for c in classes if pt.labels.count(c) != k), None
    )
    checks["class_size"] = (
        {"status": "fail", "witness": {"class": bad_size[0], "size": bad_size[1], "expected": k}}
        if bad_size
        else {"status": "pass"}
    )

    overlap = None
    for i, j in itertools.combinations(range(len(pt.rects)), 2):
        if pt.labels[i] == pt.labels[j] and rects_intersect(pt.rects[i], pt.rects[j]):
            overlap = (i, j)
            break
    checks["class_disjoint"] = (
        {"status": "fail", "witness": list(overlap)} if overlap else {"status": "pass"}
    )

    n_expected = pt.r * k
    checks["point_count"] = (
        {"status": "pass"}
        if len(inst.points) == n_expected
        else {"status": "fail", "witness": {"points": len(inst.points), "expected": n_expected}}
    )
    tf = trace(inst)
    bad_rect = next(
        ((i, len(s)) for i, s in enumerate(tf.member_sets) if len(s) != pt.r), None
    )
    checks["points_per_rect"] = (
        {"status": "fail", "witness": {"rect": bad_rect[0], "count": bad_rect[1], "expected": pt.r}}
        if bad_rect
        else {"status": "pass"}
    )

    quantities: dict[str, Any] = {"k": k, "n_rects": len(pt.rects), "n_points": len(inst.points)}
    if len(pt.rects) <= PT_EXACT_LIMIT:
        exact = max_packing(tf.set_system())
        lower = 0
        for c in classes:
            members = [i for i, lab in enumerate(pt.labels) if lab == c]
            if all(tf.member_sets[i] for i in members) and tf.set_system().pairwise_disjoint(members):
                lower = max(lower, len(members))
        min_per_rect = min((len(s) for s in tf.member_sets), default=0)
        upper = len(inst.points) // min_per_rect if min_per_rect else None
        quantities.update({"nu_exact": exact.value, "nu_class_lower": lower, "nu_pigeonhole_upper": upper})
        if exact.value == k and lower == k:
            checks["packing"] = {"status": "pass"}
        else:
            checks["packing"] = {
                "status": "fail",
                "witness": {"nu_exact": exact.value, "nu_class_lower": lower, "expected": k,
                            "packing": list(exact.certificate)},
            }
    else:
        checks["packing"] = {"status": "not-checked", "reason": f"more than {PT_EXACT_LIMIT} rectangles"}

    r_star = largest_r(pt.d)
    params_ok = 4 * pt.r * 4**pt.r <= pt.d and pt.r == r_star
    checks["parameters"] = {
        "status": "pass" if params_ok else "fail",
        "witness": None if params_ok else {"d": pt.d, "r": pt.r, "largest_r": r_star,
                                           "4r4^r": 4 * pt.r * 4**pt.r},
        "structural": False,
    }
    checks["epsilon_net_bound"] = {"status": "not-checked", "structural": False}

    structural = ["class_count", "class_size", "class_disjoint", "point_count", "points_per_rect", "packing"]
    failed = [name for name in structural if checks[name]["status"] == "fail"]
    if failed:
        first = failed[0]
        return VerifyReport("lower-bound-structure", digest, "fail", {"check": first, **_as_dict(checks[first]["witness"])},
                            quantities, checks)
    return VerifyReport("lower-bound-structure", digest, "pass", None, quantities, checks)


def _as_dict(w) -> dict:
    return w if isinstance(w, dict) else {"value": w}


def pt_fixture(d: int = 2, r: int = 1) -> PTInstance:
    """Synthetic instance with the structural properties for given d, r.

    2^d cells spaced 10 apart on the x-axis, r points per cell; class c
    contains one rectangle per cell, shaped differently per class.
    """
    k = 2**d
    points = [Point(10 * cell, j) for cell in range(k) for j in range(r)]
    rects, labels = [], []
    for c in range(d + 1):
        w = 1 + c % 4
        for cell in range(k):
            rects.append(Rect(10 * cell - w, 10 * cell + w, -1 - c, r + c))
            labels.append(c)
    return PTInstance(tuple(rects), tuple(labels), tuple(points), d, r)


def corrupt_pt(pt: PTInstance, kind: str) -> tuple[PTInstance, Any]:
    """Break one property of a fixture built by :func:`pt_fixture`.

    Returns the corrupted instance and the witness a correct verifier
    should report.
    """
    rects = list(pt.rects)
    labels = list(pt.labels)
    k = 2**pt.d
    if kind == "overlap":
        # class-0 rectangle of cell 0 reaches x = 9, the left edge of cell 1's rectangle
        r0 = rects[0]
        rects[0] = Rect(r0.x_lo, 9, r0.y_lo, r0.y_hi)
        return PTInstance(tuple(rects), tuple(labels), pt.points, pt.d, pt.r), [0, 1]
    if kind == "count":
        # class-1 rectangle of cell 0 lifted above every point
        i = k
        r1 = rects[i]
        rects[i] = Rect(r1.x_lo, r1.x_hi, pt.r + 1, pt.r + 3)
        return PTInstance(tuple(rects), tuple(labels), pt.points, pt.d, pt.r), {"rect": i, "count": 0}
    if kind == "classes":
        keep = [i for i, lab in enumerate(labels) if lab != pt.d]
        new = PTInstance(tuple(rects[i] for i in keep), tuple(labels[i] for i in keep), pt.points, pt.d, pt.r)
        return new, {"labels": list(range(pt.d)), "expected": list(range(pt.d + 1))}
    raise InvalidParameters(f"unknown corruption {kind!r}")
