"""Constructive piercing pipelines for pairwise-intersecting rectangle families.

All pipelines share one reduction. With the origin placed inside every
rectangle, a rectangle's points of P in a fixed quadrant are exactly the
points whose absolute offsets are at most the rectangle's reach in that
quadrant. Keeping only the Pareto-minimal points of each quadrant gives four
ordered chains on which every rectangle meets a contiguous index range, so
the family becomes a family of 4-intervals and can be pierced exactly. The
chain points are points of P, so a piercing set of the 4-intervals is
already a subset of P.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .dinterval import DIntervalFamily, dinterval_nu, dinterval_tau
from .errors import HypothesisViolation, InvalidParameters, TheoremViolation
from .geom import Point, Quadrant, Rect, classify_quadrant, closed_quadrants, common_intersection, rects_intersect
from .solver import geometric_pierce, max_packing
from .trace import Instance, has_pq_property, pairwise_trace_witness, trace
from .verify import find_disjoint_pair

PIERCE_8_BOUND = 8
GUARD_FREE_BOUND = 4


@dataclass(frozen=True)
class GuardSet:
    """Up to four extreme points of P around the common intersection [a,b] x [c,d].

    Entries are P indices (None when the strip holds no point), in the order
    left strip (max x), right strip (min x), bottom strip (max y), top strip (min y).
    """

    s1: Optional[int] = None
    s2: Optional[int] = None
    s3: Optional[int] = None
    s4: Optional[int] = None

    @property
    def indices(self) -> list[int]:
        return [i for i in (self.s1, self.s2, self.s3, self.s4) if i is not None]

    def points(self, inst: Instance) -> list[Point]:
        return [inst.points[i] for i in self.indices]


def select_guards(inst: Instance) -> GuardSet:
    core = common_intersection(inst.rects).rect
    if core is None:
        raise HypothesisViolation("family not pairwise intersecting")
    a, b, c, d = core.x_lo, core.x_hi, core.y_lo, core.y_hi
    best: list[Optional[int]] = [None] * 4
    key: list = [None] * 4
    for j, p in enumerate(inst.points):
        if c <= p.y <= d:
            if p.x < a:
                slot, k = 0, p.x
            elif p.x > b:
                slot, k = 1, -p.x
            else:
                continue
        elif a <= p.x <= b:
            if p.y < c:
                slot, k = 2, p.y
            else:
                slot, k = 3, -p.y
        else:
            continue
        # strict improvement only, so ties keep the lowest index
        if best[slot] is None or k > key[slot]:
            best[slot], key[slot] = j, k
    return GuardSet(*best)


def residual_family(inst: Instance, guards: GuardSet) -> Instance:
    """Rectangles of ``inst`` containing none of the guard points."""
    gpts = guards.points(inst)
    keep = [i for i, r in enumerate(inst.rects) if not any(r.contains(g) for g in gpts)]
    return inst.with_rects(keep)


class ClaimCheck(NamedTuple):
    ok: bool
    witness: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def check_claim_quadrants(inst: Instance, origin: Point) -> ClaimCheck:
    """Does every rectangle hold P points in closed quadrants 1 and 3, or in 2 and 4?

    Returns the index of the first rectangle that does not.
    """
    for i, r in enumerate(inst.rects):
        seen: set[Quadrant] = set()
        for p in inst.points:
            if r.contains(p):
                seen |= closed_quadrants(p, origin)
        if not ({Quadrant.Q1, Quadrant.Q3} <= seen or {Quadrant.Q2, Quadrant.Q4} <= seen):
            return ClaimCheck(False, i)
    return ClaimCheck(True)


@dataclass(frozen=True)
class ChainSystem:
    """Pareto-minimal points of P in each quadrant around ``origin``.

    ``chains[q]`` lists P indices for quadrant q+1, sorted by increasing
    |dx| (then |dy|); along a chain |dx| strictly increases and |dy|
    strictly decreases. ``abs_dx`` / ``abs_dy`` hold those offsets.
    """

    origin: Point
    chains: tuple[tuple[int, ...], ...]
    points: tuple[Point, ...] = field(repr=False)
    abs_dx: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    abs_dy: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    def chain_points(self, q: int) -> list[Point]:
        return [self.points[i] for i in self.chains[q]]

    @property
    def line_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.chains)

    def p_index(self, line: int, index: int) -> int:
        return self.chains[line][index]


def _offsets(p: Point, origin: Point) -> tuple[int, int]:
    return abs(p.x - origin.x), abs(p.y - origin.y)


def build_chains(points: Sequence[Point], origin: Point) -> ChainSystem:
    buckets: list[list[int]] = [[], [], [], []]
    for j, p in enumerate(points):
        buckets[classify_quadrant(p, origin) - 1].append(j)
    chains, dxs, dys = [], [], []
    for bucket in buckets:
        bucket.sort(key=lambda j: (_offsets(points[j], origin), j))
        chain: list[int] = []
        lowest_dy = None
        for j in bucket:
            dy = _offsets(points[j], origin)[1]
            # a later point has |dx| >= every kept point, so it survives only with a smaller |dy|
            if lowest_dy is None or dy < lowest_dy:
                chain.append(j)
                lowest_dy = dy
        chains.append(tuple(chain))
        dxs.append(tuple(_offsets(points[j], origin)[0] for j in chain))
        dys.append(tuple(_offsets(points[j], origin)[1] for j in chain))
    return ChainSystem(origin, tuple(chains), tuple(points), tuple(dxs), tuple(dys))


@dataclass(frozen=True)
class FourInterval:
    ranges: tuple[Optional[tuple[int, int]], ...]

    def __iter__(self):
        return iter(self.ranges)

    @property
    def empty(self) -> bool:
        return all(r is None for r in self.ranges)


def rect_to_4interval(r: Rect, cs: ChainSystem) -> FourInterval:
    """Index range of each chain inside ``r``, computed from the rectangle's reach.

    In quadrant q the rectangle holds exactly the chain points with
    |dx| <= reach_x and |dy| <= reach_y: a prefix (|dx| increasing) cut
    with a suffix (|dy| decreasing), hence one contiguous range.
    """
    o = cs.origin
    if not r.contains(o):
        raise InvalidParameters(f"origin not contained in rectangle {r}")
    right, left = r.x_hi - o.x, o.x - r.x_lo
    up, down = r.y_hi - o.y, o.y - r.y_lo
    reaches = ((right, up), (left, up), (left, down), (right, down))
    ranges = []
    for q, (rx, ry) in enumerate(reaches):
        hi = bisect.bisect_right(cs.abs_dx[q], rx) - 1
        lo = bisect.bisect_left([-v for v in cs.abs_dy[q]], -ry)
        ranges.append((lo, hi) if lo <= hi else None)
    return FourInterval(tuple(ranges))


def interval_family(rects: Sequence[Rect], cs: ChainSystem) -> tuple[list[FourInterval], DIntervalFamily]:
    fours = [rect_to_4interval(r, cs) for r in rects]
    for i, f in enumerate(fours):
        if f.empty:
            raise HypothesisViolation("rectangle contains no point of P", (i,))
    return fours, DIntervalFamily(4, cs.line_sizes, tuple(f.ranges for f in fours))


def check_faithfulness(rects: Sequence[Rect], cs: ChainSystem, fam: DIntervalFamily) -> Optional[tuple[int, int, int]]:
    """Exhaustive check that chain point (q, k) lies in the 4-interval of B iff it lies in B.

    Returns the first mismatch as (rect index, quadrant index, chain index).
    """
    for i, (r, member) in enumerate(zip(rects, fam.members)):
        for q in range(4):
            rng = member[q]
            for k, p in enumerate(cs.chain_points(q)):
                in_range = rng is not None and rng[0] <= k <= rng[1]
                if in_range != r.contains(p):
                    return (i, q, k)
    return None


@dataclass(frozen=True)
class PiercingResult:
    """Output of a piercing pipeline.

    ``point_indices`` index into the instance's P; ``bound`` is the size the
    pipeline guarantees. ``tau_reduced`` is the exact transversal number of
    the 4-interval family when the reduction ran.
    """

    points: tuple[Point, ...]
    point_indices: tuple[int, ...]
    bound: int
    stage: str
    guards: Optional[GuardSet] = None
    residual_indices: tuple[int, ...] = ()
    origin: Optional[Point] = None
    chains: Optional[ChainSystem] = None
    family: Optional[DIntervalFamily] = None
    tau_reduced: Optional[int] = None
    nu_reduced: Optional[int] = None
    nu_trace: Optional[int] = None
    faithful: Optional[bool] = None
    nodes: int = 0
    classes: tuple = ()
    geometric_tau: Optional[int] = None

    def __len__(self) -> int:
        return len(self.point_indices)


@dataclass(frozen=True)
class _Reduced:
    chains: ChainSystem
    family: DIntervalFamily
    lifted: tuple[int, ...]
    tau: int
    nu_reduced: Optional[int]
    nu_trace: Optional[int]
    faithful: Optional[bool]
    nodes: int


def _reduce_and_solve(inst: Instance, origin: Point, budget: Optional[int], check: bool) -> _Reduced:
    cs = build_chains(inst.points, origin)
    _, fam = interval_family(inst.rects, cs)
    faithful = nu_red = nu_tr = None
    nodes = 0
    if check:
        mismatch = check_faithfulness(inst.rects, cs, fam)
        faithful = mismatch is None
        if mismatch is not None:
            raise AssertionError(f"4-interval membership differs from rectangle membership at {mismatch}")
    res = dinterval_tau(fam, budget)
    nodes += res.nodes
    lifted = tuple(sorted({cs.p_index(*fam.locate(e)) for e in res.certificate}))
    if check:
        nr = dinterval_nu(fam, budget)
        nt = max_packing(trace(inst).set_system(), budget)
        nu_red, nu_tr = nr.value, nt.value
        nodes += nr.nodes + nt.nodes
        if nu_red > nu_tr:
            raise AssertionError(f"packing grew under reduction: {nu_red} > {nu_tr}")
    return _Reduced(cs, fam, lifted, res.value, nu_red, nu_tr, faithful, nodes)


def _verify_piercing(inst: Instance, indices: Sequence[int]) -> None:
    pts = [inst.points[i] for i in indices]
    for i, r in enumerate(inst.rects):
        if not any(r.contains(p) for p in pts):
            raise AssertionError(f"pipeline output misses rectangle {i}")


def _result(inst: Instance, indices, bound: int, stage: str, **kw) -> PiercingResult:
    indices = tuple(sorted(set(indices)))
    _verify_piercing(inst, indices)
    return PiercingResult(tuple(inst.points[i] for i in indices), indices, bound, stage, **kw)


def _require_pairwise_geometric(rects: Sequence[Rect]) -> None:
    for i, j in itertools.combinations(range(len(rects)), 2):
        if not rects_intersect(rects[i], rects[j]):
            raise HypothesisViolation("rectangles do not intersect", (i, j))


def _require_nonempty_traces(inst: Instance, tf) -> None:
    empties = tf.empty_members
    if empties:
        raise HypothesisViolation("rectangle contains no point of P", (empties[0],))


def _require_p2(tf, p: int) -> None:
    pq = has_pq_property(tf, p, 2)
    if not pq:
        raise HypothesisViolation(f"({p},2)-property fails on the trace", pq.witness)


def pierce_8(inst: Instance, budget: Optional[int] = None, dump_path=None, check: bool = True) -> PiercingResult:
    """Pierce a family whose pairwise intersections all contain points of P with at most 8 points of P.

    Steps: a point of P in the common intersection if there is one;
    otherwise the guard set S1, then an exact piercing of the remaining
    rectangles through the 4-interval reduction, which must need at most 4
    points.
    """
    if not inst.rects:
        return _result(inst, (), PIERCE_8_BOUND, "empty")
    tf = trace(inst)
    witness = pairwise_trace_witness(tf)
    if witness is not None:
        raise HypothesisViolation("rectangle pair shares no point of P", witness)
    core = common_intersection(inst.rects).rect
    inside = [j for j, p in enumerate(inst.points) if core.contains(p)]
    if inside:
        return _result(inst, inside[:1], PIERCE_8_BOUND, "common-point")

    guards = select_guards(inst)
    residual = residual_family(inst, guards)
    origin = Point(core.x_lo, core.y_lo)
    gpts = guards.points(inst)
    kept = tuple(i for i, r in enumerate(inst.rects) if not any(r.contains(g) for g in gpts))
    if not residual.rects:
        return _result(
            inst, guards.indices, PIERCE_8_BOUND, "guards", guards=guards, origin=origin, tau_reduced=0
        )
    claim = check_claim_quadrants(residual, origin)
    if not claim:
        raise TheoremViolation(
            f"residual rectangle {kept[claim.witness]} lacks opposite-quadrant points", inst, dump_path
        )
    red = _reduce_and_solve(residual, origin, budget, check)
    if red.tau > GUARD_FREE_BOUND:
        # more than 4 points needed must come with two disjoint members; either way this is a violation
        pair = find_disjoint_pair(red.family)
        raise TheoremViolation(
            f"residual 4-interval family needs {red.tau} > {GUARD_FREE_BOUND} points "
            f"(disjoint pair: {pair})", inst, dump_path
        )
    return _result(
        inst,
        list(guards.indices) + list(red.lifted),
        PIERCE_8_BOUND,
        "reduction",
        guards=guards,
        residual_indices=kept,
        origin=origin,
        chains=red.chains,
        family=red.family,
        tau_reduced=red.tau,
        nu_reduced=red.nu_reduced,
        nu_trace=red.nu_trace,
        faithful=red.faithful,
        nodes=red.nodes,
    )


def pierce_pairwise_p(
    inst: Instance,
    p: int,
    origin: Optional[Point] = None,
    budget: Optional[int] = None,
    dump_path=None,
    check: bool = True,
) -> PiercingResult:
    """Pierce a pairwise-intersecting family with the (p,2)-property using at most 12(p-1) points of P.

    No guards: the whole family goes through the 4-interval reduction with
    the origin at ``origin`` (default: lower-left corner of the common
    intersection), and the reduced family is pierced exactly.
    """
    if p < 2:
        raise InvalidParameters("p must be at least 2")
    bound = 12 * (p - 1)
    if not inst.rects:
        return _result(inst, (), bound, "empty")
    tf = trace(inst)
    _require_nonempty_traces(inst, tf)
    _require_pairwise_geometric(inst.rects)
    _require_p2(tf, p)
    core = common_intersection(inst.rects).rect
    if origin is None:
        origin = Point(core.x_lo, core.y_lo)
    elif not core.contains(origin):
        raise InvalidParameters(f"origin {origin} is not in the common intersection {core}")
    red = _reduce_and_solve(inst, origin, budget, check)
    if red.tau > bound:
        raise TheoremViolation(f"4-interval family needs {red.tau} > {bound} points", inst, dump_path)
    return _result(
        inst,
        red.lifted,
        bound,
        "reduction",
        residual_indices=tuple(range(len(inst.rects))),
        origin=origin,
        chains=red.chains,
        family=red.family,
        tau_reduced=red.tau,
        nu_reduced=red.nu_reduced,
        nu_trace=red.nu_trace,
        faithful=red.faithful,
        nodes=red.nodes,
    )


def pierce_quadrant_condition_p(
    inst: Instance,
    p: int,
    origin: Point,
    budget: Optional[int] = None,
    dump_path=None,
    check: bool = True,
) -> PiercingResult:
    """Pierce with at most 4(p-1) points when every rectangle has P points in opposite quadrants of ``origin``."""
    if p < 2:
        raise InvalidParameters("p must be at least 2")
    bound = 4 * (p - 1)
    if not inst.rects:
        return _result(inst, (), bound, "empty")
    tf = trace(inst)
    _require_pairwise_geometric(inst.rects)
    claim = check_claim_quadrants(inst, origin)
    if not claim:
        raise HypothesisViolation("rectangle lacks P points in opposite quadrants", (claim.witness,))
    _require_p2(tf, p)
    # opposite closed quadrants force the origin into every rectangle
    red = _reduce_and_solve(inst, origin, budget, check)
    if red.tau > bound:
        raise TheoremViolation(f"4-interval family needs {red.tau} > {bound} points", inst, dump_path)
    return _result(
        inst,
        red.lifted,
        bound,
        "reduction",
        residual_indices=tuple(range(len(inst.rects))),
        origin=origin,
        chains=red.chains,
        family=red.family,
        tau_reduced=red.tau,
        nu_reduced=red.nu_reduced,
        nu_trace=red.nu_trace,
        faithful=red.faithful,
        nodes=red.nodes,
    )


@dataclass(frozen=True)
class PiercedClass:
    anchor: Point
    rect_indices: tuple[int, ...]
    result: PiercingResult


def pierce_pq_composite(
    inst: Instance, p: int, budget: Optional[int] = None, dump_path=None, check: bool = True
) -> PiercingResult:
    """Pierce a family whose trace has the (p,2)-property.

    The rectangles are pierced geometrically (points anywhere in the plane);
    each rectangle joins the class of the first piercing point it contains,
    every class is pairwise intersecting and is handled by
    :func:`pierce_pairwise_p` around its anchor point.
    """
    if p < 2:
        raise InvalidParameters("p must be at least 2")
    per_class = 12 * (p - 1)
    if not inst.rects:
        return _result(inst, (), 0, "empty", geometric_tau=0)
    tf = trace(inst)
    _require_nonempty_traces(inst, tf)
    _require_p2(tf, p)
    geo, anchors = geometric_pierce(inst.rects, budget)
    members: list[list[int]] = [[] for _ in anchors]
    for i, r in enumerate(inst.rects):
        k = next(k for k, a in enumerate(anchors) if r.contains(a))
        members[k].append(i)
    classes = []
    chosen: set[int] = set()
    nodes = geo.nodes
    for anchor, idx in zip(anchors, members):
        if not idx:
            continue
        sub = inst.with_rects(idx)
        res = pierce_pairwise_p(sub, p, origin=anchor, budget=budget, dump_path=dump_path, check=check)
        classes.append(PiercedClass(anchor, tuple(idx), res))
        chosen.update(res.point_indices)
        nodes += res.nodes
    return _result(
        inst,
        chosen,
        geo.value * per_class,
        "composite",
        classes=tuple(classes),
        geometric_tau=geo.value,
        nodes=nodes,
    )
