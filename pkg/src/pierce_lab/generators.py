"""Seeded instance generators.

Every generator is a pure function of its arguments (all randomness comes
from ``random.Random(seed)``) and re-validates the hypotheses it advertises
before returning.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

from .dinterval import DIntervalFamily
from .errors import PierceLabError
from .geom import Point, Rect, closed_quadrants, common_intersection, rects_intersect
from .solver import SetSystem, max_packing, oracle_min_hitting_set
from .trace import Instance, has_pq_property, pairwise_trace_witness, trace


class GeneratorExhausted(PierceLabError):
    pass


def triangle_fixture() -> Instance:
    """Three pairwise trace-intersecting rectangles with no common point of P (tau = 2)."""
    points = [Point(0, -3), Point(-3, 0), Point(3, 0)]
    rects = [Rect(-4, 1, -4, 1), Rect(-1, 4, -4, 1), Rect(-4, 4, -1, 4)]
    return Instance.build(points, rects, {"generator": "triangle"})


def _rect_around(rng: random.Random, cx: int, cy: int, span: int, reach: Optional[int] = None) -> Rect:
    lim_l, lim_r = cx, span - cx
    lim_d, lim_u = cy, span - cy
    if reach is not None:
        lim_l, lim_r, lim_d, lim_u = (min(v, reach) for v in (lim_l, lim_r, lim_d, lim_u))
    shape = rng.random()
    thin_x = shape < 0.3
    thin_y = 0.3 <= shape < 0.6
    small = 0.6 <= shape < 0.8

    def ext(limit: int, thin: bool) -> int:
        limit = max(1, limit)
        if thin:
            return rng.randint(0, max(1, limit // 6))
        return rng.randint(1, max(1, limit // 3) if small else limit)

    return Rect(cx - ext(lim_l, thin_x), cx + ext(lim_r, thin_x), cy - ext(lim_d, thin_y), cy + ext(lim_u, thin_y))


def _random_point_in(rng: random.Random, region: Rect, avoid: Optional[Rect], tries: int = 24) -> Optional[Point]:
    for _ in range(tries):
        p = Point(rng.randint(region.x_lo, region.x_hi), rng.randint(region.y_lo, region.y_hi))
        if avoid is None or not avoid.contains(p):
            return p
    return None


def _off_cross_parts(region: Rect, core: Rect) -> list[Rect]:
    """Parts of ``region`` diagonal to ``core`` (outside both strips through it)."""
    xs = [(region.x_lo, min(region.x_hi, core.x_lo - 1)), (max(region.x_lo, core.x_hi + 1), region.x_hi)]
    ys = [(region.y_lo, min(region.y_hi, core.y_lo - 1)), (max(region.y_lo, core.y_hi + 1), region.y_hi)]
    return [Rect(x0, x1, y0, y1) for x0, x1 in xs for y0, y1 in ys if x0 <= x1 and y0 <= y1]


def _sample_point(rng: random.Random, region: Rect, avoid: Optional[Rect], diagonal: Optional[Rect]) -> Optional[Point]:
    # with ``diagonal`` set, prefer the parts of region off the strips around that core
    if diagonal is not None:
        parts = _off_cross_parts(region, diagonal)
        if parts:
            return _random_point_in(rng, rng.choice(parts), avoid)
    return _random_point_in(rng, region, avoid)


def _intersection(a: Rect, b: Rect) -> Rect:
    return Rect(max(a.x_lo, b.x_lo), min(a.x_hi, b.x_hi), max(a.y_lo, b.y_lo), min(a.y_hi, b.y_hi))


def _repair_pq(rng, points: list[Point], rects: list[Rect], p: int, n_points: int, avoid: Optional[Rect],
               diagonal: Optional[Rect] = None) -> bool:
    """Add points until every trace is nonempty and the packing number is at most p - 1."""
    while True:
        inst = Instance.build(points, rects)
        tf = trace(inst)
        empties = tf.empty_members
        if empties:
            target = rects[empties[0]]
        else:
            pack = max_packing(tf.set_system())
            if pack.value <= p - 1:
                return True
            cert = pack.certificate
            pair = next(
                ((i, j) for i, j in itertools.combinations(cert, 2) if rects_intersect(rects[i], rects[j])),
                None,
            )
            if pair is None:
                return False
            target = _intersection(rects[pair[0]], rects[pair[1]])
        if len(inst.points) >= n_points:
            return False
        q = _sample_point(rng, target, avoid, diagonal)
        if q is None or q in inst.points:
            return False
        points.append(q)


def _sample(make, seed: int, max_tries: int, name: str, params: dict) -> Instance:
    rng = random.Random(seed)
    for attempt in range(1, max_tries + 1):
        inst = make(rng)
        if inst is not None:
            md = {**inst.metadata, "generator": name, "seed": seed, **params, "attempts": attempt,
                  "rejection_rate": round((attempt - 1) / attempt, 6)}
            return Instance(inst.points, inst.rects, md)
    raise GeneratorExhausted(
        f"{name}: no valid instance in {max_tries} attempts (seed {seed}); "
        "try fewer rectangles, more points, or a larger span"
    )


def gen_random_pq(seed: int, n_rects: int, n_points: int, span: int, p: int,
                  avoid_core: bool = True, max_tries: int = 200) -> Instance:
    """Rectangles around a shared point whose trace has the (p,2)-property.

    Random points are thrown first; if some trace is empty or p pairwise
    trace-disjoint rectangles exist, points are added inside the offending
    intersections. Proposals that would exceed ``n_points`` are rejected.
    With ``avoid_core`` and at least three rectangles no point lies in the
    common intersection.
    """
    if n_rects < 1 or n_points < 1 or span < 2 or p < 2:
        raise ValueError("parameters must be positive (span >= 2, p >= 2)")

    def make(rng):
        cx, cy = rng.randint(span // 4, 3 * span // 4), rng.randint(span // 4, 3 * span // 4)
        rects = [_rect_around(rng, cx, cy, span) for _ in range(n_rects)]
        core = common_intersection(rects).rect
        # one or two rectangles need a point in their common intersection
        avoid = core if avoid_core and n_rects >= 3 else None
        points = []
        if rng.random() < 0.5:
            # sparse variant: only repair points, placed off the strips around the core when possible
            diagonal = core
        else:
            diagonal = None
            # leave room for at least one repair point per rectangle
            room = max(0, n_points - n_rects)
            for _ in range(rng.randint(min(room, max(1, n_points // 3)), room)):
                q = Point(rng.randint(0, span), rng.randint(0, span))
                if avoid is None or not avoid.contains(q):
                    points.append(q)
        if not _repair_pq(rng, points, rects, p, n_points, avoid, diagonal):
            return None
        inst = Instance.build(points, rects)
        tf = trace(inst)
        if tf.empty_members or not has_pq_property(tf, p, 2):
            return None
        return inst

    params = {"n_rects": n_rects, "n_points": n_points, "span": span, "p": p}
    return _sample(make, seed, max_tries, f"random-p{p}" if p > 2 else "random-pairwise", params)


def gen_random_pairwise(seed: int, n_rects: int, n_points: int, span: int, max_tries: int = 200) -> Instance:
    """Instance where every pairwise rectangle intersection contains a point of P."""
    inst = gen_random_pq(seed, n_rects, n_points, span, 2, max_tries=max_tries)
    assert pairwise_trace_witness(trace(inst)) is None
    return inst


def gen_quadrant(seed: int, n_rects: int, n_points: int, span: int, p: int, max_tries: int = 200) -> Instance:
    """Rectangles around a known origin, each holding P points in opposite closed quadrants.

    The origin is stored in ``metadata["origin"]``; the trace has the (p,2)-property.
    """

    def make(rng):
        o = Point(rng.randint(span // 4, 3 * span // 4), rng.randint(span // 4, 3 * span // 4))
        rects = [_rect_around(rng, o.x, o.y, span) for _ in range(n_rects)]
        points = [Point(rng.randint(0, span), rng.randint(0, span))
                  for _ in range(rng.randint(1, max(1, n_points // 3)))]
        for r in rects:
            have = set()
            for q in points:
                if r.contains(q):
                    have |= closed_quadrants(q, o)
            if {1, 3} <= have or {2, 4} <= have:
                continue
            if rng.random() < 0.5:
                parts = [Rect(o.x, r.x_hi, o.y, r.y_hi), Rect(r.x_lo, o.x, r.y_lo, o.y)]
            else:
                parts = [Rect(r.x_lo, o.x, o.y, r.y_hi), Rect(o.x, r.x_hi, r.y_lo, o.y)]
            for part in parts:
                points.append(_random_point_in(rng, part, None))
        points = list(dict.fromkeys(points))
        if len(points) > n_points:
            return None
        if not _repair_pq(rng, points, rects, p, n_points, None):
            return None
        inst = Instance.build(points, rects, {"origin": [o.x, o.y]})
        if not has_pq_property(trace(inst), p, 2):
            return None
        return inst

    params = {"n_rects": n_rects, "n_points": n_points, "span": span, "p": p}
    inst = _sample(make, seed, max_tries, "quadrant", params)
    return inst


def _origin_of(inst: Instance) -> Point:
    return Point(*inst.metadata["origin"])


def gen_clusters(seed: int, n_clusters: int, rects_per_cluster: int, n_points: int, span: int, p: int,
                 max_tries: int = 200) -> Instance:
    """Several groups of rectangles, each around its own center, with the (p,2)-property overall.

    At most p - 1 clusters get a free anchor anywhere in the square; later
    clusters pick one of those anchors and every rectangle of theirs is
    stretched to contain it, so clusters sharing an anchor overlap.
    """
    if n_clusters < 1 or rects_per_cluster < 1:
        raise ValueError("need at least one cluster with one rectangle")

    def make(rng):
        reach = max(2, span // (2 * n_clusters))
        anchors: list[Point] = []
        rects = []
        for c in range(n_clusters):
            cx, cy = rng.randint(0, span), rng.randint(0, span)
            if c < p - 1:
                anchors.append(Point(cx, cy))
                a = anchors[-1]
            else:
                a = rng.choice(anchors)
                cx = min(span, max(0, a.x + rng.randint(-reach, reach)))
                cy = min(span, max(0, a.y + rng.randint(-reach, reach)))
            for _ in range(rects_per_cluster):
                r = _rect_around(rng, cx, cy, span, reach)
                rects.append(Rect(min(r.x_lo, a.x), max(r.x_hi, a.x), min(r.y_lo, a.y), max(r.y_hi, a.y)))
        xs = [v for r in rects for v in (r.x_lo, r.x_hi)]
        ys = [v for r in rects for v in (r.y_lo, r.y_hi)]
        box = Rect(min(xs), max(xs), min(ys), max(ys))
        points = [_random_point_in(rng, box, None) for _ in range(rng.randint(1, max(1, n_points // 3)))]
        points = list(dict.fromkeys(points))
        if not _repair_pq(rng, points, rects, p, n_points, None):
            return None
        inst = Instance.build(points, rects)
        tf = trace(inst)
        if tf.empty_members or not has_pq_property(tf, p, 2):
            return None
        return inst

    params = {"n_clusters": n_clusters, "rects_per_cluster": rects_per_cluster,
              "n_points": n_points, "span": span, "p": p}
    return _sample(make, seed, max_tries, "clusters", params)


def gen_helly4(seed: int, n_rects: int, n_points: int, span: int, max_tries: int = 2000) -> Instance:
    """Instance whose every subfamily of at most 4 rectangles has a common point of P.

    Points are concentrated near a shared center so the filter accepts often.
    """
    from .verify import verify_halman

    def make(rng):
        cx, cy = rng.randint(span // 4, 3 * span // 4), rng.randint(span // 4, 3 * span // 4)
        rects = [_rect_around(rng, cx, cy, span) for _ in range(n_rects)]
        near = max(1, span // 10)
        points = []
        for _ in range(rng.randint(1, n_points)):
            if rng.random() < 0.6:
                points.append(Point(cx + rng.randint(-near, near), cy + rng.randint(-near, near)))
            else:
                points.append(Point(rng.randint(0, span), rng.randint(0, span)))
        inst = Instance.build(points, rects)
        if verify_halman(inst).verdict == "hypothesis-unmet":
            return None
        return inst

    params = {"n_rects": n_rects, "n_points": n_points, "span": span}
    return _sample(make, seed, max_tries, "helly4", params)


# lower-left staircase order per k, chosen by exhaustive search over permutations to
# maximize the number of rectangle pairs that meet in a point lying in no third rectangle
_LOWER_ORDER = {
    4: (1, 0, 3, 2),
    5: (1, 3, 0, 4, 2),
    6: (1, 3, 0, 5, 2, 4),
    7: (1, 3, 0, 5, 2, 6, 4),
    8: (1, 3, 0, 5, 2, 7, 4, 6),
}


def _lower_order(k: int) -> tuple[int, ...]:
    if k in _LOWER_ORDER:
        return _LOWER_ORDER[k]
    # beyond the table: interleave odd and even positions
    return tuple(sorted(range(k), key=lambda e: (e % 2 == 0, e)))


def gen_cycle(k: int) -> Instance:
    """k rectangles around the origin with one point of P per rectangle pair.

    The rectangles' upper-right corners form a staircase in the order
    1..k and their lower-left corners a staircase in a second fixed order;
    each pair of rectangles gets the outermost point of their intersection
    in the quadrant where it lies in the fewest rectangles (exactly the two
    whenever the two staircases allow it).
    k = 3 gives the triangle fixture. The exact transversal number is
    confirmed by the exhaustive oracle and stored in the metadata.
    """
    if k < 3:
        raise ValueError("gen_cycle needs k >= 3")
    if k == 3:
        inst = triangle_fixture()
        tau = oracle_min_hitting_set(trace(inst).set_system()).value
        return Instance(inst.points, inst.rects, {"generator": "cycle", "k": 3, "tau_exact": tau})
    order = _lower_order(k)
    pos = {i: order[i - 1] + 1 for i in range(1, k + 1)}
    right = {i: 2 * i + 1 for i in range(1, k + 1)}
    up = {i: 2 * (k + 1 - i) + 1 for i in range(1, k + 1)}
    left = {i: 2 * pos[i] + 1 for i in range(1, k + 1)}
    down = {i: 2 * (k + 1 - pos[i]) + 1 for i in range(1, k + 1)}
    rects = [Rect(-left[i], right[i], -down[i], up[i]) for i in range(1, k + 1)]
    points: list[Point] = []
    for i, j in itertools.combinations(range(1, k + 1), 2):
        options = [
            Point(min(right[i], right[j]), min(up[i], up[j])),
            Point(-min(left[i], left[j]), min(up[i], up[j])),
            Point(-min(left[i], left[j]), -min(down[i], down[j])),
            Point(min(right[i], right[j]), -min(down[i], down[j])),
        ]
        counts = [sum(r.contains(q) for r in rects) for q in options]
        best = min(range(4), key=lambda t: (counts[t], t))
        if counts[best] < k:
            points.append(options[best])
    inst = Instance.build(points, rects)
    tf = trace(inst)
    witness = pairwise_trace_witness(tf)
    if witness is not None:
        raise AssertionError(f"gen_cycle({k}) lost pair {witness}")
    tau = _oracle_tau(tf.set_system())
    return Instance(inst.points, inst.rects, {"generator": "cycle", "k": k, "tau_exact": tau})


def _oracle_tau(ss: SetSystem) -> int:
    """Exhaustive tau over the points whose rectangle sets are maximal.

    A point hitting a subset of another point's rectangles is never needed,
    so dropping it keeps tau and brings the universe within oracle range.
    """
    covers = {frozenset(i for i, s in enumerate(ss.sets) if e in s) for e in range(ss.universe_size)}
    keys = sorted((c for c in covers if c and not any(c < o for o in covers)), key=sorted)
    sets = tuple(frozenset(t for t, key in enumerate(keys) if i in key) for i in range(len(ss.sets)))
    return oracle_min_hitting_set(SetSystem(len(keys), sets)).value


def gen_dinterval(seed: int, d: int, n_members: int, max_line: int) -> DIntervalFamily:
    rng = random.Random(seed)
    sizes = tuple(rng.randint(1, max_line) for _ in range(d))
    members = []
    for _ in range(n_members):
        while True:
            comps = []
            for n in sizes:
                if rng.random() < 0.4:
                    comps.append(None)
                else:
                    lo = rng.randrange(n)
                    hi = min(n - 1, lo + rng.randint(0, max(0, n // 3)))
                    comps.append((lo, hi))
            if any(c is not None for c in comps):
                break
        members.append(tuple(comps))
    return DIntervalFamily(d, sizes, tuple(members))


def gen_set_system(seed: int, universe_size: int, n_sets: int) -> SetSystem:
    rng = random.Random(seed)
    density = rng.uniform(0.08, 0.5)
    sets = []
    for _ in range(n_sets):
        s = {e for e in range(universe_size) if rng.random() < density}
        if not s:
            s = {rng.randrange(universe_size)}
        sets.append(frozenset(s))
    return SetSystem(universe_size, tuple(sets))
