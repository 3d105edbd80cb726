import importlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pierce_lab.errors import HypothesisViolation, InvalidParameters, TheoremViolation
from pierce_lab.generators import gen_clusters, gen_quadrant, gen_random_pairwise, triangle_fixture
from pierce_lab.geom import Point, Rect, classify_quadrant
from pierce_lab.reduction import (
    GuardSet,
    build_chains,
    check_claim_quadrants,
    check_faithfulness,
    interval_family,
    pierce_8,
    pierce_pairwise_p,
    pierce_pq_composite,
    pierce_quadrant_condition_p,
    rect_to_4interval,
    residual_family,
    select_guards,
)
from pierce_lab.serialize import load_instance
from pierce_lab.solver import min_hitting_set, oracle_min_hitting_set
from pierce_lab.trace import Instance, trace
from pierce_lab.verify import find_disjoint_pair

reduction_module = importlib.import_module("pierce_lab.reduction")


@pytest.fixture
def tri():
    return triangle_fixture()


def idx(inst, *pts):
    return [inst.points.index(Point(*p)) for p in pts]


# guards and residual family

def test_guards_on_triangle(tri):
    g = select_guards(tri)
    s1, s2, s3 = idx(tri, (-3, 0), (3, 0), (0, -3))
    assert (g.s1, g.s2, g.s3, g.s4) == (s1, s2, s3, None)


def test_guards_only_left_strip():
    inst = Instance.build([(-5, 0), (-3, 1), (-9, -1)], [Rect(-10, 2, -1, 1), Rect(-2, 10, -1, 1)])
    g = select_guards(inst)
    assert g.indices == [1] and g.s1 == 1


def test_guard_tie_keeps_lowest_index():
    inst = Instance.build([(-7, 0), (-3, 1), (-3, -1)], [Rect(-10, 2, -1, 1), Rect(-2, 10, -1, 1)])
    assert select_guards(inst).s1 == 1


def test_residual_examples(tri):
    assert residual_family(tri, select_guards(tri)).rects == ()
    assert residual_family(tri, GuardSet()).rects == tri.rects
    # the last rectangle sits in the upper right and misses the guard at (-3, 0)
    inst = Instance.build([(-3, 0)], [Rect(-4, 0, -1, 1), Rect(-1, 5, -1, 5)])
    res = residual_family(inst, select_guards(inst))
    assert res.rects == (Rect(-1, 5, -1, 5),) and res.metadata["source_rect_indices"] == [1]


def test_claim_quadrants():
    o = Point(0, 0)
    good = Instance.build([(1, 1), (-1, -1)], [Rect(-2, 2, -2, 2)])
    assert check_claim_quadrants(good, o)
    bad = Instance.build([(1, 1), (-1, 1)], [Rect(-2, 2, -2, 2)])
    res = check_claim_quadrants(bad, o)
    assert not res and res.witness == 0
    assert check_claim_quadrants(Instance.build([(1, 1)], []), o)


# chains

def test_chain_example():
    pts = [Point(1, 3), Point(2, 2), Point(3, 1), Point(2, 3)]
    cs = build_chains(pts, Point(0, 0))
    assert cs.chain_points(0) == [Point(1, 3), Point(2, 2), Point(3, 1)]
    assert cs.chains[1:] == ((), (), ())


def test_chains_singletons_and_empty():
    pts = [Point(1, 1), Point(-1, 1), Point(-1, -1), Point(1, -1)]
    cs = build_chains(pts, Point(0, 0))
    assert cs.chains == ((0,), (1,), (2,), (3,))
    assert build_chains([], Point(0, 0)).chains == ((), (), (), ())


points_st = st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)), max_size=25, unique=True).map(
    lambda ps: [Point(*p) for p in ps]
)


@settings(max_examples=150, deadline=None)
@given(points_st, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_chains_are_exactly_the_pareto_minimal_points(points, o):
    origin = Point(*o)
    cs = build_chains(points, origin)
    for q in range(4):
        members = [j for j, p in enumerate(points) if classify_quadrant(p, origin) == q + 1]
        off = {j: (abs(points[j].x - origin.x), abs(points[j].y - origin.y)) for j in members}
        # j is dominated if another point of its quadrant is no farther on both axes and differs
        minimal = {j for j in members if not any(off[k][0] <= off[j][0] and off[k][1] <= off[j][1]
                                                 and off[k] != off[j] for k in members)}
        assert set(cs.chains[q]) == minimal
        dx, dy = cs.abs_dx[q], cs.abs_dy[q]
        assert all(a < b for a, b in zip(dx, dx[1:])) and all(a > b for a, b in zip(dy, dy[1:]))


# 4-intervals

def test_four_interval_examples():
    pts = [Point(1, 3), Point(2, 2), Point(3, 1), Point(-2, 1), Point(-1, -4), Point(4, -4)]
    cs = build_chains(pts, Point(0, 0))
    full = rect_to_4interval(Rect(-5, 5, -5, 5), cs)
    assert full.ranges == tuple((0, n - 1) for n in cs.line_sizes)
    # only (1,3), the Q1 point with smallest |x|, fits
    only = rect_to_4interval(Rect(-1, 1, -1, 3), cs)
    assert only.ranges[0] == (0, 0)
    assert [r is None for r in only.ranges[1:]] == [True, True, True]
    assert rect_to_4interval(Rect(0, 0, 0, 0), cs).empty
    with pytest.raises(InvalidParameters):
        rect_to_4interval(Rect(1, 2, 1, 2), cs)


rect_around_origin = st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(0, 9), st.integers(0, 9)).map(
    lambda t: Rect(-t[0], t[1], -t[2], t[3])
)


@settings(max_examples=150, deadline=None)
@given(points_st, st.lists(rect_around_origin, min_size=1, max_size=8))
def test_four_interval_membership_is_faithful(points, rects):
    cs = build_chains(points, Point(0, 0))
    fours = [rect_to_4interval(r, cs) for r in rects]
    for r, f in zip(rects, fours):
        for q in range(4):
            for k, p in enumerate(cs.chain_points(q)):
                rng = f.ranges[q]
                assert (rng is not None and rng[0] <= k <= rng[1]) == r.contains(p)


def test_interval_family_rejects_empty_member():
    cs = build_chains([Point(5, 5)], Point(0, 0))
    with pytest.raises(HypothesisViolation):
        interval_family([Rect(-1, 1, -1, 1)], cs)


# pierce_8

def test_pierce8_triangle(tri):
    res = pierce_8(tri)
    assert set(res.points) == {Point(-3, 0), Point(3, 0), Point(0, -3)}
    assert res.stage == "guards" and len(res) == 3 <= res.bound == 8
    assert oracle_min_hitting_set(trace(tri).set_system()).value == 2


def test_pierce8_common_point_and_empty():
    inst = Instance.build([(5, 5), (0, 0)], [Rect(-1, 1, -1, 1), Rect(0, 3, 0, 3)])
    res = pierce_8(inst)
    assert res.points == (Point(0, 0),) and res.stage == "common-point"
    assert len(pierce_8(Instance.build([(0, 0)], []))) == 0


def test_pierce8_rejects_trace_disjoint_pair():
    inst = Instance.build([(0, 0), (5, 5)], [Rect(-1, 1, -1, 1), Rect(4, 6, 4, 6)])
    with pytest.raises(HypothesisViolation) as exc:
        pierce_8(inst)
    assert exc.value.witness == (0, 1)


def _reduction_instances(n):
    found = []
    seed = 0
    while len(found) < n:
        inst = gen_random_pairwise(seed, 10, 30, 100)
        if pierce_8(inst).stage == "reduction":
            found.append(inst)
        seed += 1
    return found


def test_pierce8_reduction_stage_certificates():
    for inst in _reduction_instances(5):
        res = pierce_8(inst)
        assert res.faithful and res.tau_reduced <= 4
        assert res.nu_reduced <= res.nu_trace
        assert find_disjoint_pair(res.family) is None
        residual = [inst.rects[i] for i in res.residual_indices]
        assert check_faithfulness(residual, res.chains, res.family) is None


def test_pierce8_violation_writes_counterexample(tmp_path, monkeypatch):
    inst = _reduction_instances(1)[0]
    monkeypatch.setattr(reduction_module, "GUARD_FREE_BOUND", 0)
    dump = tmp_path / "cex.json"
    with pytest.raises(TheoremViolation) as exc:
        pierce_8(inst, dump_path=dump)
    assert exc.value.dump_path == dump
    assert load_instance(dump).rects == inst.rects


# pairwise (p,2) and quadrant pipelines

def test_pairwise_p_triangle(tri):
    res = pierce_pairwise_p(tri, 2)
    assert len(res) == 2 <= res.bound == 12


def test_pairwise_p_common_point():
    inst = Instance.build([(0, 0), (3, 3)], [Rect(-1, 1, -1, 1), Rect(-2, 4, -2, 4)])
    assert pierce_pairwise_p(inst, 2).points == (Point(0, 0),)


def test_pairwise_p_two_trace_disjoint_groups():
    rects = [Rect(-5, 5, -1, 5), Rect(-4, 4, -1, 6), Rect(-5, 5, -5, 1), Rect(-4, 4, -6, 1)]
    inst = Instance.build([(0, 4), (0, -4)], rects)
    res = pierce_pairwise_p(inst, 3)
    assert len(res) <= 24
    assert len(res) == oracle_min_hitting_set(trace(inst).set_system()).value == 2
    with pytest.raises(HypothesisViolation):
        pierce_pairwise_p(inst, 2)


def test_pairwise_p_origin_must_be_in_core(tri):
    with pytest.raises(InvalidParameters):
        pierce_pairwise_p(tri, 2, origin=Point(3, 3))


@pytest.mark.parametrize("seed", range(10))
def test_quadrant_condition_fixtures(seed):
    inst = gen_quadrant(seed, 8, 30, 80, 2)
    res = pierce_quadrant_condition_p(inst, 2, Point(*inst.metadata["origin"]))
    assert len(res) <= 4 and res.tau_reduced <= 4
    assert res.tau_reduced >= min_hitting_set(trace(inst).set_system()).value


def test_quadrant_common_point_and_violation():
    inst = Instance.build([(0, 0), (2, 2)], [Rect(-1, 1, -1, 1), Rect(-2, 3, -2, 3)])
    assert pierce_quadrant_condition_p(inst, 2, Point(0, 0)).points == (Point(0, 0),)
    bad = Instance.build([(1, 1), (-1, 1)], [Rect(-2, 2, -2, 2)])
    with pytest.raises(HypothesisViolation) as exc:
        pierce_quadrant_condition_p(bad, 2, Point(0, 0))
    assert exc.value.witness == (0,)


# composite

def test_composite_single_class(tri):
    res = pierce_pq_composite(tri, 2)
    assert res.geometric_tau == 1 and len(res.classes) == 1
    assert len(res) == len(pierce_pairwise_p(tri, 2, origin=res.classes[0].anchor))


def test_composite_far_clusters_p3():
    left = [Rect(0, 4, 0, 4), Rect(1, 5, -1, 3)]
    right = [Rect(100, 104, 0, 4), Rect(99, 103, 1, 5)]
    inst = Instance.build([(2, 2), (101, 2)], left + right)
    res = pierce_pq_composite(inst, 3)
    assert res.geometric_tau == 2 and len(res.classes) == 2
    assert len(res) == 2 <= res.bound == 48
    with pytest.raises(HypothesisViolation) as exc:
        pierce_pq_composite(inst, 2)
    assert len(exc.value.witness) == 2


@pytest.mark.parametrize("seed", range(10))
def test_composite_generated(seed):
    inst = gen_clusters(seed, 3, 3, 30, 100, 3)
    res = pierce_pq_composite(inst, 3)
    assert len(res) <= res.geometric_tau * 24
    assert sum(len(c.rect_indices) for c in res.classes) == len(inst.rects)
