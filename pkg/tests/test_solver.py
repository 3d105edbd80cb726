import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pierce_lab.errors import InvalidParameters, SolverBudgetExhausted, UnpierceableMember
from pierce_lab.generators import gen_set_system, triangle_fixture
from pierce_lab.geom import Point, Rect
from pierce_lab.solver import (
    BUDGET_ENV,
    SetSystem,
    default_budget,
    geometric_pierce,
    max_packing,
    min_hitting_set,
    oracle_max_packing,
    oracle_min_hitting_set,
)
from pierce_lab.trace import trace


def ss(n, *sets):
    return SetSystem(n, tuple(frozenset(s) for s in sets))


def test_common_element_gives_tau_one():
    res = min_hitting_set(ss(3, {0, 1}, {1, 2}))
    assert res.value == 1 and res.certificate == (1,)


def test_triangle_sets_need_two():
    system = ss(3, {0, 1}, {0, 2}, {1, 2})
    # no single element lies in all three sets; any two elements hit everything
    assert not any(all(e in s for s in system.sets) for e in range(3))
    assert min_hitting_set(system).value == 2


def test_empty_family():
    assert min_hitting_set(ss(4)).value == 0
    assert min_hitting_set(ss(4)).certificate == ()
    assert max_packing(ss(4)).value == 0


def test_packing_small_cases():
    assert max_packing(ss(3, {0}, {1}, {2})).value == 3
    assert max_packing(ss(3, {0, 1}, {0, 2}, {1, 2})).value == 1


def test_empty_member_is_unpierceable():
    with pytest.raises(UnpierceableMember) as exc:
        min_hitting_set(ss(2, {0}, set()))
    assert exc.value.set_index == 1


def test_empty_members_count_in_packing():
    # an empty set is disjoint from everything
    assert max_packing(ss(2, {0, 1}, set(), set())).value == 3


def test_oracle_small_cases():
    assert oracle_min_hitting_set(ss(3, {0, 1}, {1, 2})).value == 1
    assert oracle_min_hitting_set(ss(1, {0})).value == 1
    assert oracle_min_hitting_set(trace(triangle_fixture()).set_system()).value == 2


def test_oracle_size_limits():
    with pytest.raises(InvalidParameters):
        oracle_min_hitting_set(ss(25, {0}))
    with pytest.raises(InvalidParameters):
        oracle_max_packing(SetSystem(1, tuple(frozenset({0}) for _ in range(21))))


def test_budget_exhaustion_reports_bounds():
    system = gen_set_system(3, 40, 30)
    with pytest.raises(SolverBudgetExhausted) as exc:
        min_hitting_set(system, budget=1)
    assert exc.value.lower <= exc.value.upper


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "1234")
    assert default_budget() == 1234


def test_set_system_rejects_out_of_universe():
    with pytest.raises(InvalidParameters):
        ss(2, {0, 2})


@pytest.mark.parametrize("seed", range(150))
def test_solvers_match_oracles(seed):
    rng = random.Random(seed)
    system = gen_set_system(seed, rng.randint(1, 20), rng.randint(0, 12))
    tau = min_hitting_set(system)
    nu = max_packing(system)
    assert tau.value == oracle_min_hitting_set(system).value
    assert nu.value == oracle_max_packing(system).value
    assert system.hits_all(tau.certificate) and len(tau.certificate) == tau.value
    assert system.pairwise_disjoint(nu.certificate) and len(nu.certificate) == nu.value
    # weak duality
    assert nu.value <= tau.value


def _brute_packing(system):
    # independent check: largest pairwise-disjoint subfamily by subset enumeration
    best = 0
    for mask in range(1 << len(system.sets)):
        idx = [i for i in range(len(system.sets)) if mask >> i & 1]
        if all(not (system.sets[i] & system.sets[j]) for i, j in itertools.combinations(idx, 2)):
            best = max(best, len(idx))
    return best


@pytest.mark.parametrize("seed", range(20))
def test_packing_oracle_agrees_with_subset_enumeration(seed):
    system = gen_set_system(1000 + seed, 10, 10)
    assert oracle_max_packing(system).value == _brute_packing(system)


rects_st = st.lists(
    st.tuples(st.integers(-6, 6), st.integers(0, 5), st.integers(-6, 6), st.integers(0, 5)).map(
        lambda t: Rect(t[0], t[0] + t[1], t[2], t[2] + t[3])
    ),
    min_size=1,
    max_size=6,
)


@settings(max_examples=60, deadline=None)
@given(rects_st)
def test_geometric_pierce_matches_dense_grid(rects):
    res, pts = geometric_pierce(rects)
    assert all(any(r.contains(p) for p in pts) for r in rects)
    # exhaustive minimum over every integer point of the bounding box
    grid = [Point(x, y) for x in range(-6, 12) for y in range(-6, 12)]
    hits = [frozenset(i for i, r in enumerate(rects) if r.contains(p)) for p in grid]
    hits = sorted({h for h in hits if h})
    for k in range(1, len(rects) + 1):
        if any(len(frozenset().union(*c)) == len(rects) for c in itertools.combinations(hits, k)):
            assert res.value == k
            break


def test_geometric_pierce_examples():
    res, pts = geometric_pierce([Rect(0, 2, 0, 3)])
    assert res.value == 1 and pts[0] in Rect(0, 2, 0, 3).corners()
    assert geometric_pierce([Rect(0, 1, 0, 1), Rect(5, 6, 5, 6)])[0].value == 2
    assert geometric_pierce(triangle_fixture().rects)[0].value == 1
