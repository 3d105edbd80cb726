"""Exact minimum hitting set and maximum packing over finite set systems.

Sets are stored as Python integer bitmasks over ``range(universe_size)``.
Both solvers are deterministic branch-and-bound searches with a node budget;
``oracle_min_hitting_set`` and ``oracle_max_packing`` are slow exhaustive
enumerations kept deliberately independent of the fast paths.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameters, SolverBudgetExhausted, UnpierceableMember
from .geom import Point, Rect

DEFAULT_BUDGET = 10_000_000
BUDGET_ENV = "PIERCE_LAB_BUDGET"
ORACLE_MAX_UNIVERSE = 24
ORACLE_MAX_SETS = 20

_popcount = int.bit_count


def default_budget() -> int:
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


@dataclass(frozen=True)
class SetSystem:
    universe_size: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        sets = tuple(frozenset(int(e) for e in s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        for i, s in enumerate(sets):
            for e in s:
                if not 0 <= e < self.universe_size:
                    raise InvalidParameters(
                        f"set {i} has element {e} outside universe of size {self.universe_size}"
                    )

    @classmethod
    def from_masks(cls, universe_size: int, masks: Sequence[int]) -> "SetSystem":
        return cls(universe_size, tuple(frozenset(bits(m)) for m in masks))

    @property
    def masks(self) -> list[int]:
        return [to_mask(s) for s in self.sets]

    @property
    def empty_sets(self) -> list[int]:
        return [i for i, s in enumerate(self.sets) if not s]

    def hits_all(self, elements: Iterable[int]) -> bool:
        chosen = set(elements)
        return all(s & chosen for s in self.sets)

    def pairwise_disjoint(self, indices: Sequence[int]) -> bool:
        seen: set[int] = set()
        for i in indices:
            s = self.sets[i]
            if seen & s:
                return False
            seen |= s
        return len(set(indices)) == len(indices)


@dataclass(frozen=True)
class SolveResult:
    """Exact optimum with a certificate.

    ``certificate`` holds element indices for hitting sets and set indices
    for packings.
    """

    value: int
    certificate: tuple[int, ...]
    nodes: int = 0
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = default_budget() if limit is None else limit
        self.nodes = 0

    def tick(self, lower: int, upper: int | None):
        self.nodes += 1
        if self.nodes > self.limit:
            raise SolverBudgetExhausted(self.nodes, lower, upper)


def _reduce_sets(masks: list[int]) -> list[int]:
    """Drop duplicate sets and sets that contain another set."""
    uniq = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in uniq:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def _reduce_elements(masks: list[int], universe_size: int) -> int:
    """Mask of elements worth branching on.

    An element whose covered sets are a subset of another element's covered
    sets is never needed; among equal elements the lowest index is kept.
    """
    cover = [0] * universe_size
    for i, m in enumerate(masks):
        for e in bits(m):
            cover[e] |= 1 << i
    live = [e for e in range(universe_size) if cover[e]]
    keep = 0
    for e in live:
        ce = cover[e]
        dominated = False
        for f in live:
            if f == e:
                continue
            cf = cover[f]
            if ce & cf == ce and (ce != cf or f < e):
                dominated = True
                break
        if not dominated:
            keep |= 1 << e
    return keep


def _greedy_packing_size(masks: Sequence[int]) -> int:
    used = 0
    count = 0
    for m in sorted(masks, key=lambda m: (_popcount(m), m)):
        if not m & used:
            used |= m
            count += 1
    return count


def _greedy_hitting(masks: list[int]) -> list[int]:
    remaining = list(masks)
    chosen = []
    while remaining:
        freq: dict[int, int] = {}
        for m in remaining:
            for e in bits(m):
                freq[e] = freq.get(e, 0) + 1
        e = min(freq, key=lambda k: (-freq[k], k))
        chosen.append(e)
        remaining = [m for m in remaining if not (m >> e) & 1]
    return chosen


def min_hitting_set(ss: SetSystem, budget: int | None = None) -> SolveResult:
    """Exact minimum hitting set (transversal number) of ``ss``.

    Branches on the elements of a smallest uncovered set, most frequent
    element first; in the i-th branch the earlier candidates are forbidden.
    Lower bound: greedy disjoint subfamily of the uncovered sets.
    """
    t0 = time.perf_counter()
    empties = ss.empty_sets
    if empties:
        raise UnpierceableMember(empties[0])
    if not ss.sets:
        return SolveResult(0, (), 0, time.perf_counter() - t0)

    masks = _reduce_sets(ss.masks)
    useful = _reduce_elements(masks, ss.universe_size)
    masks = [m & useful for m in masks]
    root_lower = _greedy_packing_size(masks)
    best = _greedy_hitting(masks)
    budget_state = _Budget(budget)

    def search(sets: list[int], chosen: list[int]):
        nonlocal best
        budget_state.tick(root_lower, len(best))
        if not sets:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + _greedy_packing_size(sets) >= len(best):
            return
        pivot = min(sets, key=lambda m: (_popcount(m), m))
        freq = {e: sum((m >> e) & 1 for m in sets) for e in bits(pivot)}
        order = sorted(freq, key=lambda e: (-freq[e], e))
        forbidden = 0
        for e in order:
            nxt = []
            dead = False
            for m in sets:
                if (m >> e) & 1:
                    continue
                m &= ~forbidden
                if not m:
                    dead = True
                    break
                nxt.append(m)
            if not dead:
                chosen.append(e)
                search(nxt, chosen)
                chosen.pop()
            forbidden |= 1 << e

    search(masks, [])
    cert = tuple(sorted(best))
    if not ss.hits_all(cert):
        raise AssertionError("hitting-set certificate failed validation")
    if root_lower > len(cert):
        raise AssertionError("weak duality violated: packing bound exceeds hitting set")
    return SolveResult(len(cert), cert, budget_state.nodes, time.perf_counter() - t0)


def max_packing(ss: SetSystem, budget: int | None = None) -> SolveResult:
    """Exact maximum number of pairwise disjoint sets in ``ss``.

    Empty sets are disjoint from everything (including each other) and are
    always part of the packing.
    """
    t0 = time.perf_counter()
    masks = ss.masks
    free = [i for i, m in enumerate(masks) if m == 0]
    live = [i for i, m in enumerate(masks) if m != 0]
    n = len(live)
    adj = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if masks[live[a]] & masks[live[b]]:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    budget_state = _Budget(budget)
    best: list[int] = []

    def clique_cover_bound(cand: int) -> int:
        # greedy partition of cand into cliques of the conflict graph; each clique adds at most one
        cliques: list[int] = []
        for v in bits(cand):
            for k, c in enumerate(cliques):
                if c & adj[v] == c:
                    cliques[k] = c | (1 << v)
                    break
            else:
                cliques.append(1 << v)
        return len(cliques)

    def search(cand: int, chosen: list[int]):
        nonlocal best
        budget_state.tick(len(best), None)
        if not cand:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + _popcount(cand) <= len(best):
            return
        if len(chosen) + clique_cover_bound(cand) <= len(best):
            return
        degs = [(_popcount(adj[v] & cand), v) for v in bits(cand)]
        dmin, vmin = min(degs)
        if dmin <= 1:
            # some maximum packing contains a vertex of degree <= 1
            chosen.append(vmin)
            search(cand & ~adj[vmin] & ~(1 << vmin), chosen)
            chosen.pop()
            return
        _, v = max(degs, key=lambda t: (t[0], -t[1]))
        chosen.append(v)
        search(cand & ~adj[v] & ~(1 << v), chosen)
        chosen.pop()
        search(cand & ~(1 << v), chosen)

    search((1 << n) - 1, [])
    cert = tuple(sorted(free + [live[v] for v in best]))
    if not ss.pairwise_disjoint(cert):
        raise AssertionError("packing certificate failed validation")
    return SolveResult(len(cert), cert, budget_state.nodes, time.perf_counter() - t0)


def oracle_min_hitting_set(ss: SetSystem) -> SolveResult:
    """Exhaustive hitting set by increasing subset size (small universes only)."""
    if ss.universe_size > ORACLE_MAX_UNIVERSE:
        raise InvalidParameters(
            f"oracle universe limited to {ORACLE_MAX_UNIVERSE} elements, got {ss.universe_size}"
        )
    t0 = time.perf_counter()
    empties = ss.empty_sets
    if empties:
        raise UnpierceableMember(empties[0])
    masks = ss.masks
    tried = 0
    for size in range(ss.universe_size + 1):
        for combo in itertools.combinations(range(ss.universe_size), size):
            tried += 1
            chosen = to_mask(combo)
            if all(m & chosen for m in masks):
                return SolveResult(size, combo, tried, time.perf_counter() - t0)
    raise AssertionError("unreachable: full universe hits every nonempty set")


def oracle_max_packing(ss: SetSystem) -> SolveResult:
    """Exhaustive packing by decreasing subfamily size (few sets only)."""
    m = len(ss.sets)
    if m > ORACLE_MAX_SETS:
        raise InvalidParameters(f"oracle packing limited to {ORACLE_MAX_SETS} sets, got {m}")
    t0 = time.perf_counter()
    masks = ss.masks
    tried = 0
    for size in range(m, 0, -1):
        for combo in itertools.combinations(range(m), size):
            tried += 1
            used = 0
            ok = True
            for i in combo:
                if masks[i] & used:
                    ok = False
                    break
                used |= masks[i]
            if ok:
                return SolveResult(size, combo, tried, time.perf_counter() - t0)
    return SolveResult(0, (), tried, time.perf_counter() - t0)


def _grid_hits(rects: Sequence[Rect], xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Boolean array [len(xs), len(ys), len(rects)]: grid point (x, y) lies in rect."""
    x_lo = np.array([r.x_lo for r in rects], dtype=object)
    x_hi = np.array([r.x_hi for r in rects], dtype=object)
    y_lo = np.array([r.y_lo for r in rects], dtype=object)
    y_hi = np.array([r.y_hi for r in rects], dtype=object)
    in_x = (xs[:, None] >= x_lo[None, :]) & (xs[:, None] <= x_hi[None, :])
    in_y = (ys[:, None] >= y_lo[None, :]) & (ys[:, None] <= y_hi[None, :])
    return in_x[:, None, :] & in_y[None, :, :]


def geometric_pierce(rects: Sequence[Rect], budget: int | None = None) -> tuple[SolveResult, list[Point]]:
    """Minimum number of points (anywhere in the plane) piercing ``rects``.

    Candidates are the grid of all x-endpoints by all y-endpoints; any
    piercing point can be moved to such a grid point without losing a
    rectangle. Candidates hitting the same or a smaller subfamily than
    another candidate are pruned before solving.
    """
    if not rects:
        raise InvalidParameters("geometric_pierce needs at least one rectangle")
    xs = np.array(sorted({v for r in rects for v in (r.x_lo, r.x_hi)}), dtype=object)
    ys = np.array(sorted({v for r in rects for v in (r.y_lo, r.y_hi)}), dtype=object)
    hits = _grid_hits(rects, xs, ys)
    by_mask: dict[int, tuple[int, int]] = {}
    for i in range(len(xs)):
        for j in range(len(ys)):
            row = hits[i, j]
            if not row.any():
                continue
            m = to_mask(np.flatnonzero(row).tolist())
            by_mask.setdefault(m, (i, j))
    masks = sorted(by_mask, key=lambda m: (-_popcount(m), by_mask[m]))
    maximal: list[int] = []
    for m in masks:
        if not any(k & m == m for k in maximal):
            maximal.append(m)
    candidates = [Point(int(xs[by_mask[m][0]]), int(ys[by_mask[m][1]])) for m in maximal]
    sets = [frozenset(c for c, m in enumerate(maximal) if (m >> r) & 1) for r in range(len(rects))]
    res = min_hitting_set(SetSystem(len(candidates), tuple(sets)), budget=budget)
    points = [candidates[c] for c in res.certificate]
    for r in rects:
        if not any(r.contains(p) for p in points):
            raise AssertionError("geometric piercing certificate failed validation")
    return res, points
