"""Instances (P, B), traces B|_P, and (p, q)-property checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidParameters
from .geom import Point, Rect
from .solver import SetSystem, bits, max_packing, to_mask

# above this many p-subsets, (p, 2) is decided through the packing number instead
PQ_ENUMERATION_LIMIT = 200_000


@dataclass(frozen=True)
class Instance:
    """A finite point set P and a finite rectangle family B.

    Points must be pairwise distinct; use :meth:`build` to deduplicate.
    Rectangles may repeat. Certificates everywhere refer to list indices.
    """

    points: tuple[Point, ...]
    rects: tuple[Rect, ...]
    metadata: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "rects", tuple(self.rects))
        if len(set(self.points)) != len(self.points):
            raise ValueError("instance points must be pairwise distinct")

    @classmethod
    def build(cls, points: Iterable, rects: Iterable, metadata: dict | None = None) -> "Instance":
        seen: dict[Point, None] = {}
        for p in points:
            p = p if isinstance(p, Point) else Point(*p)
            seen.setdefault(p, None)
        rs = [r if isinstance(r, Rect) else Rect(*r) for r in rects]
        return cls(tuple(seen), tuple(rs), dict(metadata or {}))

    def with_rects(self, indices: Sequence[int], **meta) -> "Instance":
        """Sub-instance on the same P keeping only ``indices``; original indices go to metadata."""
        src = self.metadata.get("source_rect_indices")
        mapped = [src[i] for i in indices] if src is not None else list(indices)
        md = dict(self.metadata)
        md.update(meta)
        md["source_rect_indices"] = mapped
        return Instance(self.points, tuple(self.rects[i] for i in indices), md)


@dataclass(frozen=True)
class TraceFamily:
    n_points: int
    member_sets: tuple[tuple[int, ...], ...]

    @property
    def masks(self) -> list[int]:
        return [to_mask(s) for s in self.member_sets]

    @property
    def empty_members(self) -> list[int]:
        return [i for i, s in enumerate(self.member_sets) if not s]

    def set_system(self) -> SetSystem:
        return SetSystem(self.n_points, tuple(frozenset(s) for s in self.member_sets))


def containment_matrix(points: Sequence[Point], rects: Sequence[Rect]) -> np.ndarray:
    """Boolean array [len(rects), len(points)] of closed containment."""
    if not points or not rects:
        return np.zeros((len(rects), len(points)), dtype=bool)
    # object dtype keeps full 64-bit exactness for extreme coordinates
    xs = np.array([p.x for p in points], dtype=object)
    ys = np.array([p.y for p in points], dtype=object)
    box = np.array([(r.x_lo, r.x_hi, r.y_lo, r.y_hi) for r in rects], dtype=object)
    inside = (
        (xs[None, :] >= box[:, 0:1])
        & (xs[None, :] <= box[:, 1:2])
        & (ys[None, :] >= box[:, 2:3])
        & (ys[None, :] <= box[:, 3:4])
    )
    return inside.astype(bool)


def trace(inst: Instance) -> TraceFamily:
    inside = containment_matrix(inst.points, inst.rects)
    members = tuple(tuple(np.flatnonzero(row).tolist()) for row in inside)
    return TraceFamily(len(inst.points), members)


def _check_indices(tf: TraceFamily, indices: Iterable[int]) -> list[int]:
    idx = list(indices)
    if not idx:
        raise InvalidParameters("at least one rectangle index is required")
    for i in idx:
        if not 0 <= i < len(tf.member_sets):
            raise IndexError(f"index out of range: {i}")
    return idx


def subfamily_trace_intersecting(tf: TraceFamily, indices: Iterable[int]) -> bool:
    idx = _check_indices(tf, indices)
    common = set(tf.member_sets[idx[0]])
    for i in idx[1:]:
        common &= set(tf.member_sets[i])
        if not common:
            return False
    return bool(common)


class PQResult(NamedTuple):
    """Outcome of a (p, q)-property check.

    ``witness`` is a p-subset of rectangle indices none of whose q-subsets
    share a trace point (None when the property holds).
    """

    holds: bool
    witness: tuple[int, ...] | None = None
    method: str = "enumeration"

    def __bool__(self) -> bool:
        return self.holds


def _some_q_intersect(masks: Sequence[int], subset: Sequence[int], q: int) -> bool:
    # depth-first over q-subsets with running intersection
    def extend(start: int, acc: int, depth: int) -> bool:
        if depth == q:
            return True
        for k in range(start, len(subset)):
            nxt = acc & masks[subset[k]]
            if nxt and extend(k + 1, nxt, depth + 1):
                return True
        return False

    return any(extend(k + 1, masks[subset[k]], 1) for k in range(len(subset)) if masks[subset[k]])


def has_pq_property(tf: TraceFamily, p: int, q: int) -> PQResult:
    """Among every p members, do some q have a common trace point?

    For q = 2 the check is equivalent to ``packing number <= p - 1`` and is
    done that way once enumerating p-subsets becomes too expensive.
    """
    if q < 2 or p < q:
        raise InvalidParameters(f"invalid parameters: need p >= q >= 2, got p={p}, q={q}")
    n = len(tf.member_sets)
    if n < p:
        return PQResult(True)
    masks = tf.masks
    if q == 2 and math.comb(n, p) > PQ_ENUMERATION_LIMIT:
        res = max_packing(tf.set_system())
        if res.value <= p - 1:
            return PQResult(True, method="packing")
        return PQResult(False, tuple(res.certificate[:p]), method="packing")
    for subset in itertools.combinations(range(n), p):
        if not _some_q_intersect(masks, subset, q):
            return PQResult(False, subset)
    return PQResult(True)


def pairwise_trace_witness(tf: TraceFamily) -> tuple[int, int] | None:
    """First pair (i, j), i <= j, whose traces share no point; (i, i) flags an empty trace."""
    masks = tf.masks
    for i, m in enumerate(masks):
        if not m:
            return (i, i)
    for i, j in itertools.combinations(range(len(masks)), 2):
        if not masks[i] & masks[j]:
            return (i, j)
    return None


def trace_common_points(tf: TraceFamily) -> list[int]:
    masks = tf.masks
    if not masks:
        return list(range(tf.n_points))
    acc = masks[0]
    for m in masks[1:]:
        acc &= m
    return bits(acc)
