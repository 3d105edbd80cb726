"""Families of d-intervals over d ordered ground lines.

A member is a d-tuple of optional closed index ranges ``(lo, hi)``, one per
line. Only the order of points on each line matters, so lines are plain
index sequences ``0 .. line_sizes[j] - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidParameters
from .solver import SetSystem, SolveResult, max_packing, min_hitting_set

Range = Optional[tuple[int, int]]


@dataclass(frozen=True)
class DIntervalFamily:
    d: int
    line_sizes: tuple[int, ...]
    members: tuple[tuple[Range, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "line_sizes", tuple(int(n) for n in self.line_sizes))
        members = tuple(
            tuple(None if r is None else (int(r[0]), int(r[1])) for r in m) for m in self.members
        )
        object.__setattr__(self, "members", members)
        if self.d < 1 or len(self.line_sizes) != self.d:
            raise InvalidParameters(f"need {self.d} line sizes, got {len(self.line_sizes)}")
        for k, m in enumerate(members):
            if len(m) != self.d:
                raise InvalidParameters(f"member {k} has {len(m)} components, expected {self.d}")
            if all(r is None for r in m):
                raise InvalidParameters(f"member {k} has no nonempty component")
            for j, r in enumerate(m):
                if r is not None and not 0 <= r[0] <= r[1] < self.line_sizes[j]:
                    raise InvalidParameters(
                        f"member {k} range {r} on line {j} outside 0..{self.line_sizes[j] - 1}"
                    )

    @property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for n in self.line_sizes:
            out.append(acc)
            acc += n
        return out

    def element(self, line: int, index: int) -> int:
        """Global element id of point ``index`` on ``line`` in the induced set system."""
        return self.offsets[line] + index

    def locate(self, element: int) -> tuple[int, int]:
        for j, off in enumerate(self.offsets):
            if element < off + self.line_sizes[j]:
                return j, element - off
        raise IndexError(f"element {element} outside the ground set")

    def set_system(self) -> SetSystem:
        offs = self.offsets
        sets = []
        for m in self.members:
            s = set()
            for j, r in enumerate(m):
                if r is not None:
                    s.update(range(offs[j] + r[0], offs[j] + r[1] + 1))
            sets.append(frozenset(s))
        return SetSystem(sum(self.line_sizes), tuple(sets))


def dinterval_tau(fam: DIntervalFamily, budget: int | None = None) -> SolveResult:
    return min_hitting_set(fam.set_system(), budget=budget)


def dinterval_nu(fam: DIntervalFamily, budget: int | None = None) -> SolveResult:
    return max_packing(fam.set_system(), budget=budget)


@dataclass(frozen=True)
class TransversalReport:
    d: int
    tau: int
    nu: int
    bound: int
    passed: bool
    tau_certificate: tuple[int, ...]
    nu_certificate: tuple[int, ...]
    nodes: int


def kaiser_check(fam: DIntervalFamily, budget: int | None = None) -> TransversalReport:
    """Check tau <= (d^2 - d) * nu with both sides solved exactly."""
    if fam.d < 2:
        raise InvalidParameters("the transversal bound needs d >= 2")
    t = dinterval_tau(fam, budget)
    n = dinterval_nu(fam, budget)
    bound = (fam.d * fam.d - fam.d) * n.value
    return TransversalReport(
        d=fam.d,
        tau=t.value,
        nu=n.value,
        bound=bound,
        passed=n.value <= t.value <= bound,
        tau_certificate=t.certificate,
        nu_certificate=n.certificate,
        nodes=t.nodes + n.nodes,
    )


def triangle_2interval() -> DIntervalFamily:
    """Three pairwise intersecting 2-intervals with no common point (tau = 2, nu = 1)."""
    return DIntervalFamily(
        d=2,
        line_sizes=(2, 2),
        members=(
            ((0, 0), (0, 0)),
            ((0, 0), (1, 1)),
            ((1, 1), (0, 1)),
        ),
    )


def from_components(d: int, line_sizes: Sequence[int], members) -> DIntervalFamily:
    return DIntervalFamily(d, tuple(line_sizes), tuple(tuple(m) for m in members))
