"""The (p,2) pipelines: pairwise intersecting families, the opposite-quadrant condition, and the composite."""

from pierce_lab import (
    gen_clusters,
    gen_quadrant,
    gen_random_pq,
    pierce_pairwise_p,
    pierce_pq_composite,
    pierce_quadrant_condition_p,
    trace,
)
from pierce_lab.geom import Point
from pierce_lab.solver import min_hitting_set


def exact_tau(inst):
    return min_hitting_set(trace(inst).set_system()).value


def main():
    for p in (2, 3, 4):
        inst = gen_random_pq(11, 10, 30, 100, p, avoid_core=False)
        res = pierce_pairwise_p(inst, p)
        print(f"pairwise, p={p}: {len(res)} points (bound {res.bound}), 4-interval tau {res.tau_reduced}, "
              f"exact tau {exact_tau(inst)}")

    for p in (2, 3):
        inst = gen_quadrant(5, 10, 30, 100, p)
        origin = Point(*inst.metadata["origin"])
        res = pierce_quadrant_condition_p(inst, p, origin)
        print(f"quadrant condition around {tuple(origin)}, p={p}: {len(res)} points (bound {res.bound})")

    inst = gen_clusters(3, 3, 3, 30, 100, 3)
    res = pierce_pq_composite(inst, 3)
    print(f"composite, p=3: unrestricted tau {res.geometric_tau}, {len(res.classes)} classes")
    for c in res.classes:
        print(f"  anchor {tuple(c.anchor)}: rectangles {list(c.rect_indices)} -> points "
              f"{[tuple(inst.points[j]) for j in c.result.point_indices]}")
    print(f"  total {len(res)} points (bound {res.bound}), exact tau {exact_tau(inst)}")


if __name__ == "__main__":
    main()
