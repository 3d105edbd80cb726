"""Walk through the eight-point pipeline on a random instance that needs the reduction step.

Guards are taken in the four strips around the common intersection; the
rectangles they miss are turned into 4-intervals over the Pareto chains of
P and pierced exactly with at most four more points.
"""

from pierce_lab import gen_random_pairwise, pierce_8, select_guards, trace
from pierce_lab.solver import min_hitting_set


def find_reduction_instance():
    for seed in range(1000):
        inst = gen_random_pairwise(seed, 10, 30, 100)
        if pierce_8(inst).stage == "reduction":
            return seed, inst
    raise SystemExit("no instance reached the reduction step")


def main():
    seed, inst = find_reduction_instance()
    print(f"seed {seed}: {len(inst.rects)} rectangles, {len(inst.points)} points")

    guards = select_guards(inst)
    print("guards (left, right, bottom, top):",
          [None if g is None else tuple(inst.points[g]) for g in (guards.s1, guards.s2, guards.s3, guards.s4)])

    res = pierce_8(inst)
    print("rectangles missed by the guards:", list(res.residual_indices))
    print("origin:", tuple(res.origin))
    for q, chain in enumerate(res.chains.chains):
        print(f"  chain Q{q + 1}:", [tuple(inst.points[j]) for j in chain])
    for i, member in zip(res.residual_indices, res.family.members):
        print(f"  rectangle {i} -> ranges {member}")
    print(f"4-interval family: tau = {res.tau_reduced}, nu = {res.nu_reduced} (trace nu = {res.nu_trace}), "
          f"faithful = {res.faithful}")

    exact = min_hitting_set(trace(inst).set_system()).value
    print(f"output {[tuple(p) for p in res.points]}: {len(res)} points (bound {res.bound}), exact tau {exact}")


if __name__ == "__main__":
    main()
