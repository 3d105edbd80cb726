"""Traces, exact piercing and packing numbers, and the (p,q)-property on the triangle fixture.

Three rectangles meet pairwise in points of P, but no point of P lies in
all three, so two points are needed although any two rectangles share one.
"""

from pierce_lab import (
    geometric_pierce,
    has_pq_property,
    max_packing,
    min_hitting_set,
    oracle_min_hitting_set,
    trace,
    triangle_fixture,
)


def main():
    inst = triangle_fixture()
    print("P =", [tuple(p) for p in inst.points])
    for i, r in enumerate(inst.rects):
        print(f"R{i + 1} = [{r.x_lo},{r.x_hi}] x [{r.y_lo},{r.y_hi}]")

    tf = trace(inst)
    for i, members in enumerate(tf.member_sets):
        print(f"trace of R{i + 1}:", [tuple(inst.points[j]) for j in members])

    ss = tf.set_system()
    tau, nu = min_hitting_set(ss), max_packing(ss)
    print(f"tau = {tau.value} via points {[tuple(inst.points[j]) for j in tau.certificate]}")
    print(f"oracle agrees: tau = {oracle_min_hitting_set(ss).value}")
    print(f"nu = {nu.value} (rectangles {list(nu.certificate)})")

    print("(2,2)-property:", has_pq_property(tf, 2, 2).holds)
    res = has_pq_property(tf, 3, 3)
    print("(3,3)-property:", res.holds, "witness", res.witness)

    # with points allowed anywhere a single point suffices
    geo, pts = geometric_pierce(inst.rects)
    print(f"unrestricted piercing number {geo.value} at {[tuple(p) for p in pts]}")


if __name__ == "__main__":
    main()
