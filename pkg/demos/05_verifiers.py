"""Discrete Helly checks for planar boxes and the structural verifier for lower-bound instances."""

from pierce_lab import gen_helly4, pt_fixture, triangle_fixture, verify_halman, verify_pach_tardos
from pierce_lab.verify import corrupt_pt


def main():
    rep = verify_halman(triangle_fixture())
    print("triangle:", rep.verdict, "witness", rep.witness)
    verdicts = [verify_halman(gen_helly4(seed, 10, 30, 100)).verdict for seed in range(200)]
    print("200 filtered random instances:", {v: verdicts.count(v) for v in set(verdicts)})

    rep = verify_pach_tardos(pt_fixture(2, 1))
    print("valid fixture:", rep.verdict, {k: v["status"] for k, v in rep.checks.items()})
    print("  packing:", rep.quantities)
    for kind in ("overlap", "count", "classes"):
        pt, expected = corrupt_pt(pt_fixture(2, 1), kind)
        rep = verify_pach_tardos(pt)
        print(f"corruption {kind!r}: {rep.verdict}, witness {rep.witness} (expected {expected})")


if __name__ == "__main__":
    main()
