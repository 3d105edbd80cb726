"""Transversal versus packing for d-intervals, including the tight 2-interval triangle."""

from collections import Counter

from pierce_lab import gen_dinterval, kaiser_check, triangle_2interval


def main():
    rep = kaiser_check(triangle_2interval())
    print(f"triangle 2-interval family: tau {rep.tau}, nu {rep.nu}, bound (d^2-d) nu = {rep.bound}")

    for d in (2, 3, 4):
        ratios = Counter()
        for seed in range(200):
            rep = kaiser_check(gen_dinterval(seed, d, 10, 12))
            assert rep.passed
            ratios[(rep.tau, rep.nu)] += 1
        worst = max(t / n for t, n in ratios)
        print(f"d={d}: 200 families pass, largest tau/nu seen {worst:.2f} (bound {d * d - d})")


if __name__ == "__main__":
    main()
