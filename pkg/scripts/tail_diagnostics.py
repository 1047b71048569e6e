"""Deterministic tail diagnostics: n P{X > u_n} and the D' block sum."""

import math

import numpy as np

from paircollect.limitlaws import dprime_diagnostic, scaled_tail_limit, tail_asym_Y
from paircollect.distributions import tail_Y


def main():
    grid = [10**2, 10**3, 10**4, 10**5]
    print("n P{X > u_n} / e^-x")
    for x in (-0.5, 0.0, 1.0, 2.0):
        ratios = [scaled_tail_limit(n, x) / math.exp(-x) for n in grid]
        print(f"  x={x:>5}: " + "  ".join(f"{r:.5f}" for r in ratios))

    print("tail of Y_nj at u_n over its two-term expansion (x = 0)")
    for j in (1, 2, 3):
        ratios = [tail_Y(n, j, math.floor(n * n * math.log(n))) / tail_asym_Y(n, j, 0.0) for n in grid]
        print(f"  j={j}: " + "  ".join(f"{r:.7f}" for r in ratios))

    print("k * D' block sum (x = 0), should approach 1")
    for k in (2, 5, 10, 20, 50):
        values = [k * dprime_diagnostic(n, k, 0.0) for n in grid if n >= 2 * k]
        print(f"  k={k:>2}: " + "  ".join(f"{v:.4f}" for v in values))

    xs = np.linspace(-1, 3, 5)
    print("n = 1e4 scaled tail against e^-x over", xs.tolist())
    print("  " + "  ".join(f"{scaled_tail_limit(10**4, x):.4f}/{math.exp(-x):.4f}" for x in xs))


if __name__ == "__main__":
    main()
