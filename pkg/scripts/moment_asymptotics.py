"""Exact against asymptotic moments of the full collection time M_n."""

import argparse
from fractions import Fraction

import mpmath

from paircollect.distributions import asym_mean_M, asym_var_M, moments_M


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-grid", default="10,25,50,100,200,400,800")
    args = ap.parse_args()

    print(f"{'n':>5} {'E M_n':>16} {'n^2 |mean gap|':>15} {'var M_n':>20} {'var gap / n^2':>14}")
    for n in map(int, args.n_grid.split(",")):
        exact, _, asym_var = moments_M(n)
        with mpmath.workdps(60):
            exact_mean = mpmath.mpf(exact.mean.numerator) / exact.mean.denominator
            mean_gap = float(n * n * abs(exact_mean - asym_mean_M(n, dps=60)))
        var_gap = float(abs(exact.variance - Fraction(asym_var))) / (n * n)
        print(f"{n:>5} {float(exact.mean):>16.6f} {mean_gap:>15.3e} {float(exact.variance):>20.6e} {var_gap:>14.4f}")


if __name__ == "__main__":
    main()
