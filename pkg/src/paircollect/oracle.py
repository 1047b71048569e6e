"""Ground-truth engines: exhaustive enumeration and exact recurrences."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import check_params, iter_b_counts

__all__ = ["SizeGuardError", "EnumeratedLaws", "enumerate_laws", "recurrence_pmf_Y", "MAX_N", "MAX_LEN"]

MAX_N = 4
MAX_LEN = 12


class SizeGuardError(ValueError):
    """Requested enumeration exceeds the n^L budget."""


@dataclass(frozen=True)
class EnumeratedLaws:
    """Exact laws read off all n^L draw sequences.

    Waiting times beyond the horizon are lumped into the key ``L + 1``
    ("> L"); only keys ``<= L`` are fully resolved.
    """

    n: int
    L: int
    # first_pair_counts[x] = number of sequences whose first-pair-time vector is x
    first_pair_counts: Counter

    @property
    def total(self) -> int:
        return self.n**self.L

    def _prob(self, count: int) -> Fraction:
        return Fraction(count, self.total)

    def pmf_X(self, j: int) -> dict[int, Fraction]:
        """Law of the first time ``jj`` occurs (1-based symbol ``j``)."""
        return self.pmf_Ytilde((j,))

    def pmf_Ytilde(self, A) -> dict[int, Fraction]:
        """Law of the first time ``aa`` occurs for some ``a`` in ``A``."""
        idx = [a - 1 for a in A]
        out: Counter = Counter()
        for times, c in self.first_pair_counts.items():
            out[min(times[i] for i in idx)] += c
        return {k: self._prob(v) for k, v in sorted(out.items())}

    def joint_tail(self, S, m: int) -> Fraction:
        """P{X_i > m for every i in S}."""
        if m > self.L:
            raise ValueError("m beyond enumeration horizon")
        idx = [i - 1 for i in S]
        return self._prob(sum(c for times, c in self.first_pair_counts.items() if all(times[i] > m for i in idx)))

    def subsets(self):
        syms = range(1, self.n + 1)
        for r in range(1, self.n + 1):
            yield from itertools.combinations(syms, r)


def enumerate_laws(n: int, L: int) -> EnumeratedLaws:
    """Scan every sequence in {1..n}^L in lexicographic order.

    An odometer walks the sequences; per-position state (the vector of first
    pair times seen so far) is rebuilt only from the leftmost changed digit.
    """
    check_params(n)
    if n > MAX_N or L > MAX_LEN or L < 2:
        raise SizeGuardError(f"enumeration needs 2 <= n <= {MAX_N} and 2 <= L <= {MAX_LEN}, got n={n}, L={L}")
    beyond = L + 1
    digits = [0] * L
    # state[p] = first-pair-time vector after reading positions < p
    state = [None] * (L + 1)
    state[0] = (beyond,) * n
    counts: Counter = Counter()
    changed = 0
    while True:
        for p in range(changed + 1, L + 1):
            times = state[p - 1]
            cur = digits[p - 1]
            if p >= 2 and digits[p - 2] == cur and times[cur] == beyond:
                times = times[:cur] + (p,) + times[cur + 1 :]
            state[p] = times
        counts[state[L]] += 1
        pos = L - 1
        while pos >= 0 and digits[pos] == n - 1:
            digits[pos] = 0
            pos -= 1
        if pos < 0:
            break
        digits[pos] += 1
        changed = pos
    return EnumeratedLaws(n, L, counts)


def recurrence_pmf_Y(n: int, j: int, K: int) -> dict[int, Fraction]:
    """P{Y_nj = k} = b_{k-1} / n^k for k = 2..K from the run-count recurrence."""
    check_params(n, j)
    if K < 2:
        raise ValueError("K must be >= 2")
    out = {}
    power = Fraction(1)
    for l, b in enumerate(iter_b_counts(n, j)):
        power /= n
        if l == 0:
            continue
        out[l + 1] = b * power
        if l + 1 == K:
            break
    return out
