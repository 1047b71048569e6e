"""Exact integer and rational kernels.

Binomials, the Fibonacci/Chebyshev-type sum and its closed form, harmonic
numbers, and the run-avoiding string counts that serve as ground truth for
the law of the pair waiting time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "EULER_GAMMA",
    "PI_SQ_OVER_6",
    "HarmonicConstants",
    "RunCounts",
    "ClosedFormCounts",
    "binomial",
    "chebyshev_sum",
    "chebyshev_closed",
    "harmonic",
    "harmonic_asym",
    "run_counts",
    "closed_form_counts",
    "check_params",
]

EULER_GAMMA = 0.57721566490153286060651209008240243
PI_SQ_OVER_6 = math.pi**2 / 6


@dataclass(frozen=True)
class HarmonicConstants:
    gamma: float = EULER_GAMMA
    pi_sq_over_6: float = PI_SQ_OVER_6


def check_params(n: int, j: int | None = None) -> None:
    """Raise ``ValueError`` unless ``n >= 2`` and ``1 <= j <= n``."""
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if j is not None and (not isinstance(j, int) or not 1 <= j <= n):
        raise ValueError(f"j must satisfy 1 <= j <= n={n}, got {j!r}")


def binomial(r: int, s: int) -> int:
    """C(r, s), zero when s > r."""
    if r < 0 or s < 0:
        raise ValueError("binomial arguments must be non-negative")
    return math.comb(r, s)


def chebyshev_sum(r: int, x: Fraction | int) -> Fraction:
    """Exact value of sum_{s=0}^{floor(r/2)} C(r-s, s) x^s."""
    if r < 0:
        raise ValueError("r must be non-negative")
    x = Fraction(x)
    total = Fraction(0)
    power = Fraction(1)
    for s in range(r // 2 + 1):
        total += math.comb(r - s, s) * power
        power *= x
    return total


def chebyshev_closed(r: int, x: float) -> float:
    """Closed form ((1+a)/2)^(r+1) - ((1-a)/2)^(r+1), over a, with a = sqrt(1+4x)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    disc = 1.0 + 4.0 * float(x)
    if disc <= 0.0:
        raise ValueError(f"chebyshev_closed needs 1 + 4x > 0, got x={x!r}")
    alpha = math.sqrt(disc)
    # float ** int is binary exponentiation in CPython
    return (((1.0 + alpha) / 2.0) ** (r + 1) - ((1.0 - alpha) / 2.0) ** (r + 1)) / alpha


def harmonic(n: int) -> tuple[Fraction, Fraction]:
    """Exact (H_n, H_n^(2))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    den = math.lcm(*range(1, n + 1))
    den2 = den * den
    return (
        Fraction(sum(den // k for k in range(1, n + 1)), den),
        Fraction(sum(den2 // (k * k) for k in range(1, n + 1)), den2),
    )


def harmonic_asym(n: int) -> tuple[float, float, tuple[float, float]]:
    """Asymptotic H_n and H_n^(2) with bounds on the dropped terms.

    Returns ``(h1, h2, (b1, b2))`` where ``H_n`` lies in ``(h1 - b1, h1)``
    and ``H_n^(2)`` lies in ``(h2, h2 + b2)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    h1 = math.log(n) + EULER_GAMMA + 1 / (2 * n) - 1 / (12 * n**2) + 1 / (120 * n**4)
    h2 = PI_SQ_OVER_6 - 1 / n
    return h1, h2, (1 / (252 * n**6), 1 / (n * (n + 1)))


@dataclass(frozen=True)
class RunCounts:
    """Counts of length-l strings over {1..n} with no ``aa`` for ``a`` in a j-set.

    ``a[l]`` counts strings ending outside the target set, ``b[l]`` those
    ending inside it, ``s[l] = a[l] + b[l]``.
    """

    n: int
    j: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    s: tuple[int, ...]


def run_counts(n: int, j: int, L: int) -> RunCounts:
    check_params(n, j)
    if L < 0:
        raise ValueError("L must be non-negative")
    a, b = [1], [0]
    for _ in range(L):
        prev_a, prev_b = a[-1], b[-1]
        a.append((n - j) * (prev_a + prev_b))
        b.append(j * prev_a + (j - 1) * prev_b)
    s = tuple(x + y for x, y in zip(a, b))
    return RunCounts(n, j, tuple(a), tuple(b), s)


def iter_b_counts(n: int, j: int):
    """Yield b_0, b_1, ... without storing the sequence."""
    a, b = 1, 0
    while True:
        yield b
        a, b = (n - j) * (a + b), j * a + (j - 1) * b


@dataclass(frozen=True)
class ClosedFormCounts:
    """``s_l = c1 * t1**l + c2 * t2**l``."""

    c1: float
    c2: float
    t1: float
    t2: float

    def s(self, l: int) -> float:
        return self.c1 * self.t1**l + self.c2 * self.t2**l


def closed_form_counts(n: int, j: int) -> ClosedFormCounts:
    check_params(n, j)
    d = math.sqrt((n + 1) ** 2 - 4 * j)
    inv = (1 - 4 * j / (n + 1) ** 2) ** -0.5
    return ClosedFormCounts(
        c1=0.5 * (1 + inv),
        c2=0.5 * (1 - inv),
        t1=(n - 1 + d) / 2,
        t2=(n - 1 - d) / 2,
    )
