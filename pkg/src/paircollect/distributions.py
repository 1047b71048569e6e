"""Laws of the pair waiting times X_nj, Y_nj, S_{n,a} and M_n.

Every closed form has two evaluation paths: exact rationals (arithmetic in
the quadratic field Q(sqrt d), d = (n+1)^2 - 4j, where the irrational parts
cancel) and stable floating point. The float path never forms ``1 - q1``
by subtraction; it uses ``n - t1 = 2j / (n + 1 + D)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
import numpy as np

from .combinatorics import EULER_GAMMA, check_params

Number = Union[float, Fraction]

__all__ = [
    "PairModel",
    "Roots",
    "MomentSummary",
    "roots",
    "pmf_Y",
    "tail_Y",
    "pmf_X",
    "tail_X",
    "moments_Y",
    "moments_S",
    "moments_S_asym",
    "moments_M",
    "asym_mean_M",
    "asym_var_M",
    "charfn_Y",
]


@dataclass(frozen=True)
class PairModel:
    n: int

    def __post_init__(self):
        check_params(self.n)


@dataclass(frozen=True)
class Roots:
    """Roots of t^2 - (n-1) t - (n-j) = 0 and derived quantities."""

    n: int
    j: int
    D: float
    t1: float
    t2: float
    # n - t1, kept separately because it is tiny (about j/n) for large n
    gap1: float

    @property
    def q1(self) -> float:
        return self.t1 / self.n

    @property
    def q2(self) -> float:
        return self.t2 / self.n


def roots(n: int, j: int) -> Roots:
    check_params(n, j)
    D = math.sqrt((n + 1) ** 2 - 4 * j)
    gap1 = 2 * j / (n + 1 + D)
    return Roots(n=n, j=j, D=D, t1=n - gap1, t2=gap1 - 1, gap1=gap1)


class _Surd:
    """Element ``x + y*sqrt(d)`` of Q(sqrt d) with rational x, y."""

    __slots__ = ("x", "y", "d")

    def __init__(self, x, y, d: int):
        self.x = Fraction(x)
        self.y = Fraction(y)
        self.d = d

    def __mul__(self, other: "_Surd") -> "_Surd":
        return _Surd(
            self.x * other.x + self.d * self.y * other.y,
            self.x * other.y + self.y * other.x,
            self.d,
        )

    def __sub__(self, other: "_Surd") -> "_Surd":
        return _Surd(self.x - other.x, self.y - other.y, self.d)

    def __truediv__(self, other: "_Surd") -> "_Surd":
        norm = other.x * other.x - self.d * other.y * other.y
        conj = _Surd(other.x, -other.y, self.d)
        prod = self * conj
        return _Surd(prod.x / norm, prod.y / norm, self.d)

    def __pow__(self, m: int) -> "_Surd":
        result = _Surd(1, 0, self.d)
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result


def _exact_q(n: int, j: int) -> tuple[_Surd, _Surd, int]:
    d = (n + 1) ** 2 - 4 * j
    half_n = Fraction(1, 2 * n)
    q1 = _Surd((n - 1) * half_n, half_n, d)
    q2 = _Surd((n - 1) * half_n, -half_n, d)
    return q1, q2, d


def _rational_part(value: _Surd, scale: Fraction) -> Fraction:
    """``scale * value / sqrt(d)`` where ``value`` is purely irrational."""
    if value.x != 0:
        raise ArithmeticError("closed form did not cancel to a rational")
    return scale * value.y


def _check_support(k, lowest: int, name: str) -> None:
    if np.any(np.asarray(k) < lowest):
        raise ValueError(f"{name} must be >= {lowest}")


def _signed_pow(q: float, e):
    """q**e for q in [-1, 0] and integer-valued e >= 1, in log space."""
    e = np.asarray(e, dtype=float)
    if q == 0.0:
        return np.zeros_like(e)
    mag = np.exp(e * math.log(-q))
    parity = np.where(np.mod(e, 2) == 1, -1.0, 1.0)
    return parity * mag


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def pmf_Y(n: int, j: int, k, exact: bool = False):
    """P{Y_nj = k} for k >= 2.

    With ``exact=True`` ``k`` must be an int and a ``Fraction`` is returned;
    otherwise ``k`` may be an array.
    """
    check_params(n, j)
    _check_support(k, 2, "k")
    if exact:
        q1, q2, _ = _exact_q(n, j)
        return _rational_part(q1 ** (k - 1) - q2 ** (k - 1), Fraction(j, n))
    r = roots(n, j)
    e = np.asarray(k, dtype=float) - 1
    lead = np.exp(e * math.log1p(-r.gap1 / n))
    return _scalar(j / (n * r.D) * (lead - _signed_pow(r.q2, e)))


def tail_Y(n: int, j: int, m, exact: bool = False):
    """P{Y_nj > m} for m >= 1."""
    check_params(n, j)
    _check_support(m, 1, "m")
    if exact:
        q1, q2, _ = _exact_q(n, j)
        one = _Surd(1, 0, q1.d)
        value = q1**m / (one - q1) - q2**m / (one - q2)
        return _rational_part(value, Fraction(j, n))
    r = roots(n, j)
    e = np.asarray(m, dtype=float)
    c1 = (n + 1 + r.D) / (2 * r.D)
    c2 = 2 * j / (r.D * (n + 1 + r.D))
    lead = np.exp(e * math.log1p(-r.gap1 / n))
    return _scalar(c1 * lead - c2 * _signed_pow(r.q2, e))


def pmf_X(n: int, k, exact: bool = False):
    """P{X_nj = k} from the binomial sum over isolated occurrences of j."""
    check_params(n)
    _check_support(k, 2, "k")
    if not exact:
        ks = np.asarray(k)
        out = np.array([_pmf_X_float(n, int(kk)) for kk in ks.ravel()])
        return _scalar(out.reshape(ks.shape))
    p = Fraction(n - 1, n)
    return sum(
        (math.comb(k - s - 2, s) * p ** (k - s - 2) / Fraction(n) ** (s + 2) for s in range(k // 2)),
        Fraction(0),
    )


def _pmf_X_float(n: int, k: int) -> float:
    s = np.arange(k // 2)
    log_terms = (
        np.array([math.lgamma(k - x - 1) - math.lgamma(x + 1) - math.lgamma(k - 2 * x - 1) for x in s])
        + (k - s - 2) * math.log1p(-1 / n)
        - (s + 2) * math.log(n)
    )
    top = log_terms.max()
    return float(math.exp(top) * np.exp(log_terms - top).sum())


def tail_X(n: int, m, exact: bool = False):
    """P{X_nj > m}, the common tail 1 - F_n(m)."""
    return tail_Y(n, 1, m, exact=exact)


@dataclass(frozen=True)
class MomentSummary:
    mean: Number
    variance: Number
    target: str

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("negative variance")


def _var_Y(n: int, j: int) -> Fraction:
    return Fraction(n**4, j * j) * (1 + Fraction(2, n) - Fraction(3 * j - 1, n * n) - Fraction(j, n**3))


def moments_Y(n: int, j: int) -> MomentSummary:
    check_params(n, j)
    return MomentSummary(Fraction(n * n + n, j), _var_Y(n, j), f"Y({n},{j})")


def _check_a(n: int, a: int) -> None:
    check_params(n)
    if not isinstance(a, int) or not 1 <= a <= n:
        raise ValueError(f"a must satisfy 1 <= a <= n={n}, got {a!r}")


def moments_S(n: int, a: int) -> MomentSummary:
    """Exact mean and variance of S_{n,a} = Y_nn + ... + Y_{n,n-a+1}."""
    _check_a(n, a)
    js = range(n - a + 1, n + 1)
    mean = (n * n + n) * sum((Fraction(1, j) for j in js), Fraction(0))
    var = sum((_var_Y(n, j) for j in js), Fraction(0))
    return MomentSummary(mean, var, f"S({n},{a})")


_ASYM_REGIMES = ("sublinear", "proportional", "nearcomplete")


def moments_S_asym(n: int, a: int, regime: str) -> tuple[float, float, str]:
    """Main terms of the mean and variance of S_{n,a} under a declared regime."""
    _check_a(n, a)
    if a == n:
        raise ValueError("a = n is the full maximum; use moments_M")
    if regime not in _ASYM_REGIMES:
        raise ValueError(f"regime must be one of {_ASYM_REGIMES}, got {regime!r}")
    main_mean = -(n * n) * math.log1p(-a / n)
    if regime == "sublinear":
        main_var = float(n * n * a)
    elif regime == "proportional":
        main_var = (a / n) / (1 - a / n) * n**3
    else:
        main_var = n**4 / (n - a)
    return main_mean, main_var, regime


def asym_mean_M(n: int, dps: int | None = None):
    """Expansion of E M_n through the 1/n^2 term.

    With ``dps`` the value is an ``mpmath.mpf`` at that working precision;
    the dropped remainder is about 1/(120 n^3), far below double resolution
    once n is in the hundreds.
    """
    if dps is None:
        return (n * n + n) * (math.log(n) + EULER_GAMMA) + n / 2 + 5 / 12 - 1 / (12 * n) + 1 / (120 * n * n)
    with mpmath.workdps(dps):
        nn = mpmath.mpf(n)
        return +((nn * nn + nn) * (mpmath.log(nn) + mpmath.euler) + nn / 2 + mpmath.mpf(5) / 12
                 - 1 / (12 * nn) + 1 / (120 * nn * nn))


def asym_var_M(n: int) -> float:
    return math.pi**2 * n**4 / 6 + (math.pi**2 / 3 - 1) * n**3 - 3 * n * n * math.log(n)


def moments_M(n: int) -> tuple[MomentSummary, float, float]:
    check_params(n)
    exact = moments_S(n, n)
    return MomentSummary(exact.mean, exact.variance, f"M({n})"), asym_mean_M(n), asym_var_M(n)


def charfn_Y(n: int, j: int, t):
    """E exp(i t Y_nj) as a sum of two geometric series."""
    r = roots(n, j)
    t = np.asarray(t, dtype=float)
    z = np.exp(1j * t)
    out = j / (n * r.D) * (r.q1 * z * z / (1 - r.q1 * z) - r.q2 * z * z / (1 - r.q2 * z))
    return _scalar(out)

