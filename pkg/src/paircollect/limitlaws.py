"""Limit laws, regime normalizations and convergence diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import gammaln, ndtr

from .combinatorics import check_params
from .distributions import tail_X, tail_Y

__all__ = [
    "Regime",
    "Normalization",
    "LimitLaw",
    "KSReport",
    "normalization_for",
    "cdf_gumbel_kth",
    "cf_limit_fixed_k",
    "cdf_erlang",
    "cdf_std_normal",
    "tail_asym_Y",
    "scaled_tail_limit",
    "ks_distance",
    "ks_two_sample",
    "dprime_diagnostic",
]

REGIME_KINDS = ("fixedk", "sublinear", "proportional", "nearcomplete", "kthmax", "fullmax")


@dataclass(frozen=True)
class Regime:
    """Declared asymptotic class of the a_n sequence.

    ``k`` is required for ``fixedk`` and ``kthmax``; ``lam`` is optional for
    ``proportional`` and only recorded (scales use the concrete a/n).
    """

    kind: str
    k: int | None = None
    lam: float | None = None

    def __post_init__(self):
        if self.kind not in REGIME_KINDS:
            raise ValueError(f"unknown regime {self.kind!r}")
        if self.kind in ("fixedk", "kthmax") and (self.k is None or self.k < 1):
            raise ValueError(f"regime {self.kind} needs k >= 1")
        if self.lam is not None and not 0 < self.lam < 1:
            raise ValueError("lambda must lie in (0, 1)")

    @classmethod
    def fixed_k(cls, k: int) -> "Regime":
        return cls("fixedk", k=k)

    @classmethod
    def kth_max(cls, k: int) -> "Regime":
        return cls("kthmax", k=k)

    @property
    def tag(self) -> str:
        if self.k is not None:
            return f"{self.kind}({self.k})"
        if self.lam is not None:
            return f"{self.kind}({self.lam})"
        return self.kind


@dataclass(frozen=True)
class Normalization:
    center: float
    scale: float
    regime: Regime

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")


def normalization_for(n: int, a: int, regime: Regime) -> Normalization:
    """Centering and scaling of S_{n,a} for the declared regime."""
    check_params(n)
    if not 1 <= a <= n:
        raise ValueError(f"a must satisfy 1 <= a <= n, got {a}")
    kind = regime.kind
    if kind == "fixedk":
        if a != regime.k:
            raise ValueError(f"fixedk({regime.k}) requires a = {regime.k}, got {a}")
        return Normalization(0.0, float(n), regime)
    if kind in ("kthmax", "fullmax"):
        k = regime.k if kind == "kthmax" else 1
        if a != n - k + 1:
            raise ValueError(f"{regime.tag} requires a = n - k + 1 = {n - k + 1}, got {a}")
        return Normalization(n * n * math.log(n), float(n * n), regime)
    if a == n:
        raise ValueError(f"{kind} regime needs a < n")
    center = -(n * n) * math.log1p(-a / n)
    if kind == "sublinear":
        scale = n * math.sqrt(a)
    elif kind == "proportional":
        lam0 = (a / n) / (1 - a / n)
        scale = math.sqrt(lam0) * n**1.5
    else:
        scale = n * n / math.sqrt(n - a)
    return Normalization(center, scale, regime)


def cdf_gumbel_kth(k: int, x):
    """Limit law of the normalized k-th maximum: P(Poisson(e^-x) <= k - 1).

    For e^-x < 1 the value is formed as one minus the upper Poisson tail so
    that it stays monotone and never exceeds 1 near the top.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x = np.asarray(x, dtype=float)
    shape = (-1,) + (1,) * x.ndim
    low = np.arange(k).reshape(shape)
    high = np.arange(k, k + 60).reshape(shape)
    with np.errstate(over="ignore", invalid="ignore"):
        lam = np.exp(-x)
        log_lam = -x
        direct = np.exp(-lam + low * log_lam - gammaln(low + 1)).sum(axis=0)
        upper = np.exp(-lam + high * log_lam - gammaln(high + 1)).sum(axis=0)
    out = np.where(lam < 1, 1.0 - upper, direct)
    out = np.where(np.isposinf(x), 1.0, np.where(np.isneginf(x), 0.0, out))
    return _scalar(np.nan_to_num(out, nan=0.0))


def cf_limit_fixed_k(k: int, t):
    """(1 + t^2)^(-k/2) exp(i k arctan t)."""
    t = np.asarray(t, dtype=float)
    return _scalar((1 + t * t) ** (-k / 2) * np.exp(1j * k * np.arctan(t)))


def cdf_erlang(k: int, x):
    """Erlang(k) CDF, the law with characteristic function (1 - it)^-k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = np.asarray(x, dtype=float)
    pos = np.where(x > 0, x, 1.0)
    s = np.arange(k).reshape((-1,) + (1,) * x.ndim)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        below = np.exp(-pos + s * np.log(pos) - gammaln(s + 1)).sum(axis=0)
    out = np.where(x > 0, 1.0 - below, 0.0)
    out = np.where(np.isposinf(x), 1.0, out)
    return _scalar(out)


def cdf_std_normal(x):
    return _scalar(ndtr(np.asarray(x, dtype=float)))


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


@dataclass(frozen=True)
class LimitLaw:
    kind: str  # "erlang" | "normal" | "gumbel"
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("erlang", "normal", "gumbel"):
            raise ValueError(f"unknown law {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    def cdf(self, x):
        if self.kind == "erlang":
            return cdf_erlang(self.k, x)
        if self.kind == "gumbel":
            return cdf_gumbel_kth(self.k, x)
        return cdf_std_normal(x)

    @property
    def tag(self) -> str:
        return "normal" if self.kind == "normal" else f"{self.kind}({self.k})"


@dataclass(frozen=True)
class KSReport:
    distance: float
    sample_size: int
    law: LimitLaw
    normalization: Normalization | None = None
    seed_lineage: dict[str, Any] = field(default_factory=dict)


def _values(sample) -> np.ndarray:
    return np.asarray(getattr(sample, "values", sample), dtype=float)


def ks_distance(sample, law: LimitLaw, normalization: Normalization | None = None) -> KSReport:
    """Sup distance between the empirical CDF of ``sample`` and ``law``.

    ``sample`` is an EmpiricalSample or a sorted array.
    """
    x = _values(sample)
    if x.size == 0:
        raise ValueError("empty sample")
    if np.any(np.diff(x) < 0):
        raise ValueError("sample must be sorted")
    N = x.size
    F = np.asarray(law.cdf(x), dtype=float)
    i = np.arange(1, N + 1)
    d = max(np.max(np.abs(i / N - F)), np.max(np.abs((i - 1) / N - F)))
    config = getattr(sample, "config", None)
    lineage = {} if config is None else {"master_seed": config.master_seed, "replications": config.replications}
    return KSReport(float(d), N, law, normalization, lineage)


def ks_two_sample(a, b) -> float:
    """Two-sample KS statistic; exact with ties."""
    a = np.sort(_values(a))
    b = np.sort(_values(b))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    grid = np.union1d(a, b)
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def tail_asym_Y(n: int, j: int, x: float) -> float:
    """Two-term expansion of P{Y_nj > n^2 (x + ln n)} for fixed small j."""
    check_params(n)
    return math.exp(-j * x) / n**j * (1 + j * (x + math.log(n)) / n)


def _level(n: int, x: float) -> int:
    u = n * n * (x + math.log(n))
    if u < 1:
        raise ValueError(f"u_n = {u:.6g} < 1; x too negative for n = {n}")
    return math.floor(u)


def scaled_tail_limit(n: int, x: float) -> float:
    """n * P{X_nj > floor(n^2 (x + ln n))}, which tends to e^-x."""
    check_params(n)
    return n * tail_X(n, _level(n, x))


def dprime_diagnostic(n: int, k: int, x: float) -> float:
    """n * (floor(n/k) - 1) * P{Y_n2 > floor(u_n)}, which tends to e^-2x / k."""
    check_params(n)
    if k < 1:
        raise ValueError("k must be >= 1")
    return n * (n // k - 1) * tail_Y(n, 2, _level(n, x))
