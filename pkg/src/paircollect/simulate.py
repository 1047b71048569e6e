"""Reproducible Monte Carlo for the pair-collection process.

Two backends produce the same laws:

* ``process`` draws Z_1, Z_2, ... uniformly from {1..n} and records when
  each new pair ``jj`` completes;
* ``inversion`` adds independent inter-collection times Y_nj, each drawn by
  inverting its closed-form CDF.

Replication ``r`` always uses the stream seeded by ``(master_seed, r)``, so a
sample does not depend on how replications are split between workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .combinatorics import check_params
from .distributions import roots, tail_Y
from .limitlaws import Normalization

__all__ = [
    "Target",
    "SimConfig",
    "EmpiricalSample",
    "rng_for",
    "simulate_process",
    "sample_Y_inversion",
    "invert_Y",
    "run_experiment",
    "normalize_sample",
]

PROCESS_BLOCK = 4096
AUTO_INVERSION_ABOVE = 50
INVERSION_BLOCK = 1024


@dataclass(frozen=True)
class Target:
    """What to extract from one run: ``Y(j)``, ``S(a)``, ``M`` or ``KthMax(k)``."""

    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in ("Y", "S", "M", "KthMax"):
            raise ValueError(f"unknown target {self.kind!r}")
        if self.kind != "M" and (self.param is None or self.param < 1):
            raise ValueError(f"target {self.kind} needs a positive parameter")

    def collected(self, n: int) -> tuple[int, int]:
        """(first, last) collection counts whose jump times bound the target.

        The target equals ``T[last] - T[first]`` with ``T[0] = 0`` and
        ``T[a]`` the draw index of the a-th completed pair.
        """
        if self.kind == "Y":
            return n - self.param, n - self.param + 1
        if self.kind == "S":
            return 0, self.param
        if self.kind == "M":
            return 0, n
        return 0, n - self.param + 1

    def validate(self, n: int) -> None:
        check_params(n)
        if self.kind != "M" and self.param > n:
            raise ValueError(f"target parameter {self.param} exceeds n = {n}")

    @property
    def tag(self) -> str:
        return self.kind if self.kind == "M" else f"{self.kind}({self.param})"


@dataclass(frozen=True)
class SimConfig:
    n: int
    target: Target
    replications: int
    master_seed: int
    backend: str | None = None  # None selects by n

    def __post_init__(self):
        self.target.validate(self.n)
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.backend not in (None, "process", "inversion"):
            raise ValueError(f"unknown backend {self.backend!r}")

    @property
    def resolved_backend(self) -> str:
        if self.backend is not None:
            return self.backend
        return "inversion" if self.n > AUTO_INVERSION_ABOVE else "process"


@dataclass(frozen=True)
class EmpiricalSample:
    values: np.ndarray
    config: SimConfig

    def __post_init__(self):
        if np.any(np.diff(self.values) < 0):
            raise ValueError("sample values must be sorted")

    def __len__(self) -> int:
        return len(self.values)

    def mean(self) -> float:
        return float(np.mean(self.values))

    def std_error(self) -> float:
        if len(self.values) < 2:
            return math.inf
        return float(np.std(self.values, ddof=1) / math.sqrt(len(self.values)))


def rng_for(master_seed: int, replication: int) -> np.random.Generator:
    """Counter-based Philox stream for one replication."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(replication,))
    return np.random.Generator(np.random.Philox(seq))


def simulate_process(n: int, rng: np.random.Generator, upto: int | None = None) -> np.ndarray:
    """Draw until ``upto`` (default n) distinct pairs are collected.

    Entry ``a - 1`` of the result is the 1-based draw index at which the a-th
    distinct pair completed. A run ``jjj`` completes ``j`` once, at its
    second draw.
    """
    check_params(n)
    upto = n if upto is None else upto
    collected = np.zeros(n, dtype=bool)
    times = np.empty(upto, dtype=np.int64)
    count = 0
    prev = -1
    offset = 0
    while count < upto:
        block = rng.integers(0, n, size=PROCESS_BLOCK)
        same = np.empty(PROCESS_BLOCK, dtype=bool)
        same[0] = block[0] == prev
        np.equal(block[1:], block[:-1], out=same[1:])
        for i in np.flatnonzero(same):
            sym = block[i]
            if not collected[sym]:
                collected[sym] = True
                times[count] = offset + i + 1
                count += 1
                if count == upto:
                    break
        prev = block[-1]
        offset += PROCESS_BLOCK
    return times


def invert_Y(n: int, j: int, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse CDF of Y_nj: smallest k >= 2 with F(k) >= u.

    A bracket of width 4 around the root of the dominant geometric term is
    tried first; entries it does not bracket restart from [1, mean] with a
    doubling upper end. Bisection finishes either way. ``F(k) >= u`` is
    evaluated as ``tail(k) <= 1 - u``.
    """
    check_params(n, j)
    v = 1.0 - np.asarray(u, dtype=float)
    r = roots(n, j)
    lead = (n + 1 + r.D) / (2 * r.D)
    guess = np.log(v / lead) / math.log1p(-r.gap1 / n)
    lo = np.maximum(np.floor(guess) - 2, 1).astype(np.int64)
    hi = np.maximum(np.ceil(guess) + 2, lo + 1).astype(np.int64)
    miss = (tail_Y(n, j, hi) > v) | ((lo > 1) & (tail_Y(n, j, lo) <= v))
    lo = np.where(miss, 1, lo)
    hi = np.where(miss, max(2, math.ceil((n * n + n) / j)), hi)
    while True:
        bad = tail_Y(n, j, hi) > v
        if not np.any(bad):
            break
        lo = np.where(bad, hi, lo)
        hi = np.where(bad, hi * 2, hi)
    while True:
        open_ = hi - lo > 1
        if not np.any(open_):
            return hi
        mid = (lo + hi) // 2
        ok = tail_Y(n, j, mid) <= v
        hi = np.where(open_ & ok, mid, hi)
        lo = np.where(open_ & ~ok, mid, lo)


def sample_Y_inversion(n: int, j: int, u: float) -> int:
    if not 0 <= u < 1:
        raise ValueError("u must lie in [0, 1)")
    return int(invert_Y(n, j, np.array([u]))[0])


def _run_chunk(config: SimConfig, start: int, stop: int) -> np.ndarray:
    n = config.n
    first, last = config.target.collected(n)
    if config.resolved_backend == "process":
        out = np.empty(stop - start, dtype=np.int64)
        for i, r in enumerate(range(start, stop)):
            times = simulate_process(n, rng_for(config.master_seed, r), upto=last)
            out[i] = times[last - 1] - (times[first - 1] if first else 0)
        return out
    # uniform number c of a replication drives Y_{n, n-c}, the wait for pair c+1
    total = np.zeros(stop - start, dtype=np.int64)
    for b in range(start, stop, INVERSION_BLOCK):
        reps = range(b, min(stop, b + INVERSION_BLOCK))
        u = np.stack([rng_for(config.master_seed, r).random(last)[first:] for r in reps])
        part = total[b - start : b - start + len(reps)]
        for c in range(first, last):
            part += invert_Y(n, n - c, u[:, c - first])
    return total


def _chunks(reps: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(reps / workers))
    return [(s, min(reps, s + size)) for s in range(0, reps, size)]


def default_workers() -> int:
    return int(os.environ.get("PAIRCOLLECT_WORKERS", "1"))


def run_experiment(config: SimConfig, workers: int | None = None) -> EmpiricalSample:
    """Run all replications of ``config`` and return the sorted sample."""
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError("workers must be >= 1")
    chunks = _chunks(config.replications, workers)
    if workers == 1 or len(chunks) == 1:
        parts = [_run_chunk(config, s, e) for s, e in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, [config] * len(chunks), *zip(*chunks)))
    values = np.sort(np.concatenate(parts))
    return EmpiricalSample(values, config)


def normalize_sample(sample: EmpiricalSample, normalization: Normalization) -> EmpiricalSample:
    values = (np.asarray(sample.values, dtype=float) - normalization.center) / normalization.scale
    return replace(sample, values=values)
