import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paircollect.distributions import (
    charfn_Y,
    moments_M,
    moments_S,
    moments_S_asym,
    moments_Y,
    pmf_X,
    pmf_Y,
    roots,
    tail_X,
    tail_Y,
)
from paircollect.oracle import recurrence_pmf_Y

valid_nj = st.integers(2, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n)))


def enumerate_first_pair(n, A, k):
    """P{first aa with a in A occurs at draw k}, by listing all n^k words."""
    hits = 0
    for w in itertools.product(range(1, n + 1), repeat=k):
        first = next((i + 1 for i in range(1, k) if w[i] == w[i - 1] and w[i] in A), None)
        hits += first == k
    return Fraction(hits, n**k)


def test_roots_examples():
    r = roots(2, 2)
    assert (r.D, r.t1, r.t2) == (1.0, 1.0, 0.0)
    r = roots(3, 2)
    assert r.D == pytest.approx(2 * math.sqrt(2), rel=1e-15)
    assert r.t1 == pytest.approx(1 + math.sqrt(2), rel=1e-15)
    assert r.t2 == pytest.approx(1 - math.sqrt(2), rel=1e-14)


@given(valid_nj)
def test_roots_invariants(nj):
    n, j = nj
    r = roots(n, j)
    assert r.t1 + r.t2 == pytest.approx(n - 1, rel=1e-12)
    assert r.t1 * r.t2 == pytest.approx(j - n, rel=1e-12, abs=1e-12)
    assert r.D > 0
    assert 0 <= r.t1 < n
    assert -1 <= r.t2 <= 0


def test_roots_domain():
    for n, j in [(1, 1), (3, 0), (3, 4)]:
        with pytest.raises(ValueError):
            roots(n, j)


def test_pmf_Y_examples():
    assert pmf_Y(2, 2, 2, exact=True) == Fraction(1, 2)
    assert pmf_Y(3, 2, 3, exact=True) == Fraction(4, 27)
    assert enumerate_first_pair(3, {1, 2}, 3) == Fraction(4, 27)
    assert pmf_Y(3, 2, 3) == pytest.approx(4 / 27, abs=1e-15)
    for n in range(2, 8):
        for j in range(1, n + 1):
            assert pmf_Y(n, j, 2, exact=True) == Fraction(j, n * n)


def test_pmf_Y_support():
    with pytest.raises(ValueError):
        pmf_Y(3, 2, 1)
    with pytest.raises(ValueError):
        pmf_Y(3, 2, 1, exact=True)


@pytest.mark.parametrize("n", range(2, 7))
def test_pmf_Y_matches_recurrence(n):
    for j in range(1, n + 1):
        rec = recurrence_pmf_Y(n, j, 25)
        floats = pmf_Y(n, j, np.arange(2, 26))
        for k in range(2, 26):
            assert pmf_Y(n, j, k, exact=True) == rec[k]
            assert abs(floats[k - 2] - float(rec[k])) <= 1e-13


def test_tail_Y_examples():
    for n, j in [(2, 1), (5, 3), (10, 10)]:
        assert tail_Y(n, j, 1, exact=True) == 1
        assert tail_Y(n, j, 1) == pytest.approx(1, abs=1e-14)
    assert tail_Y(2, 2, 3, exact=True) == Fraction(1, 4)
    assert tail_Y(2, 2, 3) == pytest.approx(0.25, abs=1e-15)
    assert tail_Y(3, 2, 2, exact=True) == 1 - recurrence_pmf_Y(3, 2, 2)[2] == Fraction(7, 9)


@given(valid_nj)
@settings(max_examples=50)
def test_tail_normalization_and_consistency(nj):
    n, j = nj
    K = math.ceil(10 * n * n / j)
    ks = np.arange(2, K + 1)
    p = pmf_Y(n, j, ks)
    assert math.fsum(p) + tail_Y(n, j, K) == pytest.approx(1, abs=1e-12)
    t = tail_Y(n, j, np.arange(1, K + 1))
    assert np.max(np.abs(t[:-1] - t[1:] - p)) <= 1e-13


def test_pmf_X_examples():
    assert pmf_X(2, 3, exact=True) == Fraction(1, 8)
    assert pmf_X(2, 4, exact=True) == Fraction(1, 8) == enumerate_first_pair(2, {1}, 4)
    for n in range(2, 9):
        assert pmf_X(n, 2, exact=True) == Fraction(1, n * n)


@pytest.mark.parametrize("n", range(2, 7))
def test_pmf_X_equals_pmf_Y_one(n):
    for k in range(2, 26):
        assert pmf_X(n, k, exact=True) == pmf_Y(n, 1, k, exact=True)
    assert np.allclose(pmf_X(n, np.arange(2, 26)), pmf_Y(n, 1, np.arange(2, 26)), rtol=1e-12, atol=0)


def test_tail_X():
    assert tail_X(2, 3, exact=True) == Fraction(5, 8)
    assert tail_X(7, 1) == pytest.approx(1)
    t = tail_X(10, np.arange(1, 400))
    assert np.all(np.diff(t) < 0)


def tail_X_prefactor_form(n, m):
    """Literal transcription of the prefactor form of 1 - F_n(m) with j = 1."""
    alpha = math.sqrt(1 + 4 / (n - 1))
    q1 = (1 - 1 / n) * (1 + alpha) / 2
    q2 = (1 - 1 / n) * (1 - alpha) / 2
    pre = (1 - 1 / n) ** -0.5 * (1 + 3 / n) ** -0.5 / n**2
    return pre * (q1**m / (1 - q1) - q2**m / (1 - q2))


@pytest.mark.parametrize("n", [2, 3, 5, 10, 50])
def test_tail_X_literal_prefactor_form_agrees(n):
    # (1 - 1/n)(1 + 3/n) = (n-1)(n+3)/n^2, so the prefactor is 1/(nD)
    for m in [1, 2, 3, 7, 20, 100]:
        assert tail_X_prefactor_form(n, m) == pytest.approx(float(tail_X(n, m, exact=True)), rel=1e-10)


def test_moments_Y_examples():
    s = moments_Y(2, 2)
    assert (s.mean, s.variance) == (3, 2)
    assert moments_Y(10, 10).mean == 11


@given(valid_nj)
def test_moments_Y_variance_nonnegative(nj):
    assert moments_Y(*nj).variance >= 0


@pytest.mark.parametrize("n", [2, 3, 7, 12, 20])
def test_moments_Y_match_pmf_sums(n):
    for j in range(1, n + 1):
        K = 40 * n * n // j
        ks = np.arange(2, K + 1, dtype=float)
        p = pmf_Y(n, j, ks)
        m = moments_Y(n, j)
        mean = math.fsum(ks * p) + K * tail_Y(n, j, K)
        second = math.fsum(ks * ks * p)
        assert mean == pytest.approx(float(m.mean), rel=1e-8)
        assert second - mean**2 == pytest.approx(float(m.variance), rel=1e-7)


def test_moments_S_examples():
    assert moments_S(3, 2).mean == 10
    assert moments_S(2, 1).variance == 2
    for n in range(2, 12):
        H = sum(Fraction(1, k) for k in range(1, n + 1))
        assert moments_S(n, n).mean == (n * n + n) * H


def test_moments_S_equals_M():
    for n in range(2, 15):
        s = moments_S(n, n)
        m = moments_M(n)[0]
        assert (s.mean, s.variance) == (m.mean, m.variance)


def test_moments_M_examples():
    assert moments_M(3)[0].mean == 22
    assert moments_M(2)[0].mean == 9


def test_moments_S_asym():
    mean, var, regime = moments_S_asym(100, 50, "proportional")
    assert mean == pytest.approx(-1e4 * math.log(0.5), rel=1e-14)
    assert mean == pytest.approx(6931.472, abs=1e-3)
    assert var == pytest.approx(1e6, rel=1e-14)
    _, var, _ = moments_S_asym(10**4, 10**2, "sublinear")
    assert var == 10**10
    assert var / float(moments_S(10**4, 10**2).variance) == pytest.approx(1, rel=0.1)
    with pytest.raises(ValueError):
        moments_S_asym(10, 10, "nearcomplete")
    with pytest.raises(ValueError):
        moments_S_asym(10, 5, "auto")


@given(valid_nj)
def test_moments_S_asym_mean_lower_bound(nj):
    n, a = nj
    if a < n:
        assert moments_S_asym(n, a, "sublinear")[0] >= a * n * (1 - 1e-12)


def test_charfn_Y():
    assert charfn_Y(5, 3, 0.0) == pytest.approx(1 + 0j, abs=1e-14)
    t = np.linspace(-10, 10, 2001)
    assert np.all(np.abs(charfn_Y(5, 3, t)) <= 1 + 1e-12)
    h = 1e-5
    deriv = (charfn_Y(4, 2, h) - charfn_Y(4, 2, -h)) / (2 * h)
    assert abs(deriv - 1j * float(moments_Y(4, 2).mean)) < 1e-4


@pytest.mark.parametrize("n,j", [(3, 1), (4, 2), (6, 6)])
def test_charfn_Y_matches_series(n, j):
    t = np.linspace(-3, 3, 13)
    ks = np.arange(2, 3000)
    p = pmf_Y(n, j, ks)
    series = (p[None, :] * np.exp(1j * t[:, None] * ks[None, :])).sum(axis=1)
    assert np.allclose(charfn_Y(n, j, t), series, atol=1e-12)
