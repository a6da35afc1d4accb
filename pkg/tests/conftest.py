"""Shared fixtures and brute-force oracles.

The oracles materialise quotient sequences index by index with plain
loops, following the defining recursions directly.  They are deliberately
independent of the closed-form block arithmetic in the package: every
expected value in the test-suite that is not pinned by hand comes from
these loops (or from direct summation over them).
"""

from __future__ import annotations

import math

import numpy as np
import pytest

LOG2 = math.log(2.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260821)


def _min_depth_summable(j: int, A: float) -> int:
    # smallest d with (2/A)**d <= 2**-(j/2 + 1)
    d = 1
    while (2.0 / A) ** d > 2.0 ** (-(j / 2.0 + 1.0)):
        d += 1
    return d


def staircase_oracle(family: str, A: float, j_max: int,
                     A0: float | None = None) -> dict:
    """Per-index recursion for the staircase families.

    Returns a dict with ``log_mu`` (numpy array, index 0 .. k_max) and
    ``rows`` (list of per-level tuples ``(j, a, b, d, c)``).
    """
    log_a = math.log(A)
    log_mu: list[float] = [0.0]
    if family == "nq":
        log_mu.append(LOG2)  # mu_1 = 2
    else:
        log_mu.append(0.0)  # mu_1 = 1
    rows: list[tuple[int, int, int, int, int]] = []
    a, lm_a = 1, log_mu[1]
    d_prev = c_prev = 0
    for j in range(1, j_max + 1):
        # ladder depth and ramp count per family rule
        if family == "nq":
            d = max(d_prev + 1, _min_depth_summable(j, A))
            c = j
        elif family == "qa-vanishing":
            d, c = j, j
        elif family == "qa-diverging":
            if j == 1:
                d, c = 1, 1
            else:
                c = max(c_prev + 1, j)
                d = d_prev
                while True:
                    d += 1
                    ratio = lm_a - math.log(a) + d * math.log(A / 2.0)
                    band_lo = (math.sqrt(2.0) ** (c - 1)
                               * math.log(j + 1.0))
                    band_hi = ((math.sqrt(2.0) ** (c - 1) - 1.0)
                               * j * math.log(j + 1.0))
                    if ratio < math.log(band_lo) - 1e-12:
                        continue
                    if ratio <= math.log(band_hi) + 1e-12:
                        break
                    c += 1
                    d = d_prev
        elif family == "qa-oscillating":
            d = d_prev + 1
            while lm_a - math.log(a) + d * math.log(A / 2.0) \
                    <= math.log(j) + 1e-12:
                d += 1
            ratio_b = lm_a - math.log(a) + d * math.log(A / 2.0)
            c = max(c_prev + 1, j)
            while c * LOG2 / 2.0 < math.log(j) + ratio_b - 1e-12:
                c += 1
        else:
            raise ValueError(family)
        # ladder: quotients multiply by A once per dyadic sub-range
        for i in range(d):
            base = a << i
            val = lm_a + (i + 1) * log_a
            for _ in range(base + 1, 2 * base + 1):
                log_mu.append(val)
        b = a << d
        lm_b = lm_a + d * log_a
        # ramp: each dyadic sub-range gains sqrt(2) uniformly in log
        lm = lm_b
        for i in range(c):
            base = b << i
            lr = LOG2 / (2.0 * base)
            for t in range(1, base + 1):
                log_mu.append(lm + t * lr)
            lm += base * lr
        rows.append((j, a, b, d, c))
        a, lm_a = b << c, lm
        d_prev, c_prev = d, c
    return {"log_mu": np.array(log_mu), "rows": rows}


def gevrey_oracle(s: float, k_max: int) -> np.ndarray:
    ks = np.arange(k_max + 1, dtype=np.float64)
    out = np.zeros(k_max + 1)
    out[1:] = s * np.log(ks[1:])
    return out


def oracle_log_M(log_mu: np.ndarray) -> np.ndarray:
    return np.cumsum(log_mu)


def oracle_counting(log_mu: np.ndarray, x: float) -> tuple[int, float]:
    vals = log_mu[1:]
    mask = vals <= x
    return int(mask.sum()), float(vals[mask].sum())


def oracle_recip(log_mu: np.ndarray, k_hi: int) -> float:
    return float(np.sum(np.exp(-log_mu[1:k_hi + 1])))


def oracle_assoc(log_mu: np.ndarray, log_t: float) -> float:
    """sup_j (j * log t - log M_j) over j >= 0, directly."""
    log_M = np.cumsum(log_mu)
    j = np.arange(log_mu.size, dtype=np.float64)
    return float(np.max(j * log_t - log_M))
