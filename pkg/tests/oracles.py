"""Independent reference computations used only by the tests.

Nothing here imports the closed forms under test: sums are evaluated term by
term, matrices are formed and inverted densely, and the Q-function comes from
mpmath.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

mpmath.mp.dps = 40


def q_mp(x: float) -> float:
    return float(mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2)


def point(theta: float, k: int) -> np.ndarray:
    out = []
    for m in range(1, k + 1):
        out += [math.cos(m * theta), math.sin(m * theta)]
    return np.array(out) / math.sqrt(k)


def deriv(theta: float, k: int) -> np.ndarray:
    out = []
    for m in range(1, k + 1):
        out += [-m * math.sin(m * theta), m * math.cos(m * theta)]
    return np.array(out) / math.sqrt(k)


def unit_tangent(theta: float, k: int) -> np.ndarray:
    d = deriv(theta, k)
    return d / np.linalg.norm(d)


def delta_direct(k: int, M: int, q: int) -> float:
    step = 2 * math.pi * q / M
    return math.sqrt(2.0 / k * sum(1 - math.cos(m * step) for m in range(1, k + 1)))


def cos_alpha_direct(k: int, M: int, q: int) -> float:
    step = 2 * math.pi * q / M
    v = math.sqrt(sum(m * m for m in range(1, k + 1)) / k)
    s = sum(m * math.sin(m * step) for m in range(1, k + 1))
    return abs(s) / (k * v * delta_direct(k, M, q))


def dense_cov(t: np.ndarray, beta: float, sigma: float) -> np.ndarray:
    return beta * np.outer(t, t) + sigma**2 * np.eye(t.size)


def dense_score(y, mean, t, beta, sigma) -> float:
    r = y - mean
    return float(r @ np.linalg.inv(dense_cov(t, beta, sigma)) @ r)


def expectation_mc(eta_e, a, b, rho, samples, seed):
    """Sample mean and standard error of ``Q(eta_e + a U^2 - b V^2)``, corr(U, V) = rho."""
    from scipy.stats import norm

    rng = np.random.default_rng(seed)
    cov = np.array([[1.0, rho], [rho, 1.0]])
    uv = rng.multivariate_normal([0.0, 0.0], cov, size=samples)
    vals = norm.sf(eta_e + a * uv[:, 0] ** 2 - b * uv[:, 1] ** 2)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))
