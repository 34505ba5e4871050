"""Exact pairwise error probabilities for the Euclidean and matched decoders."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import erfc, roots_hermitenorm

from .errors import InvalidParameterError, NotPhantomError, NumericFailureError
from .geometry import (
    DEFAULT_PHANTOM_TOL,
    Constellation,
    PairGeometry,
    antipodal_geometry,
    pair_geometry,
)

DEFAULT_QUAD_ORDER = 64
MIN_QUAD_ORDER = 8
DEGENERATE_GAMMA_TOL = 1e-12
MAX_QUAD_ORDER = 4096
QUAD_TOL = 1e-11
_SQRT2 = math.sqrt(2.0)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoiseParams:
    """Artificial-noise fraction ``beta`` and ambient noise std ``sigma_c``."""

    beta: float
    sigma_c: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.beta) and 0.0 <= self.beta < 1.0):
            raise InvalidParameterError(f"beta must lie in [0, 1), got {self.beta!r}")
        if not (math.isfinite(self.sigma_c) and self.sigma_c > 0.0):
            raise InvalidParameterError(f"sigma_c must be positive, got {self.sigma_c!r}")

    @property
    def shrink(self) -> float:
        """Mean scale ``sqrt(1 - beta)`` applied to every codeword."""
        return math.sqrt(1.0 - self.beta)


@dataclass(frozen=True)
class MatchedPepParams:
    eta_e: float
    a: float
    b: float
    rho_uv: float
    degenerate: bool


def q_function(x):
    """Gaussian upper tail ``Q(x) = P(Z > x)``.

    Accepts scalars or arrays. Evaluated as ``erfc(x/sqrt 2)/2`` which stays
    accurate in the far right tail and never exceeds 1 on the left.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise InvalidParameterError("q_function received NaN")
    out = 0.5 * erfc(arr / _SQRT2)
    return float(out) if out.ndim == 0 else out


def euclidean_pep(g: PairGeometry, n: NoiseParams) -> float:
    """Pairwise error of the covariance-ignorant nearest-neighbour decoder."""
    if not g.delta > 0:
        raise InvalidParameterError("pair geometry needs delta > 0")
    denom = 2.0 * math.sqrt(n.beta * g.cos_alpha**2 + n.sigma_c**2)
    return q_function(n.shrink * g.delta / denom)


def matched_pep_params(delta: float, gamma: float, n: NoiseParams) -> MatchedPepParams:
    """Offset and quadratic coefficients of the matched phantom-pair expectation."""
    if not (math.isfinite(delta) and delta > 0):
        raise InvalidParameterError(f"delta must be positive, got {delta!r}")
    if not (math.isfinite(gamma) and abs(gamma) <= 1.0 + DEGENERATE_GAMMA_TOL):
        raise InvalidParameterError(f"|gamma| must not exceed 1, got {gamma!r}")
    gamma = max(-1.0, min(1.0, gamma))
    beta, s = n.beta, n.sigma_c
    root = n.shrink
    one_m_g2 = 1.0 - gamma * gamma
    p_var = one_m_g2 * beta + s * s
    eta_e = root * delta / (2.0 * s)
    a = beta * p_var / (2.0 * s * (beta + s * s) * delta * root)
    b = beta * s / (2.0 * (beta + s * s) * delta * root)
    rho = max(-1.0, min(1.0, gamma * s / math.sqrt(p_var)))
    degenerate = abs(gamma) >= 1.0 - DEGENERATE_GAMMA_TOL
    return MatchedPepParams(eta_e=eta_e, a=a, b=b, rho_uv=rho, degenerate=degenerate)


def mismatch_gap(delta: float, gamma: float, n: NoiseParams) -> float:
    """Closed form of ``a - b``; nonnegative, zero iff beta = 0 or |gamma| = 1."""
    beta, s = n.beta, n.sigma_c
    return beta**2 * (1.0 - gamma * gamma) / (2.0 * s * (beta + s * s) * delta * n.shrink)


@lru_cache(maxsize=32)
def gauss_hermite_standard(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for ``E[f(U)]``, ``U ~ N(0, 1)``; weights sum to one."""
    nodes, weights = roots_hermitenorm(order)
    weights = weights / math.sqrt(2.0 * math.pi)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _tensor_expectation(p: MatchedPepParams, order: int) -> float:
    x, w = gauss_hermite_standard(order)
    tail = math.sqrt(1.0 - p.rho_uv**2)
    total = 0.0
    # row blocks keep the grid under ~4M doubles at the largest orders
    step = max(1, (1 << 22) // order)
    for start in range(0, order, step):
        u = x[start : start + step, None]
        v = p.rho_uv * u + tail * x[None, :]
        arg = p.eta_e + p.a * u * u - p.b * v * v
        if not np.all(np.isfinite(arg)):
            raise NumericFailureError("non-finite argument in matched quadrature")
        total += float(w[start : start + step] @ q_function(arg) @ w)
    return total


def matched_phantom_pep(
    delta: float,
    gamma: float,
    n: NoiseParams,
    quad_order: int = DEFAULT_QUAD_ORDER,
    *,
    adaptive: bool = True,
) -> float:
    """Matched-decoder pairwise error on a phantom pair.

    Evaluates ``E[Q(eta_e + a U^2 - b V^2)]`` with ``V = rho U + sqrt(1-rho^2) W``
    on a tensor-product Gauss-Hermite grid of ``quad_order`` nodes per axis.
    The caller guarantees the pair is phantom; :func:`matched_pep_for_pair`
    checks it.

    With ``adaptive=True`` the order is doubled until two successive values
    agree to ``QUAD_TOL`` (or ``MAX_QUAD_ORDER`` is reached). Large ``beta``
    makes ``a`` large and the integrand narrow in ``U``, where a fixed
    64-node rule is off by ~1e-4.
    """
    if isinstance(quad_order, bool) or int(quad_order) != quad_order or quad_order < MIN_QUAD_ORDER:
        raise InvalidParameterError(f"quad_order must be an integer >= {MIN_QUAD_ORDER}")
    p = matched_pep_params(delta, gamma, n)
    if p.degenerate:
        return q_function(p.eta_e)
    order = int(quad_order)
    value = _tensor_expectation(p, order)
    while adaptive and order < MAX_QUAD_ORDER:
        order = min(2 * order, MAX_QUAD_ORDER)
        refined = _tensor_expectation(p, order)
        converged = abs(refined - value) <= QUAD_TOL
        value = refined
        if converged:
            break
    else:
        if adaptive:
            log.warning("matched quadrature stopped at order %d without converging", order)
    if not math.isfinite(value):
        raise NumericFailureError("matched quadrature returned a non-finite value")
    return min(max(value, 0.0), 1.0)


def matched_pep_for_pair(
    c: Constellation,
    i: int,
    j: int,
    n: NoiseParams,
    quad_order: int = DEFAULT_QUAD_ORDER,
    tol: float = DEFAULT_PHANTOM_TOL,
) -> float:
    """Checked wrapper: refuses pairs whose chord is not orthogonal to both tangents."""
    g = pair_geometry(c, i, j, tol)
    if not g.phantom:
        raise NotPhantomError(
            f"pair ({i}, {j}) is not phantom: the chord must be orthogonal to both "
            "endpoint tangents for the matched pairwise formula to apply"
        )
    return matched_phantom_pep(g.delta, g.gamma, n, quad_order)


def antipodal_pep_euclidean(k: int, n: NoiseParams) -> float:
    """Euclidean pairwise error between a symbol and its antipode."""
    ag = antipodal_geometry(k)
    return q_function(n.shrink * ag.delta_k / (2.0 * n.sigma_c))


def antipodal_pep_matched(k: int, n: NoiseParams, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    ag = antipodal_geometry(k)
    if k == 1:
        return antipodal_pep_euclidean(1, n)
    return matched_phantom_pep(ag.delta_k, ag.gamma_k, n, quad_order)
