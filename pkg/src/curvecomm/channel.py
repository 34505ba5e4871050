"""Tangent-noise channel sampling and the two decision rules.

Under hypothesis ``i`` the receiver sees

    y = sqrt(1-beta) x_i + sqrt(beta) xi t_i + N,   xi ~ N(0,1), N ~ N(0, sigma_c^2 I).

Both decoders compare against the shrunken means ``sqrt(1-beta) x_i``. The
matched rule adds a rank-one correction along each candidate's tangent
(Sherman-Morrison form of the inverse covariance); the Euclidean rule ignores it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPairError, SingularModelError
from .geometry import Constellation
from .pairwise import NoiseParams

MIN_SIGMA_C = 1e-6


class DecoderKind(str, enum.Enum):
    MATCHED = "matched"
    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class Observation:
    y: np.ndarray
    true_index: int
    seed_info: str = ""


def _check_sigma(n: NoiseParams) -> None:
    if n.sigma_c < MIN_SIGMA_C:
        raise SingularModelError(
            f"sigma_c={n.sigma_c!r} is below {MIN_SIGMA_C}; the matched metric is singular"
        )


def shrunken_means(c: Constellation, n: NoiseParams, mean_aware: bool = True) -> np.ndarray:
    return c.points * n.shrink if mean_aware else c.points


def sample_observations(
    c: Constellation, indices: np.ndarray, n: NoiseParams, rng: np.random.Generator
) -> np.ndarray:
    """Draw one observation per entry of ``indices``; returns shape ``(T, 2k)``.

    The stream is consumed as ``T`` tangent draws followed by ``T * 2k``
    ambient draws, whatever the decoder downstream.
    """
    idx = np.asarray(indices, dtype=np.intp)
    xi = rng.standard_normal(idx.shape[0])
    ambient = rng.standard_normal((idx.shape[0], c.dim))
    return (
        n.shrink * c.points[idx]
        + (np.sqrt(n.beta) * xi)[:, None] * c.tangents[idx]
        + n.sigma_c * ambient
    )


def sample_observation(
    c: Constellation, i: int, n: NoiseParams, rng: np.random.Generator, seed_info: str = ""
) -> Observation:
    if not 0 <= i < c.M:
        raise InvalidPairError(f"index {i} out of range for M={c.M}")
    y = sample_observations(c, np.array([i]), n, rng)[0]
    return Observation(y=y, true_index=int(i), seed_info=seed_info)


def matched_score(c: Constellation, y: np.ndarray, i: int, n: NoiseParams) -> float:
    """Quadratic form ``(y - xbar_i)^T Sigma_i^{-1} (y - xbar_i)``."""
    _check_sigma(n)
    r = np.asarray(y, dtype=float) - n.shrink * c.points[i]
    s2 = n.sigma_c**2
    proj = float(r @ c.tangents[i])
    return float(r @ r) / s2 - n.beta * proj * proj / (s2 * (n.beta + s2))


def euclidean_scores(
    c: Constellation, y: np.ndarray, n: NoiseParams, mean_aware: bool = True
) -> np.ndarray:
    """Squared distances to every (shrunken) mean; ``y`` may be ``(D,)`` or ``(T, D)``."""
    r = np.asarray(y, dtype=float)[..., None, :] - shrunken_means(c, n, mean_aware)
    return np.einsum("...md,...md->...m", r, r)


def matched_scores_scaled(c: Constellation, y: np.ndarray, n: NoiseParams) -> np.ndarray:
    """``sigma_c^2`` times the matched score against every candidate.

    The positive scale leaves the argmin unchanged and makes the score
    bitwise identical to the Euclidean one at ``beta = 0``.
    """
    _check_sigma(n)
    r = np.asarray(y, dtype=float)[..., None, :] - shrunken_means(c, n)
    sq = np.einsum("...md,...md->...m", r, r)
    proj = np.einsum("...md,md->...m", r, c.tangents)
    return sq - (n.beta / (n.beta + n.sigma_c**2)) * proj * proj


def matched_decode(c: Constellation, y: np.ndarray, n: NoiseParams) -> int | np.ndarray:
    """Matched (maximum-likelihood) decision; ties go to the lowest index."""
    out = np.argmin(matched_scores_scaled(c, y, n), axis=-1)
    return int(out) if out.ndim == 0 else out


def euclidean_decode(
    c: Constellation, y: np.ndarray, n: NoiseParams, mean_aware: bool = True
) -> int | np.ndarray:
    """Nearest-mean decision; ties go to the lowest index.

    ``mean_aware=False`` compares against the unshrunken codewords, modelling
    a receiver that does not know ``beta`` at all.
    """
    out = np.argmin(euclidean_scores(c, y, n, mean_aware), axis=-1)
    return int(out) if out.ndim == 0 else out


def decode(
    kind: DecoderKind, c: Constellation, y: np.ndarray, n: NoiseParams, mean_aware: bool = True
) -> int | np.ndarray:
    if DecoderKind(kind) is DecoderKind.MATCHED:
        return matched_decode(c, y, n)
    return euclidean_decode(c, y, n, mean_aware)
