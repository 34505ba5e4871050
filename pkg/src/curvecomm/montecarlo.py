"""Monte Carlo estimators of pairwise error and symbol-error rate.

Trials are split into fixed-size chunks. Chunk ``c`` of a run seeded with
``seed`` draws from a Philox generator keyed by ``(seed, stream, c)``, so the
counts depend only on ``(seed, trials)`` and never on how chunks are spread
over workers. Draws do not depend on the decoder either: estimates for the
two decoders under the same seed share their random numbers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import norm

from .channel import (
    DecoderKind,
    euclidean_scores,
    matched_scores_scaled,
    sample_observations,
)
from .errors import InvalidPairError, InvalidParameterError
from .geometry import Constellation
from .pairwise import NoiseParams

CHUNK_SIZE = 8192
Z95 = float(norm.ppf(0.975))

_STREAM_PAIRWISE = 1
_STREAM_SER = 2


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4 * trials * trials)) / denom
    # at p in {0, 1} one bound equals p exactly; guard against roundoff
    return max(0.0, min(p, centre - half)), min(1.0, max(p, centre + half))


@dataclass(frozen=True)
class PepEstimate:
    value: float
    trials: int
    ci_low: float
    ci_high: float
    seed: int
    decoder: DecoderKind
    errors: int = 0

    @classmethod
    def from_counts(cls, errors: int, trials: int, seed: int, decoder: DecoderKind) -> "PepEstimate":
        lo, hi = wilson_interval(errors, trials)
        return cls(errors / trials, trials, lo, hi, seed, DecoderKind(decoder), errors)

    def interval(self, z: float) -> tuple[float, float]:
        """Wilson interval at an arbitrary number of standard errors ``z``."""
        return wilson_interval(self.errors, self.trials, z)

    def contains(self, p: float, z: float = 3.0) -> bool:
        lo, hi = self.interval(z)
        return lo <= p <= hi


@dataclass(frozen=True)
class SerComparison:
    """Matched and Euclidean SER on common random numbers.

    ``gap`` is Euclidean minus matched; ``gap_se`` is the paired standard error
    built from the discordant decisions, ``pooled_se`` treats the two runs as
    independent.
    """

    matched: PepEstimate
    euclidean: PepEstimate
    gap: float
    gap_se: float
    pooled_se: float


def derive_seed(master: int, *keys: int) -> int:
    """Deterministic 63-bit child seed of ``master`` for the given key path."""
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def chunk_generator(seed: int, stream: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(stream, chunk))
    return np.random.Generator(np.random.Philox(ss))


def _chunks(trials: int) -> list[tuple[int, int]]:
    return [(c, min(CHUNK_SIZE, trials - c * CHUNK_SIZE)) for c in range(math.ceil(trials / CHUNK_SIZE))]


def _run_chunks(fn: Callable[[int, int], np.ndarray], trials: int, workers: int) -> np.ndarray:
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise InvalidParameterError(f"trials must be an integer >= 1, got {trials!r}")
    if workers < 1:
        raise InvalidParameterError("workers must be >= 1")
    jobs = _chunks(int(trials))
    if workers == 1 or len(jobs) == 1:
        parts = [fn(c, size) for c, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: fn(*job), jobs))
    return np.sum(np.stack(parts), axis=0, dtype=np.int64)


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise InvalidParameterError(f"seed must be a nonnegative integer, got {seed!r}")
    return int(seed)


def pairwise_error_counts(
    c: Constellation,
    i: int,
    j: int,
    n: NoiseParams,
    trials: int,
    seed: int,
    workers: int = 1,
    mean_aware: bool = True,
) -> dict[DecoderKind, int]:
    """Count the binary events ``score(j) <= score(i)`` with ``i`` sent, for both decoders."""
    if not (0 <= i < c.M and 0 <= j < c.M) or i == j:
        raise InvalidPairError(f"invalid pair ({i}, {j}) for M={c.M}")
    seed = _check_seed(seed)
    cols = [i, j]

    def work(chunk: int, size: int) -> np.ndarray:
        rng = chunk_generator(seed, _STREAM_PAIRWISE, chunk)
        y = sample_observations(c, np.full(size, i), n, rng)
        ml = matched_scores_scaled(c, y, n)[:, cols]
        eu = euclidean_scores(c, y, n, mean_aware)[:, cols]
        return np.array([np.count_nonzero(ml[:, 1] <= ml[:, 0]), np.count_nonzero(eu[:, 1] <= eu[:, 0])])

    counts = _run_chunks(work, trials, workers)
    return {DecoderKind.MATCHED: int(counts[0]), DecoderKind.EUCLIDEAN: int(counts[1])}


def estimate_pairwise_pep(
    c: Constellation,
    i: int,
    j: int,
    decoder: DecoderKind,
    n: NoiseParams,
    trials: int,
    seed: int,
    workers: int = 1,
    mean_aware: bool = True,
) -> PepEstimate:
    """Frequency of ``score(j) <= score(i)`` given ``i`` sent (not full-codebook error)."""
    counts = pairwise_error_counts(c, i, j, n, trials, seed, workers, mean_aware)
    return PepEstimate.from_counts(counts[DecoderKind(decoder)], int(trials), int(seed), decoder)


def _ser_counts(
    c: Constellation, n: NoiseParams, trials: int, seed: int, workers: int, mean_aware: bool
) -> np.ndarray:
    """``[matched errors, euclidean errors, matched-only errors, euclidean-only errors]``."""
    seed = _check_seed(seed)

    def work(chunk: int, size: int) -> np.ndarray:
        rng = chunk_generator(seed, _STREAM_SER, chunk)
        sent = rng.integers(0, c.M, size=size)
        y = sample_observations(c, sent, n, rng)
        ml_err = np.argmin(matched_scores_scaled(c, y, n), axis=1) != sent
        eu_err = np.argmin(euclidean_scores(c, y, n, mean_aware), axis=1) != sent
        return np.array(
            [
                np.count_nonzero(ml_err),
                np.count_nonzero(eu_err),
                np.count_nonzero(ml_err & ~eu_err),
                np.count_nonzero(eu_err & ~ml_err),
            ]
        )

    return _run_chunks(work, trials, workers)


def estimate_ser(
    c: Constellation,
    decoder: DecoderKind,
    n: NoiseParams,
    trials: int,
    seed: int,
    workers: int = 1,
    mean_aware: bool = True,
) -> PepEstimate:
    """Symbol-error rate with equiprobable transmitted symbols."""
    counts = _ser_counts(c, n, trials, seed, workers, mean_aware)
    errors = counts[0] if DecoderKind(decoder) is DecoderKind.MATCHED else counts[1]
    return PepEstimate.from_counts(int(errors), int(trials), int(seed), decoder)


def compare_ser(
    c: Constellation,
    n: NoiseParams,
    trials: int,
    seed: int,
    workers: int = 1,
    mean_aware: bool = True,
) -> SerComparison:
    counts = _ser_counts(c, n, trials, seed, workers, mean_aware)
    t = int(trials)
    ml = PepEstimate.from_counts(int(counts[0]), t, int(seed), DecoderKind.MATCHED)
    eu = PepEstimate.from_counts(int(counts[1]), t, int(seed), DecoderKind.EUCLIDEAN)
    gap = eu.value - ml.value
    # paired difference of Bernoulli indicators
    p10, p01 = counts[2] / t, counts[3] / t
    gap_se = math.sqrt(max(p10 + p01 - (p01 - p10) ** 2, 0.0) / t)
    pooled = math.sqrt((ml.value * (1 - ml.value) + eu.value * (1 - eu.value)) / t)
    return SerComparison(ml, eu, gap, gap_se, pooled)


def antipodal_pair(c: Constellation) -> tuple[int, int]:
    """Indices ``(0, M/2)`` of an antipodal pair in a uniform even codebook."""
    if c.M % 2:
        raise InvalidParameterError("an antipodal partner needs even M")
    return 0, c.M // 2
