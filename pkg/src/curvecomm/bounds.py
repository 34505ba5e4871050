"""Symbol-error-rate bounds for uniform even codebooks."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameterError
from .geometry import PairGeometry, _check_order, offset_spectrum
from .pairwise import (
    DEFAULT_QUAD_ORDER,
    NoiseParams,
    antipodal_pep_euclidean,
    antipodal_pep_matched,
    euclidean_pep,
)


@dataclass(frozen=True)
class SerBounds:
    """Euclidean SER sandwich plus the matched antipodal lower bound.

    ``upper_raw`` is the plain union bound and can exceed one; ``upper`` is
    the same value clamped to one.
    """

    lower: float
    upper: float
    upper_raw: float
    per_offset: tuple[tuple[int, float], ...]
    matched_lower: float


def _check_even(M: int) -> int:
    if isinstance(M, bool) or int(M) != M or M < 2 or M % 2:
        raise InvalidParameterError(f"M must be an even integer >= 2, got {M!r}")
    return int(M)


def offset_pep_euclidean(k: int, M: int, q: int, n: NoiseParams) -> float:
    """Euclidean pairwise error towards the codeword at index offset ``q``."""
    delta, cos_alpha = offset_spectrum(k, M, q)
    return euclidean_pep(PairGeometry(delta, cos_alpha, gamma=0.0, phantom=False), n)


def euclidean_union_sum(k: int, M: int, n: NoiseParams) -> float:
    """Unpaired union bound summed over every offset ``q = 1..M-1``."""
    return sum(offset_pep_euclidean(k, M, q, n) for q in range(1, M))


def euclidean_ser_bounds(
    k: int, M: int, n: NoiseParams, quad_order: int = DEFAULT_QUAD_ORDER
) -> SerBounds:
    k = _check_order(k)
    M = _check_even(M)
    half = M // 2
    per_offset = [(q, offset_pep_euclidean(k, M, q, n)) for q in range(1, half)]
    # the antipodal class uses its exact closed form
    per_offset.append((half, antipodal_pep_euclidean(k, n)))
    values = [p for _, p in per_offset]
    upper_raw = 2.0 * sum(values[:-1]) + values[-1]
    return SerBounds(
        lower=max(values),
        upper=min(upper_raw, 1.0),
        upper_raw=upper_raw,
        per_offset=tuple(per_offset),
        matched_lower=antipodal_pep_matched(k, n, quad_order),
    )


def matched_ser_lower_bound(
    k: int, M: int, n: NoiseParams, quad_order: int = DEFAULT_QUAD_ORDER
) -> float:
    """Matched SER lower bound from the antipodal event.

    It accounts for one offset class out of the ``M - 1`` pairwise
    comparisons each symbol sees; no matched upper bound is available.
    """
    _check_even(M)
    return antipodal_pep_matched(k, n, quad_order)
