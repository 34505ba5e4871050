"""Fourier-curve constellations and their deterministic geometry.

The curve is ``x(theta) = k**-0.5 * (cos t, sin t, cos 2t, sin 2t, ..., cos kt, sin kt)``
in ``R^(2k)``. It has unit norm and constant speed ``v_k``, so every quantity
used by the detectors (chords, tangent alignments, tangent correlations) has
a closed form. Closed forms are the production path; the direct sums live in
the test-suite as oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidPairError, InvalidParameterError

TWO_PI = 2.0 * math.pi
DEFAULT_PHANTOM_TOL = 1e-9


def _check_order(k: int) -> int:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise InvalidParameterError(f"harmonic order k must be an integer >= 1, got {k!r}")
    return int(k)


def speed_squared(k: int) -> float:
    """Squared speed ``(k+1)(2k+1)/6`` of the curve (independent of theta)."""
    k = _check_order(k)
    return (k + 1) * (2 * k + 1) / 6.0


def speed(k: int) -> float:
    return math.sqrt(speed_squared(k))


def curve_point(theta: float, k: int) -> np.ndarray:
    """Point of the order-``k`` Fourier curve at angle ``theta``."""
    k = _check_order(k)
    m = np.arange(1, k + 1) * theta
    out = np.empty(2 * k)
    out[0::2] = np.cos(m)
    out[1::2] = np.sin(m)
    return out / math.sqrt(k)


def curve_derivative(theta: float, k: int) -> np.ndarray:
    k = _check_order(k)
    harm = np.arange(1, k + 1)
    m = harm * theta
    out = np.empty(2 * k)
    out[0::2] = -harm * np.sin(m)
    out[1::2] = harm * np.cos(m)
    return out / math.sqrt(k)


def curve_tangent_unit(theta: float, k: int) -> np.ndarray:
    """Unit tangent ``x'(theta) / v_k``."""
    return curve_derivative(theta, k) / speed(k)


@dataclass(frozen=True)
class PairGeometry:
    """Chord and tangent quantities for an ordered pair ``(i -> j)``.

    ``cos_alpha`` is measured against the tangent at the transmit endpoint ``i``.
    """

    delta: float
    cos_alpha: float
    gamma: float
    phantom: bool


@dataclass(frozen=True)
class AntipodalGeometry:
    delta_k: float
    gamma_k: float
    v_k: float
    rho_k: float


@dataclass(frozen=True, eq=False)
class Constellation:
    """Finite codebook on the order-``k`` Fourier curve.

    Points and unit tangents are precomputed once; the arrays are marked
    read-only so an instance can be shared between workers.

    Use :meth:`from_phases` or :func:`build_uniform_codebook` rather than the
    raw constructor.
    """

    k: int
    phases: np.ndarray
    points: np.ndarray
    tangents: np.ndarray

    @classmethod
    def from_phases(cls, phases: Sequence[float], k: int) -> "Constellation":
        k = _check_order(k)
        ph = np.asarray(phases, dtype=float).ravel()
        if ph.size < 2:
            raise InvalidParameterError("a codebook needs at least two phases")
        if not np.all(np.isfinite(ph)) or ph.min() < 0.0 or ph.max() >= TWO_PI:
            raise InvalidParameterError("phases must lie in [0, 2*pi)")
        if np.any(np.diff(ph) <= 0.0):
            raise InvalidParameterError("phases must be strictly increasing")
        points = np.stack([curve_point(t, k) for t in ph])
        tangents = np.stack([curve_tangent_unit(t, k) for t in ph])
        for arr in (ph, points, tangents):
            arr.setflags(write=False)
        return cls(k=k, phases=ph, points=points, tangents=tangents)

    @property
    def M(self) -> int:
        return int(self.phases.size)

    @property
    def dim(self) -> int:
        return 2 * self.k

    def to_record(self) -> str:
        """Single-line ``key=value`` record for reproducibility logs."""
        phases = ",".join(repr(float(p)) for p in self.phases)
        return f"k={self.k};M={self.M};phases={phases}"

    @classmethod
    def from_record(cls, record: str) -> "Constellation":
        fields = dict(part.split("=", 1) for part in record.strip().split(";"))
        try:
            k = int(fields["k"])
            m = int(fields["M"])
            phases = [float(p) for p in fields["phases"].split(",")]
        except (KeyError, ValueError) as exc:
            raise InvalidParameterError(f"malformed constellation record: {record!r}") from exc
        if len(phases) != m:
            raise InvalidParameterError("record M does not match the number of phases")
        return cls.from_phases(phases, k)


def build_uniform_codebook(k: int, M: int) -> Constellation:
    """Uniform codebook with phases ``2*pi*m/M``, ``m = 0..M-1``."""
    if isinstance(M, bool) or int(M) != M or M < 2:
        raise InvalidParameterError(f"codebook size M must be an integer >= 2, got {M!r}")
    M = int(M)
    return Constellation.from_phases(TWO_PI * np.arange(M) / M, k)


def pair_geometry(
    c: Constellation, i: int, j: int, tol: float = DEFAULT_PHANTOM_TOL
) -> PairGeometry:
    """Chord length, transmit-side alignment, tangent correlation and phantom flag."""
    if not (0 <= i < c.M and 0 <= j < c.M):
        raise InvalidPairError(f"indices ({i}, {j}) out of range for M={c.M}")
    if i == j:
        raise InvalidPairError("pair_geometry needs i != j")
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    d = c.points[i] - c.points[j]
    delta = float(np.linalg.norm(d))
    proj_i = float(d @ c.tangents[i])
    proj_j = float(d @ c.tangents[j])
    gamma = float(np.clip(c.tangents[i] @ c.tangents[j], -1.0, 1.0))
    cos_alpha = min(abs(proj_i) / delta, 1.0)
    phantom = abs(proj_i) <= tol and abs(proj_j) <= tol
    return PairGeometry(delta=delta, cos_alpha=cos_alpha, gamma=gamma, phantom=phantom)


def antipodal_geometry(k: int) -> AntipodalGeometry:
    """Closed-form geometry of the pair ``(theta, theta + pi)``."""
    k = _check_order(k)
    half = math.ceil(k / 2)
    delta_k = 2.0 * math.sqrt(half / k)
    gamma_k = 3.0 * (-1) ** k / (2 * k + 1)
    v_k = speed(k)
    return AntipodalGeometry(delta_k=delta_k, gamma_k=gamma_k, v_k=v_k, rho_k=math.pi * v_k / delta_k)


def _check_offset(M: int, q: int) -> None:
    if isinstance(M, bool) or int(M) != M or M < 2:
        raise InvalidParameterError(f"M must be an integer >= 2, got {M!r}")
    if isinstance(q, bool) or int(q) != q or not 1 <= q <= M - 1:
        raise InvalidParameterError(f"offset q must satisfy 1 <= q <= M-1, got {q!r}")


def offset_spectrum(k: int, M: int, q: int) -> tuple[float, float]:
    """Chord length and transmit-side alignment for index offset ``q``.

    Uses the finite cosine-sum and weighted sine-sum identities, so the cost
    is independent of ``k``.

    Returns
    -------
    (delta, cos_alpha)
    """
    k = _check_order(k)
    _check_offset(M, q)
    step = TWO_PI * q / M
    s_half = math.sin(step / 2.0)
    cos_sum = math.sin(k * step / 2.0) * math.cos((k + 1) * step / 2.0) / s_half
    delta = math.sqrt(max(2.0 - 2.0 * cos_sum / k, 0.0))
    msin_sum = ((k + 1) * math.sin(k * step) - k * math.sin((k + 1) * step)) / (4.0 * s_half**2)
    cos_alpha = abs(msin_sum) / (k * speed(k) * delta)
    return delta, min(cos_alpha, 1.0)


def local_spacing_approx(k: int, M: int, q: int) -> float:
    """Third-order small-offset expansion of the offset chord length."""
    k = _check_order(k)
    _check_offset(M, q)
    step = TWO_PI * q / M
    v = speed(k)
    return v * step - v * (3 * k * k + 3 * k - 1) / 120.0 * step**3
