import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvecomm.bounds import euclidean_ser_bounds, offset_pep_euclidean
from curvecomm.channel import DecoderKind
from curvecomm.errors import InvalidPairError, InvalidParameterError
from curvecomm.geometry import Constellation, build_uniform_codebook, pair_geometry
from curvecomm.montecarlo import (
    CHUNK_SIZE,
    PepEstimate,
    compare_ser,
    derive_seed,
    estimate_pairwise_pep,
    estimate_ser,
    pairwise_error_counts,
    wilson_interval,
)
from curvecomm.pairwise import (
    NoiseParams,
    antipodal_pep_euclidean,
    antipodal_pep_matched,
    euclidean_pep,
    matched_phantom_pep,
    q_function,
)

TRIALS = 50_000


@given(st.integers(1, 10_000), st.data())
def test_wilson_contains_point_estimate(trials, data):
    errors = data.draw(st.integers(0, trials))
    lo, hi = wilson_interval(errors, trials)
    assert 0.0 <= lo <= errors / trials <= hi <= 1.0


def test_wilson_known_value():
    # textbook example: 1 success in 10 trials
    lo, hi = wilson_interval(1, 10)
    assert lo == pytest.approx(0.017875, abs=1e-5)
    assert hi == pytest.approx(0.404149, abs=1e-5)
    with pytest.raises(InvalidParameterError):
        wilson_interval(0, 0)


def test_wilson_coverage_smoke():
    p = q_function(1.0)
    rng = np.random.default_rng(123)
    covered = 0
    for _ in range(100):
        hits = int(rng.binomial(2000, p))
        lo, hi = wilson_interval(hits, 2000)
        covered += lo <= p <= hi
    assert covered >= 90


def test_estimate_invariants():
    c = build_uniform_codebook(3, 6)
    est = estimate_pairwise_pep(c, 0, 3, DecoderKind.MATCHED, NoiseParams(0.3, 0.5), 1000, seed=4)
    assert isinstance(est, PepEstimate)
    assert est.ci_low <= est.value <= est.ci_high
    assert est.trials == 1000 and est.seed == 4 and est.decoder is DecoderKind.MATCHED
    with pytest.raises(InvalidPairError):
        estimate_pairwise_pep(c, 2, 2, DecoderKind.MATCHED, NoiseParams(0.3, 0.5), 10, seed=1)
    with pytest.raises(InvalidParameterError):
        estimate_ser(c, DecoderKind.MATCHED, NoiseParams(0.3, 0.5), 0, seed=1)
    with pytest.raises(InvalidParameterError):
        estimate_ser(c, DecoderKind.MATCHED, NoiseParams(0.3, 0.5), 10, seed=-1)


def test_seed_reproducibility_and_worker_independence():
    c = build_uniform_codebook(5, 8)
    n = NoiseParams(0.5, 0.4)
    trials = 3 * CHUNK_SIZE + 17
    ref = pairwise_error_counts(c, 1, 5, n, trials, seed=99, workers=1)
    for workers in (2, 4, 16):
        assert pairwise_error_counts(c, 1, 5, n, trials, seed=99, workers=workers) == ref
    a = estimate_ser(c, DecoderKind.EUCLIDEAN, n, trials, seed=5, workers=1)
    b = estimate_ser(c, DecoderKind.EUCLIDEAN, n, trials, seed=5, workers=7)
    assert a == b
    assert pairwise_error_counts(c, 1, 5, n, trials, seed=100) != ref


def test_derive_seed_is_deterministic():
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)
    assert derive_seed(7, 1, 2) != derive_seed(7, 2, 1)
    assert 0 <= derive_seed(7, 3) < 2**63


def test_beta_zero_common_random_numbers():
    c = build_uniform_codebook(20, 12)
    n = NoiseParams(0.0, 0.3)
    counts = pairwise_error_counts(c, 0, 6, n, 20_000, seed=1)
    assert counts[DecoderKind.MATCHED] == counts[DecoderKind.EUCLIDEAN]
    m = estimate_pairwise_pep(c, 0, 6, DecoderKind.MATCHED, n, 20_000, seed=1)
    e = estimate_pairwise_pep(c, 0, 6, DecoderKind.EUCLIDEAN, n, 20_000, seed=1)
    assert m.errors == e.errors
    cmp = compare_ser(c, n, 10_000, seed=2)
    assert cmp.matched.errors == cmp.euclidean.errors and cmp.gap_se == 0.0


@pytest.mark.parametrize("k, M, q, beta, sigma", [(20, 12, 1, 0.5, 0.3), (4, 10, 3, 0.7, 0.4), (2, 6, 2, 0.3, 0.5)])
def test_euclidean_pep_oracle_general_pair(k, M, q, beta, sigma):
    c = build_uniform_codebook(k, M)
    n = NoiseParams(beta, sigma)
    g = pair_geometry(c, 0, q)
    assert not g.phantom
    est = estimate_pairwise_pep(c, 0, q, DecoderKind.EUCLIDEAN, n, TRIALS, seed=q)
    assert est.contains(euclidean_pep(g, n), z=3.0)
    assert euclidean_pep(g, n) == pytest.approx(offset_pep_euclidean(k, M, q, n), rel=1e-9)


@pytest.mark.parametrize("k, beta, sigma", [(20, 0.5, 0.3), (3, 0.8, 0.4), (8, 0.2, 0.5)])
def test_antipodal_oracles(k, beta, sigma):
    c = build_uniform_codebook(k, 2)
    n = NoiseParams(beta, sigma)
    counts = pairwise_error_counts(c, 0, 1, n, TRIALS, seed=k)
    ml = PepEstimate.from_counts(counts[DecoderKind.MATCHED], TRIALS, k, DecoderKind.MATCHED)
    eu = PepEstimate.from_counts(counts[DecoderKind.EUCLIDEAN], TRIALS, k, DecoderKind.EUCLIDEAN)
    assert eu.contains(antipodal_pep_euclidean(k, n), z=3.0)
    assert ml.contains(antipodal_pep_matched(k, n), z=3.0)


@pytest.mark.parametrize("phases, k, beta, sigma", [([0.3, 0.3 + math.pi], 5, 0.6, 0.35), ([0.0, math.pi], 12, 0.4, 0.25), ([1.0, 1.0 + math.pi], 2, 0.9, 0.5)])
def test_matched_phantom_oracle_nonuniform(phases, k, beta, sigma):
    c = Constellation.from_phases(phases, k)
    n = NoiseParams(beta, sigma)
    g = pair_geometry(c, 1, 0)
    assert g.phantom
    est = estimate_pairwise_pep(c, 1, 0, DecoderKind.MATCHED, n, TRIALS, seed=k)
    assert est.contains(matched_phantom_pep(g.delta, g.gamma, n), z=3.0)


def test_ser_random_guessing_limit():
    c = build_uniform_codebook(4, 6)
    n = NoiseParams(0.3, 100.0)
    for decoder in DecoderKind:
        est = estimate_ser(c, decoder, n, 20_000, seed=3)
        assert est.contains(5 / 6, z=3.0)


@pytest.mark.parametrize("k, M, beta, sigma", [(20, 12, 0.3, 0.3), (3, 8, 0.6, 0.25), (10, 4, 0.8, 0.4), (5, 16, 0.1, 0.15)])
def test_ser_sandwich(k, M, beta, sigma):
    c = build_uniform_codebook(k, M)
    n = NoiseParams(beta, sigma)
    b = euclidean_ser_bounds(k, M, n)
    cmp = compare_ser(c, n, 20_000, seed=M)
    lo, hi = cmp.euclidean.interval(3.0)
    assert hi >= b.lower and lo <= b.upper_raw
    assert cmp.matched.interval(3.0)[1] >= b.matched_lower
