"""Estimator and baseline-curve tests.

Closed-form anchors are hand-checked count arithmetic; the Han-Amari curve
is pinned at its algebraically forced endpoint (full rate gives exactly
theta(1-theta)) and regression-pinned at one interior point.  The coupling
between the distributed and centralized estimators is asserted as exact
float equality, since both divide the same integer count by the same
denominator.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from modsum.estimation import (
    EstimationResult,
    HanAmariConfig,
    PerformanceSummary,
    crlb,
    estimate_centralized,
    estimate_distributed,
    estimate_distributed_binary,
    han_amari_config,
    han_amari_variance_index,
    inverse_binary_entropy,
    performance_summary,
    variance_index_scheme,
)
from modsum.modmat import ModVector
from modsum.sources import JointSourceModel, SequencePair, modsum, sample_pair

# interior regression pin for the adopted rate-to-test-channel convention
HA_AT_005_06 = 0.1294001854


def vec(entries, m):
    return ModVector(np.array(entries), m)


# ------------------------------------------------------------ point estimates


def test_distributed_binary_examples():
    assert estimate_distributed(vec([0, 0, 0, 0], 2)).theta_hat == 1.0
    assert estimate_distributed(vec([0, 1, 0, 1], 2)).theta_hat == 0.5
    assert estimate_distributed(vec([1, 1, 1], 2)).theta_hat == 0.0


def test_distributed_mary_example():
    # n=6, three 3s: (6 - 3) / (6 * 3) = 1/6
    res = estimate_distributed(vec([3, 3, 3, 0, 1, 2], 4))
    assert res.theta_hat == pytest.approx(1 / 6, abs=1e-15)
    assert res.n == 6
    assert res.source == "distributed"


def test_binary_form_equals_mary_form_at_m2():
    rng = np.random.default_rng(8)
    for _ in range(100):
        z = vec(rng.integers(0, 2, size=int(rng.integers(1, 40))), 2)
        assert estimate_distributed_binary(z).theta_hat == estimate_distributed(z).theta_hat


def test_distributed_range_and_validation():
    rng = np.random.default_rng(9)
    for m in (2, 3, 5):
        for _ in range(50):
            z = vec(rng.integers(0, m, size=int(rng.integers(1, 30))), m)
            assert 0.0 <= estimate_distributed(z).theta_hat <= 1.0 / (m - 1)
    with pytest.raises(ValueError):
        estimate_distributed(vec([0, 1], 2), M=4)
    with pytest.raises(ValueError):
        estimate_distributed(vec([], 2))
    with pytest.raises(ValueError):
        estimate_distributed_binary(vec([0, 1, 2], 3))


def test_centralized_examples():
    same = SequencePair(vec([1, 1, 0], 2), vec([1, 1, 0], 2))
    assert estimate_centralized(same).theta_hat == 1.0
    anti = SequencePair(vec([0, 1], 2), vec([1, 0], 2))
    assert estimate_centralized(anti).theta_hat == 0.0
    assert estimate_centralized(anti).source == "centralized"


def test_centralized_equals_distributed_on_true_sum():
    rng = np.random.default_rng(77)
    for m in (2, 3, 4, 6):
        model = JointSourceModel(M=m, theta=0.4 / (m - 1))
        for _ in range(50):
            pair = sample_pair(model, int(rng.integers(1, 50)), rng)
            a = estimate_centralized(pair).theta_hat
            b = estimate_distributed(modsum(pair)).theta_hat
            assert a == b  # exact: same integer count, same division


# -------------------------------------------------------------- bounds/indices


def test_crlb_values():
    assert crlb(JointSourceModel(M=2, theta=0.5), 100) == pytest.approx(0.0025, abs=1e-15)
    assert crlb(JointSourceModel(M=2, theta=0.05), 1) == pytest.approx(0.0475, abs=1e-15)
    assert crlb(JointSourceModel(M=4, theta=0.01), 1) == pytest.approx(0.01 * 0.97 / 3, abs=1e-15)
    with pytest.raises(ValueError):
        crlb(JointSourceModel(M=2, theta=0.5), 0)


def test_variance_index_scheme_values():
    assert variance_index_scheme(JointSourceModel(M=2, theta=0.5)) == pytest.approx(0.25, abs=1e-15)
    assert variance_index_scheme(JointSourceModel(M=2, theta=0.9)) == pytest.approx(0.09, abs=1e-15)
    assert variance_index_scheme(JointSourceModel(M=4, theta=0.01)) == pytest.approx(0.0032333333333, abs=1e-10)


def test_index_is_n_times_crlb():
    for m, theta in ((2, 0.05), (2, 0.9), (3, 0.2), (4, 0.01)):
        model = JointSourceModel(M=m, theta=theta)
        for n in (1, 7, 24, 1000):
            assert variance_index_scheme(model) == pytest.approx(n * crlb(model, n), rel=1e-14)


# ------------------------------------------------------------------- baseline


def test_inverse_binary_entropy_roundtrip():
    def h2(q):
        return -q * math.log2(q) - (1 - q) * math.log2(1 - q)

    assert inverse_binary_entropy(0.0) == 0.0
    assert inverse_binary_entropy(1.0) == 0.5
    for q in (0.01, 0.05, 0.11, 0.2, 0.3, 0.45, 0.49):
        assert inverse_binary_entropy(h2(q)) == pytest.approx(q, abs=1e-12)
    with pytest.raises(ValueError):
        inverse_binary_entropy(1.0 + 1e-9)


def test_han_amari_full_rate_identity():
    # at a = b = 1/2 the bracket factors collapse and the baseline must equal
    # the centralized index theta(1-theta) exactly (up to float arithmetic)
    for theta in np.linspace(0.02, 0.98, 25):
        lhs = han_amari_variance_index(float(theta), 1.0, 1.0, M=2)
        assert abs(lhs - theta * (1 - theta)) < 1e-12
    assert han_amari_config(1.0, 1.0).a == pytest.approx(0.5, abs=1e-12)


def test_han_amari_full_rate_m4():
    # same collapse with the doubled deviation term: theta(1 - 2 theta)/2
    for theta in (0.01, 0.05, 0.2, 0.3):
        lhs = han_amari_variance_index(theta, 1.0, 1.0, M=4)
        assert abs(lhs - theta * (1 - 2 * theta) / 2) < 1e-12


def test_han_amari_interior_pin_and_dominance():
    value = han_amari_variance_index(0.05, 0.6, 0.6, M=2)
    assert value == pytest.approx(HA_AT_005_06, abs=1e-9)
    assert value > variance_index_scheme(JointSourceModel(M=2, theta=0.05))


def test_han_amari_monotone_in_rate():
    thetas = (0.05, 0.3, 0.9)
    grid = np.linspace(0.35, 1.0, 14)
    for theta in thetas:
        values = [han_amari_variance_index(theta, float(r), float(r), M=2) for r in grid]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
        # one-sided monotonicity too: vary R_X alone
        values_x = [han_amari_variance_index(theta, float(r), 0.8, M=2) for r in grid]
        assert all(a >= b - 1e-12 for a, b in zip(values_x, values_x[1:]))


def test_han_amari_validation():
    with pytest.raises(ValueError):
        han_amari_variance_index(0.05, 0.0, 0.5, M=2)
    with pytest.raises(ValueError):
        han_amari_variance_index(0.05, 1.2, 0.5, M=2)
    with pytest.raises(ValueError):
        han_amari_variance_index(0.05, 0.5, 0.5, M=3)
    with pytest.raises(ValueError):
        han_amari_variance_index(0.4, 0.5, 0.5, M=4)  # theta beyond 1/3
    with pytest.raises(ValueError):
        HanAmariConfig(a=0.6, b=0.5, R_X=1.0, R_Y=1.0)


# ------------------------------------------------------------------ summaries


def test_summary_of_identical_trials():
    results = [EstimationResult(0.3, 10, "centralized") for _ in range(5)]
    model = JointSourceModel(M=2, theta=0.3)
    summary = performance_summary(results, model)
    assert summary.empirical_variance == 0.0
    assert summary.variance_index == 0.0
    assert summary.mean_theta_hat == pytest.approx(0.3, abs=1e-15)
    assert summary.trials == 5


def test_summary_centralized_monte_carlo():
    model = JointSourceModel(M=2, theta=0.3)
    rng = np.random.default_rng(5150)
    n, trials = 200, 10_000
    results = [estimate_centralized(sample_pair(model, n, rng)) for _ in range(trials)]
    summary = performance_summary(results, model)
    sigma_mean = math.sqrt(0.3 * 0.7 / n / trials)
    assert abs(summary.mean_theta_hat - 0.3) < 3 * sigma_mean
    assert summary.variance_index == pytest.approx(0.21, rel=0.10)
    assert summary.theoretical_variance_index == pytest.approx(0.21, abs=1e-15)
    assert summary.crlb == pytest.approx(0.21 / n, abs=1e-15)


def test_summary_is_order_independent():
    rng = np.random.default_rng(31)
    results = [EstimationResult(float(v), 16, "distributed") for v in rng.random(101)]
    model = JointSourceModel(M=2, theta=0.4)
    base = performance_summary(results, model, decode_error_rate=0.25)
    for seed in range(3):
        shuffled = list(results)
        np.random.default_rng(seed).shuffle(shuffled)
        again = performance_summary(shuffled, model, decode_error_rate=0.25)
        assert again == base  # dataclass equality: every field identical


def test_summary_validation():
    model = JointSourceModel(M=2, theta=0.4)
    with pytest.raises(ValueError):
        performance_summary([EstimationResult(0.1, 5, "distributed")], model)
    mixed = [EstimationResult(0.1, 5, "distributed"), EstimationResult(0.1, 6, "distributed")]
    with pytest.raises(ValueError):
        performance_summary(mixed, model)
    pair = [EstimationResult(0.1, 5, "distributed"), EstimationResult(0.2, 5, "distributed")]
    with pytest.raises(ValueError):
        performance_summary(pair, model, decode_error_rate=1.5)
    with pytest.raises(ValueError):
        EstimationResult(0.5, 3, "oracle")
