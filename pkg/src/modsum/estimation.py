"""Estimators for the correlation parameter and their performance measures.

The distributed estimator looks only at the decoded modular sum: theta_hat =
(n - n(M-1 | zhat)) / (n (M-1)), where n(M-1 | zhat) counts the symbol M-1.
The centralized one counts complementary pairs x_t + y_t = M-1 directly.
Both are plug-in frequency estimators and coincide exactly whenever decoding
succeeds, because they then count the same event on the same data.

Variance is reported as an index, n times the per-trial variance, which is
the natural scale on which the scheme, the Cramer-Rao bound, and the
Han-Amari baseline can all be compared at once.  The baseline formula needs
the test-channel parameter a as a function of the rate; that mapping is not
fully standard, so we adopt the inverse-binary-entropy convention a = 1/2 - q
with h2(q) = 1 - R, which reproduces the required endpoint: at full rate
(R=1, a=1/2) the baseline collapses to theta(1-theta), the centralized index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .modmat import ModVector
from .sources import JointSourceModel, SequencePair, SequenceVec, modsum

__all__ = [
    "EstimationResult",
    "HanAmariConfig",
    "PerformanceSummary",
    "crlb",
    "estimate_centralized",
    "estimate_distributed",
    "estimate_distributed_binary",
    "han_amari_config",
    "han_amari_variance_index",
    "inverse_binary_entropy",
    "performance_summary",
    "variance_index_scheme",
]

_SOURCES = ("distributed", "centralized")


@dataclass(frozen=True)
class EstimationResult:
    theta_hat: float
    n: int
    source: str

    def __post_init__(self) -> None:
        if self.source not in _SOURCES:
            raise ValueError(f"source must be one of {_SOURCES}, got {self.source!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")


@dataclass(frozen=True)
class PerformanceSummary:
    """Sample statistics of a batch of estimates plus the matching theory."""

    mean_theta_hat: float
    empirical_variance: float
    variance_index: float
    crlb: float
    theoretical_variance_index: float
    decode_error_rate: float
    n: int
    trials: int


@dataclass(frozen=True)
class HanAmariConfig:
    """Test-channel parameters of the baseline estimator at a rate pair."""

    a: float
    b: float
    R_X: float
    R_Y: float

    def __post_init__(self) -> None:
        for name, value in (("a", self.a), ("b", self.b)):
            if not 0.0 < value <= 0.5:
                raise ValueError(f"{name} must lie in (0, 1/2], got {value}")


def estimate_distributed(zhat: SequenceVec, M: Optional[int] = None) -> EstimationResult:
    """Plug-in estimate from the decoded sum sequence.

    theta_hat = (n - n(M-1 | zhat)) / (n (M-1)).  Every symbol other than M-1
    appears with probability theta, so the complement count is a sufficient
    statistic; the value always lands in [0, 1/(M-1)].
    """
    if M is not None and M != zhat.modulus:
        raise ValueError(f"M={M} does not match the sequence modulus {zhat.modulus}")
    m = zhat.modulus
    n = len(zhat)
    if n == 0:
        raise ValueError("sequence must be nonempty")
    top = int((zhat.entries == m - 1).sum())
    return EstimationResult(theta_hat=(n - top) / (n * (m - 1)), n=n, source="distributed")


def estimate_distributed_binary(zhat: SequenceVec) -> EstimationResult:
    """Binary special case written as a zero-count: n(0 | zhat) / n."""
    if zhat.modulus != 2:
        raise ValueError("binary estimator requires modulus 2")
    n = len(zhat)
    if n == 0:
        raise ValueError("sequence must be nonempty")
    zeros = int((zhat.entries == 0).sum())
    return EstimationResult(theta_hat=zeros / n, n=n, source="distributed")


def estimate_centralized(pair: SequencePair) -> EstimationResult:
    """Estimate with both sources in hand: count complements x_t + y_t = M-1.

    Counts the same integer as estimate_distributed(modsum(pair)) and divides
    by the same denominator, so the two agree bit for bit when decoding is
    error-free.
    """
    m = pair.x.modulus
    n = len(pair)
    hits = int(((pair.x.entries + pair.y.entries) % m == m - 1).sum())
    return EstimationResult(theta_hat=(n - hits) / (n * (m - 1)), n=n, source="centralized")


def crlb(model: JointSourceModel, n: int) -> float:
    """Cramer-Rao lower bound for theta at sample size n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    m, theta = model.M, model.theta
    return theta * (1.0 - theta * (m - 1)) / ((m - 1) * n)


def variance_index_scheme(model: JointSourceModel) -> float:
    """Asymptotic n * variance of the scheme's estimator; equals n * CRLB."""
    m, theta = model.M, model.theta
    return theta * (1.0 - theta * (m - 1)) / (m - 1)


def inverse_binary_entropy(bits: float) -> float:
    """The q in [0, 1/2] with h2(q) = bits, by bisection to 1e-12."""
    if not 0.0 <= bits <= 1.0:
        raise ValueError(f"binary entropy values lie in [0, 1], got {bits}")
    if bits == 0.0:
        return 0.0
    if bits == 1.0:
        return 0.5

    def h2(q: float) -> float:
        return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)

    lo, hi = 0.0, 0.5
    for _ in range(100):
        mid = (lo + hi) / 2.0
        if h2(mid) < bits:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return (lo + hi) / 2.0


def han_amari_config(R_X: float, R_Y: float) -> HanAmariConfig:
    """Rate-to-test-channel mapping: a = 1/2 - q where h2(q) = 1 - R."""
    for name, rate in (("R_X", R_X), ("R_Y", R_Y)):
        if not 0.0 < rate <= 1.0:
            raise ValueError(f"{name} must lie in (0, 1] bits, got {rate}")
    a = 0.5 - inverse_binary_entropy(1.0 - R_X)
    b = 0.5 - inverse_binary_entropy(1.0 - R_Y)
    return HanAmariConfig(a=a, b=b, R_X=R_X, R_Y=R_Y)


def han_amari_variance_index(theta: float, R_X: float, R_Y: float, M: int = 2) -> float:
    """Baseline variance index at a rate pair, for M = 2 or 4.

    M=2: (1/(16 a^2 b^2)) { 1/4 - (theta - 1/2)^2 [1 - (1-4a^2)(1-4b^2)] }
    M=4 routes through binary test channels with 2*theta in the deviation
    term and a 1/(64 a^2 b^2) front factor.
    """
    if M not in (2, 4):
        raise ValueError(f"baseline formula is available for M in {{2, 4}}, got M={M}")
    if not 0.0 < theta < 1.0 / (M - 1):
        raise ValueError(f"theta must lie in (0, {1.0 / (M - 1):.6g}) for M={M}")
    cfg = han_amari_config(R_X, R_Y)
    a2, b2 = cfg.a**2, cfg.b**2
    bracket = 1.0 - (1.0 - 4.0 * a2) * (1.0 - 4.0 * b2)
    if M == 2:
        dev = (theta - 0.5) ** 2
        return (0.25 - dev * bracket) / (16.0 * a2 * b2)
    dev = (2.0 * theta - 0.5) ** 2
    return (0.25 - dev * bracket) / (64.0 * a2 * b2)


def performance_summary(
    results: Sequence[EstimationResult],
    model: JointSourceModel,
    decode_error_rate: float = 0.0,
) -> PerformanceSummary:
    """Aggregate a batch of estimates into sample statistics plus theory.

    Values are sorted before reduction, so the summary does not depend on the
    order trials arrive in (parallel workers may deliver out of order).
    """
    if len(results) < 2:
        raise ValueError("need at least 2 trials to estimate a variance")
    n = results[0].n
    if any(r.n != n for r in results):
        raise ValueError("all trials must share the same block length n")
    if not 0.0 <= decode_error_rate <= 1.0:
        raise ValueError("decode_error_rate must lie in [0, 1]")
    values = np.sort(np.array([r.theta_hat for r in results], dtype=np.float64))
    mean = float(values.mean())
    var = float(values.var(ddof=1))
    return PerformanceSummary(
        mean_theta_hat=mean,
        empirical_variance=var,
        variance_index=n * var,
        crlb=crlb(model, n),
        theoretical_variance_index=variance_index_scheme(model),
        decode_error_rate=decode_error_rate,
        n=n,
        trials=len(results),
    )
