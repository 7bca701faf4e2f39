"""Monte Carlo experiment driver: trials, sweeps, and rate-region reports.

One trial is the full pipeline: sample a pair, encode both sides with the
shared code, add the syndromes, decode by minimum entropy, estimate theta
from the decoded sum (and, for reference, from the raw pair).  Sweeps repeat
that over a grid of (n, rate) points and aggregate per point.

Reproducibility contract: every trial's randomness comes from a seed that is
a pure function of (master seed, trial id), records are sorted by trial id
before aggregation, and the aggregation itself is order-independent.  Worker
count therefore never changes any emitted byte.

Decode-error trials stay in the headline summaries; the error event is part
of the estimator being measured.  Success-conditioned statistics are carried
alongside for diagnostics, not in the CSV schema.
"""

from __future__ import annotations

import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping, Optional, Sequence, Union

import numpy as np

from .codec import (
    DEFAULT_ENUMERATION_BUDGET,
    CosetTooLargeError,
    LinearCode,
    combine,
    encode,
    generate_code,
    min_entropy_decode,
)
from .estimation import (
    EstimationResult,
    PerformanceSummary,
    estimate_centralized,
    estimate_distributed,
    han_amari_variance_index,
    performance_summary,
)
from .sources import (
    JointSourceModel,
    conditional_entropies,
    entropy_Z,
    modsum,
    sample_pair,
    shannon_entropy_bits,
    joint_pmf,
    sw_sum_rate,
)

__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "ExperimentPoint",
    "PointFailure",
    "PointSummary",
    "RateRegionReport",
    "SweepResult",
    "TrialRecord",
    "fixed_code_seed",
    "report_rate_region",
    "run_point",
    "run_sweep",
    "run_trial",
    "trial_seed",
    "write_csv",
    "write_json",
]

logger = logging.getLogger("modsum.harness")

CSV_COLUMNS = (
    "M",
    "theta",
    "n",
    "R_bits",
    "k",
    "trials",
    "decode_error_rate",
    "tie_rate",
    "mean_theta_hat",
    "var_index_empirical",
    "var_index_theory",
    "var_index_han_amari",
    "crlb_times_n",
    "sw_sum_rate",
    "scheme_sum_rate",
)


@dataclass(frozen=True)
class ExperimentPoint:
    """One cell of a sweep grid."""

    M: int
    theta: float
    n: int
    rate_bits: float

    def model(self) -> JointSourceModel:
        return JointSourceModel(M=self.M, theta=self.theta)


@dataclass(frozen=True)
class ExperimentConfig:
    """A sweep: scalar model, grids over n and rate, and execution knobs."""

    M: int
    theta: float
    n: Union[int, Sequence[int]]
    rate_bits: Union[float, Sequence[float]]
    trials: int = 10_000
    seed: int = 0
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    output_path: Optional[str] = None
    format: str = "csv"
    fixed_code: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        JointSourceModel(M=self.M, theta=self.theta)  # validates M and theta
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.enumeration_budget < 1:
            raise ValueError("enumeration_budget must be positive")
        if not self.ns():
            raise ValueError("need at least one block length")
        if not self.rates():
            raise ValueError("need at least one rate")
        cap = math.log2(self.M)
        for n in self.ns():
            if n < 1:
                raise ValueError(f"block lengths must be positive, got {n}")
        for r in self.rates():
            if not 0.0 < r <= cap:
                raise ValueError(f"rates must lie in (0, {cap:.6g}] bits for M={self.M}, got {r}")

    def ns(self) -> tuple[int, ...]:
        raw = self.n if isinstance(self.n, Sequence) else (self.n,)
        return tuple(int(v) for v in raw)

    def rates(self) -> tuple[float, ...]:
        raw = self.rate_bits if isinstance(self.rate_bits, Sequence) else (self.rate_bits,)
        return tuple(float(v) for v in raw)

    def points(self) -> tuple[ExperimentPoint, ...]:
        """Grid in row order: outer loop over n, inner over rate."""
        return tuple(
            ExperimentPoint(M=self.M, theta=self.theta, n=n, rate_bits=r)
            for n in self.ns()
            for r in self.rates()
        )

    @classmethod
    def from_mapping(cls, raw: Mapping[str, object]) -> "ExperimentConfig":
        allowed = {
            "M",
            "theta",
            "n",
            "rate_bits",
            "trials",
            "seed",
            "enumeration_budget",
            "output_path",
            "format",
            "fixed_code",
            "workers",
        }
        unknown = set(raw) - allowed
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        missing = {"M", "theta", "n", "rate_bits"} - set(raw)
        if missing:
            raise ValueError(f"config must define: {sorted(missing)}")
        return cls(**{k: v for k, v in raw.items()})  # type: ignore[arg-type]


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    seed: int
    decode_ok: bool
    tie: bool
    theta_hat_distributed: float
    theta_hat_centralized: float
    candidates_examined: int

    def __post_init__(self) -> None:
        if self.decode_ok and self.theta_hat_distributed != self.theta_hat_centralized:
            raise ValueError("successful decode must make the two estimates identical")


@dataclass(frozen=True)
class PointSummary:
    """Aggregate of all trials at one grid point.

    `performance` is the headline distributed summary with decode errors
    included; `centralized` is the genie reference on the same samples.  The
    ok_* fields condition on successful decoding and are None when fewer
    than two trials succeeded.
    """

    point: ExperimentPoint
    k: int
    performance: PerformanceSummary
    centralized: PerformanceSummary
    tie_rate: float
    var_index_han_amari: Optional[float]
    sw_sum_rate: float
    scheme_sum_rate: float
    ok_trials: int
    ok_mean_theta_hat: Optional[float]
    ok_variance_index: Optional[float]


@dataclass(frozen=True)
class PointFailure:
    point: ExperimentPoint
    error: str


@dataclass(frozen=True)
class RateRegionReport:
    """Where the scheme's rate pair sits relative to the Slepian-Wolf region."""

    M: int
    theta: float
    h_x_given_y: float
    h_y_given_x: float
    h_joint: float
    scheme_rate_per_terminal: float
    scheme_sum_rate: float
    sw_sum_rate: float
    deficit: float


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    summaries: tuple[PointSummary, ...]
    failures: tuple[PointFailure, ...]
    region: RateRegionReport


# ------------------------------------------------------------------ seeding


def trial_seed(master_seed: int, trial_id: int) -> int:
    """Per-trial seed, a pure function of (master seed, trial id)."""
    ss = np.random.SeedSequence((master_seed, 1, trial_id))
    return int(ss.generate_state(1, np.uint64)[0])


def fixed_code_seed(master_seed: int) -> int:
    """Seed for the shared codebook draw; domain-separated from trial seeds."""
    ss = np.random.SeedSequence((master_seed, 0, 0))
    return int(ss.generate_state(1, np.uint64)[0])


# -------------------------------------------------------------------- trials


def run_trial(
    point: ExperimentPoint,
    seed: int,
    trial_id: int = 0,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    code: Optional[LinearCode] = None,
) -> TrialRecord:
    """One end-to-end trial; deterministic given the seed.

    With code=None a fresh codebook is drawn from the trial's own stream
    before the source samples, so fixed- and fresh-code runs consume
    different randomness by design.
    """
    rng = np.random.default_rng(seed)
    model = point.model()
    if code is None:
        code = generate_code(point.n, point.rate_bits, point.M, rng=rng)
    pair = sample_pair(model, point.n, rng)
    z = modsum(pair)
    syndrome = combine(encode(code, pair.x), encode(code, pair.y))
    outcome = min_entropy_decode(code, syndrome, enumeration_budget=enumeration_budget)
    decode_ok = outcome.decoded == z
    return TrialRecord(
        trial_id=trial_id,
        seed=seed,
        decode_ok=decode_ok,
        tie=outcome.tie,
        theta_hat_distributed=estimate_distributed(outcome.decoded).theta_hat,
        theta_hat_centralized=estimate_centralized(pair).theta_hat,
        candidates_examined=outcome.candidates_examined,
    )


def _trial_task(args: tuple) -> TrialRecord:
    point, seed, trial_id, budget, code = args
    return run_trial(point, seed, trial_id=trial_id, enumeration_budget=budget, code=code)


def run_point(
    point: ExperimentPoint,
    trials: int,
    master_seed: int,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    fixed_code: bool = False,
    workers: int = 1,
) -> tuple[PointSummary, list[TrialRecord]]:
    """All trials at one grid point, aggregated.

    Raises CosetTooLargeError eagerly (before any trial) when the point's
    coset cannot fit the budget, so a sweep can skip it cheaply.
    """
    model = point.model()
    probe_code = generate_code(point.n, point.rate_bits, point.M, rng=fixed_code_seed(master_seed))
    if point.M ** (point.n - probe_code.k) > enumeration_budget:
        raise CosetTooLargeError(
            f"coset size {point.M}**{point.n - probe_code.k} exceeds budget {enumeration_budget} "
            f"at n={point.n}, R={point.rate_bits}; reduce n or increase the rate"
        )
    shared = probe_code if fixed_code else None
    tasks = [
        (point, trial_seed(master_seed, t), t, enumeration_budget, shared)
        for t in range(trials)
    ]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, trials // (workers * 4))
            records = list(pool.map(_trial_task, tasks, chunksize=chunk))
    else:
        records = [_trial_task(t) for t in tasks]
    records.sort(key=lambda r: r.trial_id)

    dist = [EstimationResult(r.theta_hat_distributed, point.n, "distributed") for r in records]
    cent = [EstimationResult(r.theta_hat_centralized, point.n, "centralized") for r in records]
    errors = sum(1 for r in records if not r.decode_ok)
    err_rate = errors / trials
    perf = performance_summary(dist, model, decode_error_rate=err_rate)
    perf_cent = performance_summary(cent, model, decode_error_rate=0.0)
    ok_values = np.sort(np.array([r.theta_hat_distributed for r in records if r.decode_ok]))
    if ok_values.size >= 2:
        ok_mean: Optional[float] = float(ok_values.mean())
        ok_index: Optional[float] = point.n * float(ok_values.var(ddof=1))
    else:
        ok_mean = ok_index = None
    if point.M in (2, 4):
        han = han_amari_variance_index(point.theta, min(point.rate_bits, 1.0), min(point.rate_bits, 1.0), point.M)
    else:
        han = None
    summary = PointSummary(
        point=point,
        k=probe_code.k,
        performance=perf,
        centralized=perf_cent,
        tie_rate=sum(1 for r in records if r.tie) / trials,
        var_index_han_amari=han,
        sw_sum_rate=sw_sum_rate(model),
        scheme_sum_rate=2.0 * entropy_Z(model),
        ok_trials=int(ok_values.size),
        ok_mean_theta_hat=ok_mean,
        ok_variance_index=ok_index,
    )
    return summary, records


def run_sweep(config: ExperimentConfig) -> SweepResult:
    """Sweep the whole grid; per-point failures are recorded, not fatal."""
    model = JointSourceModel(M=config.M, theta=config.theta)
    summaries: list[PointSummary] = []
    failures: list[PointFailure] = []
    for point in config.points():
        started = time.perf_counter()
        try:
            summary, _ = run_point(
                point,
                trials=config.trials,
                master_seed=config.seed,
                enumeration_budget=config.enumeration_budget,
                fixed_code=config.fixed_code,
                workers=config.workers,
            )
        except CosetTooLargeError as exc:
            logger.error("point n=%d R=%.4g failed: %s", point.n, point.rate_bits, exc)
            failures.append(PointFailure(point=point, error=str(exc)))
            continue
        elapsed = time.perf_counter() - started
        logger.info(
            "point n=%d R=%.4g k=%d: err=%.4f tie=%.4f index=%.5g (%.1fs)",
            point.n,
            point.rate_bits,
            summary.k,
            summary.performance.decode_error_rate,
            summary.tie_rate,
            summary.performance.variance_index,
            elapsed,
        )
        summaries.append(summary)
    return SweepResult(
        config=config,
        summaries=tuple(summaries),
        failures=tuple(failures),
        region=report_rate_region(model),
    )


def report_rate_region(model: JointSourceModel) -> RateRegionReport:
    """Scheme rate pair vs the Slepian-Wolf constraints, plus the deficit."""
    h_xy = shannon_entropy_bits(joint_pmf(model))
    h_x_given_y, h_y_given_x = conditional_entropies(model)
    hz = entropy_Z(model)
    return RateRegionReport(
        M=model.M,
        theta=model.theta,
        h_x_given_y=h_x_given_y,
        h_y_given_x=h_y_given_x,
        h_joint=h_xy,
        scheme_rate_per_terminal=hz,
        scheme_sum_rate=2.0 * hz,
        sw_sum_rate=sw_sum_rate(model),
        deficit=h_xy - 2.0 * hz,
    )


# ------------------------------------------------------------------- emission


def _summary_row(summary: PointSummary) -> dict:
    p = summary.point
    perf = summary.performance
    return {
        "M": p.M,
        "theta": p.theta,
        "n": p.n,
        "R_bits": p.rate_bits,
        "k": summary.k,
        "trials": perf.trials,
        "decode_error_rate": perf.decode_error_rate,
        "tie_rate": summary.tie_rate,
        "mean_theta_hat": perf.mean_theta_hat,
        "var_index_empirical": perf.variance_index,
        "var_index_theory": perf.theoretical_variance_index,
        "var_index_han_amari": summary.var_index_han_amari,
        "crlb_times_n": perf.crlb * p.n,
        "sw_sum_rate": summary.sw_sum_rate,
        "scheme_sum_rate": summary.scheme_sum_rate,
    }


def _render_cell(value: object) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(summaries: Sequence[PointSummary], sink: IO[str]) -> None:
    """One row per point; repr-formatted floats make output byte-stable."""
    sink.write(",".join(CSV_COLUMNS) + "\n")
    for summary in summaries:
        row = _summary_row(summary)
        sink.write(",".join(_render_cell(row[c]) for c in CSV_COLUMNS) + "\n")


def write_json(summaries: Sequence[PointSummary], sink: IO[str]) -> None:
    rows = [_summary_row(s) for s in summaries]
    json.dump(rows, sink, indent=2)
    sink.write("\n")


def emit(result: SweepResult, sink: Optional[IO[str]] = None) -> None:
    """Write the sweep's rows in the configured format to sink or the file."""
    writer = write_csv if result.config.format == "csv" else write_json
    if sink is not None:
        writer(result.summaries, sink)
        return
    if result.config.output_path is None:
        writer(result.summaries, sys.stdout)
        return
    path = Path(result.config.output_path)
    with path.open("w", encoding="utf-8", newline="") as fp:
        writer(result.summaries, fp)
