"""Command-line front end.

Subcommands:
  rates        print the rate-region report for a model
  simulate     Monte Carlo at a single (n, rate) point
  sweep        full grid from a TOML or JSON config file
  decode-demo  trace one encode/combine/decode round trip

Data goes to stdout or the configured output file; progress and diagnostics
go to stderr through logging.  Exit status is nonzero when any sweep point
failed, so shell pipelines can detect partial results.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .codec import (
    DEFAULT_ENUMERATION_BUDGET,
    CosetTooLargeError,
    LinearCode,
    encode,
    min_entropy_decode,
)
from .harness import ExperimentConfig, emit, report_rate_region, run_sweep
from .modmat import ModMatrix, ModVector
from .sources import JointSourceModel

logger = logging.getLogger("modsum.cli")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modsum", description="modulo-M sum estimation experiments")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug-level logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    rates = sub.add_parser("rates", help="rate-region report for one model")
    rates.add_argument("--M", type=int, required=True)
    rates.add_argument("--theta", type=float, required=True)
    rates.add_argument("--json", action="store_true", help="emit the report as JSON")

    sim = sub.add_parser("simulate", help="Monte Carlo at one (n, rate) point")
    sim.add_argument("--M", type=int, required=True)
    sim.add_argument("--theta", type=float, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--rate", type=float, required=True, help="per-terminal rate in bits")
    sim.add_argument("--trials", type=int, default=10_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--fixed-code", action="store_true", help="one codebook for all trials")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--enumeration-budget", type=int, default=DEFAULT_ENUMERATION_BUDGET)
    sim.add_argument("--output", type=str, default=None, help="file sink; default stdout")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")

    sweep = sub.add_parser("sweep", help="grid sweep from a config file")
    sweep.add_argument("--config", type=str, required=True, help="TOML or JSON config")
    sweep.add_argument("--output", type=str, default=None, help="override the config's output_path")
    sweep.add_argument("--workers", type=int, default=None, help="override the config's workers")

    demo = sub.add_parser("decode-demo", help="trace one encode/decode round trip")
    demo.add_argument("--n", type=int, required=True)
    demo.add_argument("--k", type=int, required=True)
    demo.add_argument("--M", type=int, required=True)
    demo.add_argument("--seed", type=int, required=True, help="codebook seed")
    demo.add_argument("--z", type=str, required=True, help="sum sequence, digits or comma-separated")
    demo.add_argument("--enumeration-budget", type=int, default=DEFAULT_ENUMERATION_BUDGET)
    return parser


def _load_config(path: str) -> dict:
    text = Path(path)
    if path.endswith(".json"):
        with text.open("r", encoding="utf-8") as fp:
            raw = json.load(fp)
    else:
        try:
            import tomllib as toml  # Python >= 3.11
        except ModuleNotFoundError:  # pragma: no cover - environment-dependent
            import tomli as toml
        with text.open("rb") as fp:
            raw = toml.load(fp)
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a single table/object")
    return raw


def _parse_sequence(text: str, modulus: int) -> ModVector:
    if "," in text:
        digits = [int(part) for part in text.split(",") if part.strip() != ""]
    else:
        if modulus > 10:
            raise ValueError("for M > 10 the sequence must be comma-separated")
        digits = [int(ch) for ch in text.strip()]
    if not digits:
        raise ValueError("empty sequence")
    if any(not 0 <= d < modulus for d in digits):
        raise ValueError(f"sequence digits must lie in [0, {modulus})")
    return ModVector(np.array(digits), modulus)


def _cmd_rates(args: argparse.Namespace) -> int:
    model = JointSourceModel(M=args.M, theta=args.theta)
    report = report_rate_region(model)
    if args.json:
        json.dump(dataclasses.asdict(report), sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0
    print(f"model: M={report.M} theta={report.theta}")
    print(f"H(X|Y)            = {report.h_x_given_y:.4f} bits")
    print(f"H(Y|X)            = {report.h_y_given_x:.4f} bits")
    print(f"H(X,Y)            = {report.h_joint:.4f} bits (Slepian-Wolf sum rate)")
    print(f"scheme per-terminal R = H(Z) = {report.scheme_rate_per_terminal:.4f} bits")
    print(f"scheme sum rate   = {report.scheme_sum_rate:.4f} bits")
    print(f"sum-rate deficit  = {report.deficit:.4f} bits below Slepian-Wolf")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        M=args.M,
        theta=args.theta,
        n=args.n,
        rate_bits=args.rate,
        trials=args.trials,
        seed=args.seed,
        enumeration_budget=args.enumeration_budget,
        output_path=args.output,
        format=args.format,
        fixed_code=args.fixed_code,
        workers=args.workers,
    )
    result = run_sweep(config)
    emit(result)
    return 1 if result.failures else 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_mapping(_load_config(args.config))
    if args.output is not None:
        config = dataclasses.replace(config, output_path=args.output)
    if args.workers is not None:
        config = dataclasses.replace(config, workers=args.workers)
    result = run_sweep(config)
    emit(result)
    for failure in result.failures:
        logger.error("failed point n=%d R=%.4g: %s", failure.point.n, failure.point.rate_bits, failure.error)
    return 1 if result.failures else 0


def _cmd_decode_demo(args: argparse.Namespace) -> int:
    z = _parse_sequence(args.z, args.M)
    if len(z) != args.n:
        raise ValueError(f"sequence length {len(z)} does not match --n {args.n}")
    rng = np.random.default_rng(args.seed)
    entries = rng.integers(0, args.M, size=(args.n, args.k))
    code = LinearCode(ModMatrix(entries, args.M), n=args.n, k=args.k, modulus=args.M)
    syndrome = encode(code, z)
    outcome = min_entropy_decode(code, syndrome, enumeration_budget=args.enumeration_budget)
    print(f"code: n={args.n} k={args.k} M={args.M} seed={args.seed}")
    print(f"matrix_hex (row-major): {code.matrix.entries.astype(np.uint8).tobytes().hex()}")
    print(f"z        : {' '.join(str(v) for v in z.entries.tolist())}")
    print(f"syndrome : {' '.join(str(v) for v in syndrome.entries.tolist())}")
    print(f"decoded  : {' '.join(str(v) for v in outcome.decoded.entries.tolist())}")
    print(f"match    : {outcome.decoded == z}")
    print(f"tie      : {outcome.tie}")
    print(f"candidates_examined: {outcome.candidates_examined}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handlers = {
        "rates": _cmd_rates,
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "decode-demo": _cmd_decode_demo,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, CosetTooLargeError, OSError) as exc:
        logger.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
