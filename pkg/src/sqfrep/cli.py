"""Command-line interface.

Subcommands: sieve, count, verify, bounds, optimize, pipeline.
Exit codes: 0 everything verified/passed, 1 exceptions or failed checks,
2 configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Optional

from . import bounds as bounds_mod
from . import oracles
from .bounds import CThetaTable, CThetaTableError
from .pipeline import (
    CheckpointError,
    KClass,
    RunConfig,
    WORKERS_ENV_VAR,
    analytic_verdict,
    resume,
    verify_range,
)
from .sieve import SEGMENT_CAPACITY, mobius_in, primes_in, squarefree_bitmap
from .witness import Strategy

FULL_RANGE_N_HI = 4_810_000_000


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqfrep",
        description="Verify representations n = p + s (p prime, s square-free "
        "co-prime to k) and the analytic bounds behind them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sieve = sub.add_parser("sieve", help="sieve a window and report counts")
    p_sieve.add_argument("--lo", type=int, required=True)
    p_sieve.add_argument("--hi", type=int, required=True)
    p_sieve.add_argument("--mobius", action="store_true", help="include Mertens partial sum")
    p_sieve.add_argument("--format", choices=("json", "csv"), default="json")

    p_count = sub.add_parser("count", help="evaluate T/R (optionally T_q/R_q) at n")
    p_count.add_argument("--n", type=int, required=True)
    p_count.add_argument("--q", type=int, default=None)
    p_count.add_argument("--witnesses", action="store_true")
    p_count.add_argument("--format", choices=("json", "csv"), default="json")

    p_verify = sub.add_parser("verify", help="run the witness chain over a range")
    _add_run_flags(p_verify)
    p_verify.add_argument("--resume", action="store_true",
                          help="continue from the checkpoint instead of starting fresh")

    p_bounds = sub.add_parser("bounds", help="reproduce the analytic constants")
    p_bounds.add_argument("--ctheta", default=None, help="c_theta table CSV path")
    p_bounds.add_argument("--strict-rounding", action="store_true")
    p_bounds.add_argument("--format", choices=("json", "csv"), default="json")

    p_opt = sub.add_parser("optimize", help="search the split parameter A")
    p_opt.add_argument("--n", type=float, default=None)
    p_opt.add_argument("--log-n", type=float, default=None)
    p_opt.add_argument("--c", type=int, default=bounds_mod.DEFAULT_CUTOFF)
    p_opt.add_argument("--z", type=int, default=bounds_mod.DEFAULT_Z)
    p_opt.add_argument("--s-c", type=float, default=bounds_mod.DEFAULT_S_C)
    p_opt.add_argument("--tol", type=float, default=1e-6)

    p_pipe = sub.add_parser("pipeline", help="full assembly: range + analytic verdict")
    _add_run_flags(p_pipe)
    p_pipe.add_argument("--strict-rounding", action="store_true")
    p_pipe.add_argument("--full-range", action="store_true",
                        help=f"verify all the way to {FULL_RANGE_N_HI} (multi-hour)")

    return parser


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-lo", type=int, default=36)
    p.add_argument("--n-hi", type=int, default=10**7)
    p.add_argument("--k-class", choices=[k.value for k in KClass], default=KClass.ALL_K.value)
    p.add_argument("--k-values", type=str, default=None,
                   help="comma-separated explicit moduli to certify per n")
    p.add_argument("--strategies", type=str, default=None,
                   help="comma-separated strategy override")
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (default ${WORKERS_ENV_VAR} or 1)")
    p.add_argument("--segment-len", type=int, default=1 << 15)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--ctheta", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _config_from_args(args, n_hi_override: Optional[int] = None) -> RunConfig:
    kwargs = dict(
        n_lo=args.n_lo,
        n_hi=n_hi_override or args.n_hi,
        k_class=KClass(args.k_class),
        segment_len=args.segment_len,
        checkpoint_path=args.checkpoint,
        ctheta_path=args.ctheta,
        report_format=args.format,
    )
    if args.workers is not None:
        kwargs["workers"] = args.workers
    if args.k_values:
        kwargs["k_values"] = tuple(int(k) for k in args.k_values.split(","))
    if args.strategies:
        kwargs["strategies"] = tuple(Strategy(s.strip()) for s in args.strategies.split(","))
    return RunConfig(**kwargs)


def _emit(payload, fmt: str) -> None:
    if fmt == "csv":
        if hasattr(payload, "to_csv"):
            print(payload.to_csv(), end="")
        else:
            print("key,value")
            for key, value in payload.items():
                print(f"{key},{json.dumps(value) if isinstance(value, (dict, list)) else value}")
    else:
        if hasattr(payload, "to_json"):
            print(payload.to_json())
        else:
            print(json.dumps(payload, indent=2, sort_keys=True, default=str))


def _cmd_sieve(args) -> int:
    if args.hi - args.lo > SEGMENT_CAPACITY:
        print(f"error: window wider than segment capacity {SEGMENT_CAPACITY}", file=sys.stderr)
        return 2
    primes = primes_in(args.lo, args.hi)
    sqfree = squarefree_bitmap(args.lo, args.hi)
    payload = {
        "lo": args.lo,
        "hi": args.hi,
        "prime_count": len(primes),
        "squarefree_count": int(sqfree.sum()),
    }
    if args.hi - args.lo <= 64:
        payload["primes"] = primes
    if args.mobius:
        payload["mertens_partial"] = int(mobius_in(args.lo, args.hi).sum())
    _emit(payload, args.format)
    return 0


def _cmd_count(args) -> int:
    report = oracles.count_report(args.n, args.q, with_witnesses=args.witnesses)
    payload = {
        "n": report.n,
        "q": report.modulus,
        "T": report.T_value,
        "R": report.R_value,
    }
    if args.witnesses:
        payload["witness_primes"] = list(report.witnesses or ())
    _emit(payload, args.format)
    return 0


def _cmd_verify(args) -> int:
    if args.resume:
        if not args.checkpoint:
            print("error: --resume requires --checkpoint", file=sys.stderr)
            return 2
        report = resume(args.checkpoint)
    else:
        cfg = _config_from_args(args)
        report = verify_range(cfg)
    print(report.render(args.format), end="" if args.format == "csv" else "\n")
    return 0 if not report.exceptions else 1


def _cmd_bounds(args) -> int:
    table = None
    if args.ctheta:
        table = CThetaTable.from_csv(args.ctheta)
    report = bounds_mod.bounds_report(table=table, strict=args.strict_rounding)
    _emit(report, args.format)
    return 0 if report["all_passed"] else 1


def _cmd_optimize(args) -> int:
    if args.n is None and args.log_n is None:
        print("error: provide --n or --log-n", file=sys.stderr)
        return 2
    best = bounds_mod.optimize_A(
        n=args.n, c=args.c, Z=args.z, S_c=args.s_c, tol=args.tol, log_n=args.log_n
    )
    log_n = args.log_n if args.log_n is not None else math.log(args.n)
    params = bounds_mod.BoundParams(c=args.c, A=best, Z=args.z, S_c=args.s_c)
    _emit({"A": best, "objective": bounds_mod.rn_error_budget(log_n=log_n, params=params)},
          "json")
    return 0


def _cmd_pipeline(args) -> int:
    n_hi = FULL_RANGE_N_HI if args.full_range else args.n_hi
    cfg = _config_from_args(args, n_hi_override=n_hi)
    if args.full_range:
        sample_cfg = RunConfig(n_lo=10**6, n_hi=10**6 + 10**4, k_class=cfg.k_class,
                               workers=1, segment_len=cfg.segment_len)
        t0 = time.perf_counter()
        verify_range(sample_cfg)
        per_n = (time.perf_counter() - t0) / 10**4
        est_h = per_n * (n_hi - cfg.n_lo) / max(cfg.workers, 1) / 3600
        print(f"warning: full range to {n_hi} estimated at {est_h:.1f} h "
              f"with {cfg.workers} worker(s)", file=sys.stderr)
    range_report = verify_range(cfg)
    verdict = analytic_verdict(cfg, strict=args.strict_rounding)
    payload = {
        "range": range_report.to_dict(),
        "analytic": verdict.to_dict(),
    }
    _emit(payload, args.format)
    ok = not range_report.exceptions and not verdict.exceptions
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sieve": _cmd_sieve,
        "count": _cmd_count,
        "verify": _cmd_verify,
        "bounds": _cmd_bounds,
        "optimize": _cmd_optimize,
        "pipeline": _cmd_pipeline,
    }
    try:
        return handlers[args.command](args)
    except (CheckpointError, CThetaTableError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
