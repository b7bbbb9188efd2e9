"""Batch verification runner.

Samples domain points, executes named suites and emits a deterministic
JSON or CSV report.  Exit codes: 0 all suites pass, 1 at least one suite
failed or errored, 2 usage error.

Seed resolution: --seed flag, else the LCKLAB_SEED environment variable,
else 0.  Two runs with the same configuration produce byte-identical
reports; wall time goes to stderr only.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .report import RunConfig, to_csv, to_json
from .suites import SUITES, UsageError, run_config

__all__ = ["main", "list_suites"]


def list_suites(stream=None) -> None:
    """Print the suite catalogue: name, anchor, default tolerance."""
    stream = stream or sys.stdout
    defaults = RunConfig(model="hopf")
    width = max(len(s.name) for s in SUITES)
    awidth = max(len(s.anchor) for s in SUITES)
    for s in SUITES:
        tol = s.tolerance(defaults)
        direction = "max <=" if s.direction == "le" else "min >="
        models = ",".join(sorted(s.models))
        print(f"{s.name:<{width}}  {s.anchor:<{awidth}}  {direction} "
              f"{format(tol, '.17g'):<22}  [{models}]", file=stream)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lcklab",
        description="Pointwise verification suites for indefinite locally "
                    "conformal Kahler model geometries.")
    p.add_argument("--model", choices=["hopf", "flat", "tricerri", "synthetic-null"],
                   help="model geometry the suites sample from")
    p.add_argument("--n", type=int, default=2, help="complex dimension (default 2)")
    p.add_argument("--s", type=int, default=1, help="index parameter (default 1)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5,
                   help="deck scaling factor in (0, 1) (default 0.5)")
    p.add_argument("--points", type=int, default=100,
                   help="sample points per suite (default 100)")
    p.add_argument("--tol-analytic", type=float, default=1e-9,
                   help="tolerance for analytic identities (default 1e-9)")
    p.add_argument("--tol-fd", type=float, default=1e-6,
                   help="tolerance for finite-difference paths (default 1e-6)")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (fallback: LCKLAB_SEED, then 0)")
    p.add_argument("--suites", default="all",
                   help="comma-separated suite names or 'all' (default)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads over sample points (default 1)")
    p.add_argument("--out", default=None, help="write the report to this path")
    p.add_argument("--format", dest="fmt", choices=["json", "csv"],
                   default="json", help="report format (default json)")
    p.add_argument("--list-suites", action="store_true",
                   help="print the suite catalogue and exit")
    return p


def _resolve_seed(arg_seed) -> int:
    if arg_seed is not None:
        return int(arg_seed)
    env = os.environ.get("LCKLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"LCKLAB_SEED must be an integer, got {env!r}") from exc
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.list_suites:
        list_suites()
        return 0
    if args.model is None:
        parser.error("--model is required unless --list-suites is given")
    try:
        seed = _resolve_seed(args.seed)
        names = tuple(x.strip() for x in args.suites.split(",") if x.strip())
        if not names:
            raise UsageError("empty suite selection")
        cfg = RunConfig(model=args.model, n=args.n, s=args.s, lam=args.lam,
                        points=args.points, tol_analytic=args.tol_analytic,
                        tol_fd=args.tol_fd, seed=seed, suites=names,
                        threads=args.threads)
        start = time.perf_counter()
        report = run_config(cfg)
        elapsed = time.perf_counter() - start
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
        return 2
    payload = to_json(report) if args.fmt == "json" else to_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    print(f"lcklab: {len(report.results)} suites in {elapsed:.2f}s "
          f"({'pass' if report.passed else 'FAIL'})", file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
