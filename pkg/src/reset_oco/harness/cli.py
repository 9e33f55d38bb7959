"""Command line entry point: ``reset-oco run | decompose | constants``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from reset_oco.domain import ContractError
from reset_oco.harness.config import ALGORITHMS, ENVIRONMENTS, ConfigError, build_config, parse_float_list, parse_int_list, parse_seeds
from reset_oco.segtree import CONSTANTS, fundamental_decomposition, sqrt_size_sum

EXIT_OK, EXIT_CONFIG, EXIT_BOUND = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reset-oco", description="RESET meta-algorithm experiments")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded experiments and write CSV/JSON/PNG outputs")
    run.add_argument("--config", type=Path)
    run.add_argument("--T", type=int)
    run.add_argument("--algo", choices=ALGORITHMS)
    run.add_argument("--env", choices=ENVIRONMENTS)
    run.add_argument("--segments", help="comma-separated segment lengths")
    seeds = run.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int)
    seeds.add_argument("--seeds", help="range k..m or comma list")
    run.add_argument("--n", type=int, help="number of experts")
    run.add_argument("--gap", type=float)
    run.add_argument("--dim", type=int)
    run.add_argument("--drifts", help="comma-separated drift rate per segment")
    run.add_argument("--radius", type=float)
    run.add_argument("--scale", type=float)
    run.add_argument("--assert-bounds", action="store_true", default=None)
    run.add_argument("--no-figures", dest="figures", action="store_false", default=None)
    run.add_argument("--out-dir")

    dec = sub.add_parser("decompose", help="fundamental decomposition of a segment")
    dec.add_argument("--T", type=int, required=True)
    dec.add_argument("--from", dest="q", type=int, required=True)
    dec.add_argument("--to", dest="s", type=int, required=True)

    sub.add_parser("constants", help="print the bound constants")
    return p


def cmd_run(args) -> int:
    try:
        config = build_config(
            args.config,
            T=args.T,
            algo=args.algo,
            env=args.env,
            segments=parse_int_list(args.segments) if args.segments else None,
            seeds=(args.seed,) if args.seed is not None else (parse_seeds(args.seeds) if args.seeds else None),
            n=args.n,
            gap=args.gap,
            dim=args.dim,
            drifts=parse_float_list(args.drifts) if args.drifts else None,
            radius=args.radius,
            scale=args.scale,
            assert_bounds=args.assert_bounds,
            figures=args.figures,
            out_dir=args.out_dir,
        )
        from reset_oco.harness.runner import run_experiment

        reports = run_experiment(config)
    except (ConfigError, ContractError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    for r in reports:
        print(f"seed={r.seed} T={r.T} switching_regret={r.regrets['switching_true_seg']:.6g} "
              f"envelope={r.envelopes['switching']:.6g}")
    violations = [v for r in reports for v in r.violations]
    if config.assert_bounds and violations:
        record = {"status": "bound_violation", "violations": violations}
        Path(config.out_dir, "violations.json").write_text(json.dumps(record, indent=2) + "\n")
        print(json.dumps(record), file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def cmd_decompose(args) -> int:
    try:
        verts = fundamental_decomposition(args.q, args.s, args.T)
    except ContractError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    for v in verts:
        print(f"height={v.height} segment=[{v.left},{v.right}]")
    length = args.s - args.q + 1
    lhs, rhs = sqrt_size_sum(verts), CONSTANTS.c * math.sqrt(length)
    print(f"heights={[v.height for v in verts]}")
    print(f"sum_sqrt_sizes={lhs:.15g} c_sqrt_length={rhs:.15g} holds={lhs <= rhs + 1e-12}")
    return EXIT_OK


def cmd_constants(args) -> int:
    for name, value in CONSTANTS._asdict().items():
        print(f"{name} = {value:.15g}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return {"run": cmd_run, "decompose": cmd_decompose, "constants": cmd_constants}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
