"""Command-line interface.

Subcommands: forward, reconstruct, table1, table2, oracle-check.  Every
command writes a CSV (deterministic bytes for fixed flags and seed) and,
unless --no-figures is given, a PNG next to it.  Exit codes: 0 success,
1 numerical failure, 2 bad flags.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments, figures
from .cases import ManufacturedCase
from .exceptions import SolverError
from .grids import default_grading
from .inverse import NoiseModel, add_noise, reconstruct


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=0.5, help="fractional order in (0,1)")
    parser.add_argument("--N", type=int, default=100, help="spatial subintervals")
    parser.add_argument("--M", type=int, default=100, help="time levels")
    parser.add_argument(
        "--r",
        type=float,
        default=None,
        help="time-mesh grading exponent; default: (2-alpha)/alpha for single runs, "
        "1 (uniform) for the table commands",
    )
    parser.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="regularisation parameter (default 1e-10, or 1e-6 when delta > 0)")
    parser.add_argument("--delta", type=float, default=0.0, help="relative noise level")
    parser.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED,
                        help="noise seed (SplitMix64)")
    parser.add_argument("--l", type=float, default=1.0, help="domain length")
    parser.add_argument("--T", type=float, default=1.0, help="final time")
    parser.add_argument("--out", type=Path, default=None, help="output CSV path")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file with flag defaults (flags on the command line win)")


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _parse_grids(text: str) -> tuple[tuple[int, int], ...]:
    return tuple((int(part), int(part)) for part in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracback",
        description="Forward and backward solvers for the time-fractional "
        "pseudo-parabolic model, with benchmark experiment tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_forward = sub.add_parser("forward", help="run the forward solver, dump the trajectory")
    p_forward.add_argument("--zero-data", action="store_true",
                           help="zero initial state and source instead of the benchmark case")
    p_rec = sub.add_parser("reconstruct", help="recover the initial state from terminal data")
    p_t1 = sub.add_parser("table1", help="noise-free error sweep over (alpha, grid)")
    p_t1.add_argument("--alphas", type=_parse_floats,
                      default=experiments.TABLE1_ALPHAS, help="comma-separated alpha list")
    p_t1.add_argument("--grids", type=_parse_grids,
                      default=experiments.TABLE1_GRIDS, help="comma-separated N(=M) list")
    p_t2 = sub.add_parser("table2", help="noisy-measurement sweep at a fixed grid")
    p_t2.add_argument("--alphas", type=_parse_floats,
                      default=experiments.TABLE1_ALPHAS, help="comma-separated alpha list")
    p_t2.add_argument("--deltas", type=_parse_floats,
                      default=experiments.TABLE2_DELTAS, help="comma-separated noise levels")
    p_oracle = sub.add_parser("oracle-check", help="sine-mode oracle diagnostics")
    p_oracle.add_argument("--K", type=int, default=20, help="number of modes")
    p_oracle.add_argument("--fine-M", type=int, default=10_000, help="auxiliary time levels")

    for p in (p_forward, p_rec, p_t1, p_t2, p_oracle):
        _add_common(p)
    return parser


def _flag_given(argv: list[str], key: str) -> bool:
    for name in {f"--{key}", f"--{key.replace('_', '-')}"}:
        if any(token == name or token.startswith(name + "=") for token in argv):
            return True
    return False


def _coerce_config_value(attr: str, value):
    if attr in ("alphas", "deltas") and isinstance(value, list):
        return tuple(float(v) for v in value)
    if attr == "grids" and isinstance(value, list):
        return tuple((int(v), int(v)) for v in value)
    if attr in ("out", "config") and value is not None:
        return Path(value)
    return value


def _apply_config_file(argv: list[str], parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Use a JSON object as flag defaults; flags on the command line win."""
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    try:
        with open(args.config, encoding="utf-8") as handle:
            overrides = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file: {exc}")
    if not isinstance(overrides, dict):
        parser.error("config file must hold a JSON object mirroring the flags")
    for key, value in overrides.items():
        attr = key.replace("-", "_")
        if attr == "lambda":
            attr = "lam"
        if not hasattr(args, attr):
            parser.error(f"unknown config key: {key}")
        if _flag_given(argv, key) or _flag_given(argv, "lambda" if attr == "lam" else attr):
            continue
        setattr(args, attr, _coerce_config_value(attr, value))
    return args


def _resolve(args) -> tuple[float, float]:
    """Fill the r and lambda defaults that depend on other flags."""
    if args.lam is not None:
        lam = args.lam
    elif args.command == "table2" or args.delta > 0:
        lam = 1e-6
    else:
        lam = 1e-10
    if args.command in ("table1", "table2"):
        r = args.r if args.r is not None else 1.0
    else:
        r = args.r if args.r is not None else default_grading(args.alpha)
    return r, lam


def _figure_path(out: Path) -> Path:
    return out.with_suffix(".png")


def _cmd_forward(args) -> int:
    r, _ = _resolve(args)
    x, t, states = experiments.run_forward_trajectory(
        args.alpha, args.N, args.M, r=r, l=args.l, T=args.T, zero_data=args.zero_data
    )
    out = args.out or Path("forward.csv")
    experiments.write_trajectory_csv(out, x, t, states)
    if not args.no_figures:
        figures.render_trajectory(x, t, states, _figure_path(out))
    print(f"wrote {out}")
    return 0


def _cmd_reconstruct(args) -> int:
    r, lam = _resolve(args)
    case = ManufacturedCase(alpha=args.alpha, l=args.l, T=args.T)
    config = case.config(args.N, args.M, r=r)
    interior = config.grid.interior
    psi = case.terminal(interior)
    if args.delta > 0:
        psi = add_noise(psi, NoiseModel(delta=args.delta, seed=args.seed))
    result = reconstruct(psi, config, lam, reference_u0=case.initial(interior))

    out = args.out or Path("reconstruction.csv")
    experiments.write_reconstruction_csv(
        out, interior, case.initial(interior), result.u0_hat, psi, result.psi_refit
    )
    if not args.no_figures:
        figures.render_reconstruction(
            interior, case.initial(interior), result.u0_hat, psi, result.psi_refit,
            _figure_path(out),
        )
    print(f"wrote {out}")
    print(
        f"E_u0_inf={experiments.format_value(result.e_u0_inf)} "
        f"E_u0_l2h={experiments.format_value(result.e_u0_l2h)} "
        f"E_psi_inf={experiments.format_value(result.e_psi_inf)} "
        f"E_psi_l2h={experiments.format_value(result.e_psi_l2h)}"
    )
    return 0


def _cmd_table1(args) -> int:
    r, lam = _resolve(args)
    reports = experiments.run_table1(args.alphas, args.grids, lam=lam, r=r, l=args.l, T=args.T)
    out = args.out or Path("table1.csv")
    experiments.write_error_table_csv(out, reports, with_noise=False)
    if not args.no_figures:
        figures.render_error_table(reports, _figure_path(out), by="N")
    print(f"wrote {out}")
    return 0


def _cmd_table2(args) -> int:
    r, lam = _resolve(args)
    reports = experiments.run_table2(
        args.alphas, args.deltas, N=args.N, M=args.M, lam=lam, seed=args.seed,
        r=r, l=args.l, T=args.T,
    )
    out = args.out or Path("table2.csv")
    experiments.write_error_table_csv(out, reports, with_noise=True)
    if not args.no_figures:
        figures.render_error_table(reports, _figure_path(out), by="delta")
    print(f"wrote {out}")
    return 0


def _cmd_oracle(args) -> int:
    r, lam = _resolve(args)
    reports = experiments.run_oracle_check(
        args.alpha, K=args.K, fine_M=args.fine_M, N=args.N, M=args.M, r=r, lam=lam,
        l=args.l, T=args.T,
    )
    out = args.out or Path("oracle.csv")
    experiments.write_oracle_csv(out, reports)
    if not args.no_figures:
        figures.render_oracle(reports, _figure_path(out))
    print(f"wrote {out}")
    return 0


_COMMANDS = {
    "forward": _cmd_forward,
    "reconstruct": _cmd_reconstruct,
    "table1": _cmd_table1,
    "table2": _cmd_table2,
    "oracle-check": _cmd_oracle,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    args = _apply_config_file(list(sys.argv[1:] if argv is None else argv), parser)
    try:
        _validate(args, parser)
        return _COMMANDS[args.command](args)
    except (SolverError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"bad parameters: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 1


def _validate(args, parser) -> None:
    if not 0.0 < args.alpha < 1.0:
        parser.error(f"--alpha must lie strictly in (0, 1), got {args.alpha}")
    if args.N < 2:
        parser.error(f"--N must be at least 2, got {args.N}")
    if args.M < 1:
        parser.error(f"--M must be at least 1, got {args.M}")
    if args.r is not None and args.r < 1:
        parser.error(f"--r must be at least 1, got {args.r}")
    if args.delta < 0:
        parser.error(f"--delta must be nonnegative, got {args.delta}")
    if args.lam is not None and args.lam <= 0:
        parser.error(f"--lambda must be positive, got {args.lam}")
    if args.l <= 0 or args.T <= 0:
        parser.error("--l and --T must be positive")
    if getattr(args, "K", 1) < 1:
        parser.error(f"--K must be at least 1, got {args.K}")
    if getattr(args, "fine_M", 1) < 1:
        parser.error(f"--fine-M must be at least 1, got {args.fine_M}")


if __name__ == "__main__":
    sys.exit(main())
