# cli/main.py
"""
horizonlab command line.

Subcommands:
    derive-laws        print the conserved horizon quantity H_l
    evolve             evolve one mode and write the run directory
    analyze            run one check on an existing run directory
    verify-positivity  sample the bulk quadratic form of a multiplier
    convergence        refinement study with observed orders
    run                full pipeline (derive, evolve, analyze, manifest)

Exit codes: 0 success, 1 failed check or stage, 2 usage or config error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from core.config import init_config, configure_logging

# ============================================================================
# INITIALIZE CONFIGURATION
# ============================================================================
# HORIZONLAB_* settings are read when pipeline.config is imported
init_config()

from core import __version__  # noqa: E402
from core.errors import ConfigError, HorizonLabError, StageError, UsageError  # noqa: E402
from currents import MULTIPLIER_BUILDERS, build_multiplier, positivity_scan  # noqa: E402
from geometry import BlackHoleBackground  # noqa: E402
from horizon_calculus import derive_conservation_law, format_law_table  # noqa: E402
from mode_evolution import convergence_study, evolve, load_run, write_run, write_series  # noqa: E402
from pipeline import CHECK_REGISTRY, parse_config, run_pipeline, settings  # noqa: E402
from pipeline.nodes import write_outcome  # noqa: E402
from pipeline.utils import run_check  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# ============================================================================
# HELPERS
# ============================================================================

def _read_config(path: Path):
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def _parse_params(pairs: list[str] | None) -> dict:
    """KEY=VALUE pairs; values are decoded as JSON when possible."""
    params = {}
    for pair in pairs or []:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"Invalid parameter: {pair}. Must be KEY=VALUE")
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def cmd_derive_laws(args: argparse.Namespace) -> int:
    if args.l < 0:
        raise UsageError(f"l must be non-negative, got {args.l}")
    law = derive_conservation_law(args.l)
    if args.json:
        print(json.dumps(law.to_dict(args.mass), indent=2))
    else:
        print(format_law_table(law, args.mass))
    return EXIT_OK


def cmd_evolve(args: argparse.Namespace) -> int:
    config = _read_config(args.config)
    out = Path(args.out or config.output_dir)
    bg = config.background.build()
    grid = config.grid.build(bg)
    result = evolve(bg, config.initial_data, config.evolution, grid=grid, l=config.l)
    files = write_run(result, out)
    print(f"{result.n_steps} steps, {len(result.snapshots)} snapshots, {len(files)} files in {out}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    result = load_run(args.run)
    outcome = run_check(args.check, result, _parse_params(args.param))
    write_outcome(outcome, Path(args.out or args.run))
    print(json.dumps(outcome.verdict(), indent=2, sort_keys=True))
    return EXIT_OK if outcome.passed else EXIT_FAILED


def cmd_verify_positivity(args: argparse.Namespace) -> int:
    bg = BlackHoleBackground.from_ratio(args.mass, args.charge_ratio)
    V = build_multiplier(bg, args.multiplier, **_parse_params(args.param))
    report = positivity_scan(
        bg,
        V,
        (args.rmin, args.rmax),
        samples=args.samples,
        l=args.l,
        chart=args.chart,
        commuted=args.commuted,
        tol=args.tol,
    )
    print(report.verdict())
    if args.csv is not None:
        lo, hi = report.eigenvalues
        write_series(args.csv, {"r": report.radii, "eig_min": lo, "eig_max": hi})
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_convergence(args: argparse.Namespace) -> int:
    config = _read_config(args.config)
    bg = config.background.build()
    report = convergence_study(
        bg,
        config.initial_data,
        config.evolution,
        grid=config.grid.build(bg),
        l=config.l,
        refinements=args.refinements,
        max_workers=max(1, settings.threads),
    )
    for line in report.summary_lines():
        print(line)

    low = {
        name: d.min_order
        for name, d in report.diagnostics.items()
        if d.min_order == d.min_order and d.min_order < args.min_order
    }
    if low:
        for name, order in low.items():
            print(f"FAIL {name}: observed order {order:.3f} < {args.min_order}")
        return EXIT_FAILED
    print(f"PASS all observed orders >= {args.min_order}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = _read_config(args.config)
    manifest = run_pipeline(config, output_dir=args.out)
    for verdict in manifest.verdicts:
        status = "PASS" if verdict["pass"] else "FAIL"
        print(f"{status} {verdict['check']}: measured={verdict['measured']}")
    print(f"{len(manifest.files)} files written")
    if manifest.errors:
        first = manifest.errors[0]
        raise StageError(first["stage"], first["message"])
    return EXIT_OK if manifest.passed else EXIT_FAILED


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horizonlab",
        description="Wave-equation experiments on extreme Reissner-Nordstrom exteriors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default=None,
        help="DEBUG, INFO, WARNING or ERROR (default: HORIZONLAB_LOG_LEVEL or INFO)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive-laws", help="Print the conservation law H_l")
    p.add_argument("--l", type=int, required=True, help="Angular frequency")
    p.add_argument("--mass", type=float, default=1.0, help="Mass used for decimals (default: 1)")
    p.add_argument("--json", action="store_true", help="Emit the law as JSON")
    p.set_defaults(handler=cmd_derive_laws)

    p = sub.add_parser("evolve", help="Evolve one mode and write the run directory")
    p.add_argument("--config", type=Path, required=True, help="Run config (JSON)")
    p.add_argument("--out", type=Path, default=None, help="Overrides output_dir")
    p.set_defaults(handler=cmd_evolve)

    p = sub.add_parser("analyze", help="Run one check on a run directory")
    p.add_argument("--run", type=Path, required=True, help="Run directory written by evolve")
    p.add_argument("--check", required=True, choices=sorted(CHECK_REGISTRY), help="Check name")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="Check parameter (repeatable)")
    p.add_argument("--out", type=Path, default=None, help="Directory for the verdict (default: the run)")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("verify-positivity", help="Sample the bulk quadratic form of a multiplier")
    p.add_argument("--multiplier", required=True, choices=sorted(MULTIPLIER_BUILDERS))
    p.add_argument("--rmin", type=float, required=True)
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--l", type=int, default=None, help="Mode; 0 ignores the angular term (default: all)")
    p.add_argument("--chart", choices=["v_r", "t_rstar"], default="v_r")
    p.add_argument("--commuted", action="store_true", help="Scan the commuted principal part")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--charge-ratio", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="Multiplier parameter, e.g. alpha=2")
    p.add_argument("--csv", type=Path, default=None, help="Write r, eig_min, eig_max")
    p.set_defaults(handler=cmd_verify_positivity)

    p = sub.add_parser("convergence", help="Refinement study of a run config")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--refinements", type=int, default=2)
    p.add_argument("--min-order", type=float, default=1.8)
    p.set_defaults(handler=cmd_convergence)

    p = sub.add_parser("run", help="Full pipeline with manifest")
    p.add_argument("config", type=Path, help="Run config (JSON)")
    p.add_argument("--out", type=Path, default=None, help="Overrides output_dir")
    p.set_defaults(handler=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        configure_logging(args.log_level or settings.log_level)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return args.handler(args)
    except (ConfigError, UsageError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except HorizonLabError as e:
        # domain, numerical and stability failures of a single command
        logger.error(f"❌ {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE if isinstance(e, ValueError) else EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
