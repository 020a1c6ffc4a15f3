"""
Command line front end. Every subcommand reads an optional scenario file, applies
`--set key=value` overrides and the run flags, and prints or writes a table.

Exit codes: 0 on success, 1 when `validate` finds a disagreement, 2 for bad input
(config errors, unknown figures, invalid parameters) and 3 when a closed-form term
or the intersection analysis fails.
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np
import pandas as pd

from swiptrelay import __version__
from swiptrelay.analysis import (
    Engine,
    diversity_slope,
    energy_efficiency,
    optimal_beta,
    optimal_snr_ee,
    sweep,
    write_csv,
)
from swiptrelay.analytic import diversity_gain, system_outage, t2t_outage
from swiptrelay.config import ENGINES, ScenarioConfig
from swiptrelay.error import AnalysisError, ConfigError, DomainError, EvaluationError
from swiptrelay.figures import figure_ids, run_figure
from swiptrelay.montecarlo import estimate_outage_tdbc, estimate_t2t, relative_error
from swiptrelay.system import Link

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"

VALIDATE_K = (0.0, 0.05, 0.1, 0.15)
VALIDATE_RHO = (1e2, 1e3, 1e4, 1e5, 1e6)
VALIDATE_BETA = (0.3, 0.5, 0.8)
VALIDATE_SHAPES = ((1, 1, 1), (2, 2, 1), (1, 3, 2), (3, 2, 3))
COMPONENT_POINTS = (
    (0.0, 1e3, (1, 3, 2)),
    (0.0, 1e4, (3, 1, 1)),
    (0.0, 1e5, (2, 3, 1)),
    (0.0, 1e6, (1, 2, 3)),
    (0.0, 3e4, (4, 2, 1)),
    (0.0, 3e5, (2, 1, 2)),
    (0.05, 1e3, (2, 1, 1)),
    (0.05, 3e3, (1, 4, 1)),
    (0.05, 1e4, (3, 2, 2)),
    (0.05, 1e5, (1, 3, 1)),
    (0.05, 3e5, (3, 4, 1)),
    (0.05, 1e6, (2, 3, 3)),
    (0.05, 3e4, (4, 1, 2)),
    (0.1, 1e3, (3, 1, 2)),
    (0.1, 3e3, (1, 2, 1)),
    (0.1, 1e4, (2, 3, 1)),
    (0.1, 3e4, (3, 2, 1)),
    (0.1, 1e5, (1, 4, 3)),
    (0.1, 3e5, (4, 3, 1)),
    (0.1, 1e6, (2, 1, 2)),
)


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="scenario file with key = value lines")
    parent.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one scenario key, may be repeated",
    )
    parent.add_argument("--seed", type=int, help="root seed of the Monte Carlo engine")
    parent.add_argument("--mc-n", type=int, help="number of Monte Carlo draws")
    parent.add_argument("--quadrature-n", type=int, help="Gauss-Chebyshev order")
    parent.add_argument("--engine", choices=ENGINES, help="which engine evaluates outage")
    parent.add_argument("--workers", type=int, help="number of threads")
    parent.add_argument("--out", help="write the result as CSV to this path")
    parent.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common_flags()
    parser = argparse.ArgumentParser(
        prog="swiptrelay",
        description="Outage analysis of a power splitting SWIPT two-way relay with hardware impairments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("outage", parents=[parent], help="outage probability of one scenario")

    sweep_parser = subparsers.add_parser("sweep", parents=[parent], help="sweep one parameter")
    sweep_parser.add_argument("--axis", help="rho, beta, k_ave, gamma_th, d_ar or R_th")
    sweep_parser.add_argument("--grid", help="comma list, linspace(a, b, n) or logspace(a, b, n)")

    figure_parser = subparsers.add_parser("figure", parents=[parent], help="build a figure preset")
    figure_parser.add_argument("figure_id", help=", ".join(figure_ids()))

    beta_parser = subparsers.add_parser(
        "optimize-beta", parents=[parent], help="optimal power splitting ratio"
    )
    beta_parser.add_argument("--resolution", type=int, default=32)

    diversity_parser = subparsers.add_parser(
        "diversity", parents=[parent], help="predicted and fitted diversity order"
    )
    diversity_parser.add_argument(
        "--window", type=float, nargs=2, metavar=("LO", "HI"), help="linear SNR window"
    )
    diversity_parser.add_argument("--points", type=int, default=8)

    ee_parser = subparsers.add_parser("ee", parents=[parent], help="energy efficiency")
    ee_parser.add_argument(
        "--optimize", action="store_true", help="also search the SNR maximising it"
    )

    subparsers.add_parser(
        "validate", parents=[parent], help="compare the closed form with simulation"
    )
    return parser


def load_config(args: argparse.Namespace) -> ScenarioConfig:
    config = ScenarioConfig.read(args.config) if args.config else ScenarioConfig()
    if args.set:
        config = config.update(args.set, source="--set")
    return config.override(
        seed=args.seed,
        mc_n=args.mc_n,
        quadrature_N=args.quadrature_n,
        engine=args.engine,
        workers=args.workers,
        out=args.out,
    )


def _emit(df: pd.DataFrame, config: ScenarioConfig) -> None:
    if config["out"]:
        write_csv(df, config["out"])
        logger.info("wrote %d rows to %s", len(df), config["out"])
    else:
        write_csv(df, sys.stdout)


def _print_record(record: dict) -> None:
    width = max(len(k) for k in record)
    for key, value in record.items():
        print(f"{key:<{width}}  {value}")


def run_outage(config: ScenarioConfig) -> int:
    p = config.params()
    engine = Engine(config["engine"])
    record = {}
    expected = None
    if engine.analytic:
        result = system_outage(p)
        expected = result.p_out
        record.update(
            p1=result.p1,
            p2=result.p2,
            p3=result.p3,
            p4=result.p4,
            p_out=result.p_out,
            regime=result.regime.value,
            p4_case=result.p4_case.value,
            gamma_th=result.gamma_th,
        )
    if engine.mc:
        mc = estimate_outage_tdbc(
            p, config["mc_n"], config["seed"], workers=config["workers"], expected=expected
        )
        record.update(p_out_mc=mc.p_hat, mc_stderr=mc.stderr, mc_n=mc.n_samples)
        if engine.analytic and mc.p_hat > 0:
            record["delta"] = relative_error(expected, mc)
    _print_record(record)
    if config["out"]:
        write_csv(pd.DataFrame([record]), config["out"])
    return 0


def run_sweep(config: ScenarioConfig, axis: Optional[str], grid: Optional[str]) -> int:
    if axis is not None or grid is not None:
        lines = [f"axis = {axis}"] if axis is not None else []
        lines += [f"grid = {grid}"] if grid is not None else []
        config = config.update(lines, source="command line")
    if config["grid"] is None:
        raise ConfigError("no sweep grid given, set 'grid' or pass --grid", source=config.source)
    table = sweep(
        config.params(),
        config["axis"],
        config["grid"],
        engine=config["engine"],
        mc_n=config["mc_n"],
        seed=config["seed"],
        workers=config["workers"],
        geometry=config.geometry(),
    )
    _emit(table.to_dataframe(), config)
    for row in table.failed:
        print(f"error at {row.axis_name}={row.axis_value!r}: {row.error}", file=sys.stderr)
    return 3 if table.failed else 0


def run_optimize_beta(config: ScenarioConfig, resolution: int) -> int:
    best = optimal_beta(config.params(), resolution)
    record = {"beta_opt": best.beta_opt, "p_out_min": best.p_out_min, "degenerate": best.degenerate}
    _print_record(record)
    if config["out"]:
        write_csv(pd.DataFrame({"beta": best.grid, "p_out": best.values}), config["out"])
    return 0


def run_diversity(config: ScenarioConfig, window, points: int) -> int:
    p = config.params()
    fit = diversity_slope(p, tuple(window) if window else None, points)
    _print_record(
        {
            "diversity_gain": diversity_gain(p),
            "diversity_slope": fit.slope,
            "full_outage": fit.full_outage,
        }
    )
    if config["out"]:
        write_csv(pd.DataFrame({"rho": fit.rho, "p_out": fit.p_out}), config["out"])
    return 0


def run_ee(config: ScenarioConfig, optimize: bool) -> int:
    p = config.params()
    record = {"rho": p.rho, "ee": energy_efficiency(p)}
    if optimize:
        best = optimal_snr_ee(p)
        record.update(rho_opt=best.rho_opt, ee_max=best.ee_max)
    _print_record(record)
    if config["out"]:
        write_csv(pd.DataFrame([record]), config["out"])
    return 0


def _tolerance(stderr: float, p_hat: float) -> float:
    return max(3.0 * stderr, 0.01 * p_hat, 1e-4)


def validation_table(config: ScenarioConfig) -> pd.DataFrame:
    """
    Compares the closed form with simulation over a grid of scenarios, first for the
    system outage probability and then term by term on a few asymmetric scenarios.
    """
    base = config.params()
    n, seed, workers = config["mc_n"], config["seed"], config["workers"]
    records = []
    for k in VALIDATE_K:
        for rho in VALIDATE_RHO:
            for beta in VALIDATE_BETA:
                for shapes in VALIDATE_SHAPES:
                    p = base.with_impairment(k).with_shapes(*shapes).replace(rho=rho, beta=beta)
                    result = system_outage(p)
                    mc = estimate_outage_tdbc(p, n, seed, workers=workers, expected=result.p_out)
                    records.append(
                        {
                            "check": "system",
                            "k_ave": k,
                            "rho": rho,
                            "beta": beta,
                            "shapes": "-".join(map(str, shapes)),
                            "regime": result.regime.value,
                            "p4_case": result.p4_case.value,
                            "analytic": result.p_out,
                            "mc": mc.p_hat,
                            "stderr": mc.stderr,
                        }
                    )
    for k, rho, shapes in COMPONENT_POINTS:
        p = base.with_impairment(k).with_shapes(*shapes).replace(rho=rho, R_th=0.5)
        for link in Link:
            analytic = t2t_outage(p, link)
            mc = estimate_t2t(p, link, n, seed, workers=workers, expected=analytic)
            records.append(
                {
                    "check": link.value,
                    "k_ave": k,
                    "rho": rho,
                    "beta": p.beta,
                    "shapes": "-".join(map(str, shapes)),
                    "analytic": analytic,
                    "mc": mc.p_hat,
                    "stderr": mc.stderr,
                }
            )
    df = pd.DataFrame.from_records(records)
    tolerance = np.array([_tolerance(s, m) for s, m in zip(df["stderr"], df["mc"])])
    df["passed"] = np.abs(df["analytic"] - df["mc"]) <= tolerance
    return df


def run_validate(config: ScenarioConfig) -> int:
    df = validation_table(config)
    summary = df.groupby("check")["passed"].agg(["count", "sum"]).rename(
        columns={"count": "points", "sum": "passed"}
    )
    print(summary.to_string())
    system = df[df["check"] == "system"]
    print(system["p4_case"].value_counts().to_string())
    failures = df[~df["passed"]]
    if len(failures):
        print(failures.to_string(index=False), file=sys.stderr)
    if config["out"]:
        write_csv(df, config["out"])
    return 1 if len(failures) else 0


def _dispatch(args: argparse.Namespace) -> int:
    config = load_config(args)
    if args.command == "outage":
        return run_outage(config)
    if args.command == "sweep":
        return run_sweep(config, args.axis, args.grid)
    if args.command == "figure":
        _emit(run_figure(args.figure_id, config), config)
        return 0
    if args.command == "optimize-beta":
        return run_optimize_beta(config, args.resolution)
    if args.command == "diversity":
        return run_diversity(config, args.window, args.points)
    if args.command == "ee":
        return run_ee(config, args.optimize)
    return run_validate(config)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    try:
        return _dispatch(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EvaluationError as exc:
        print(f"evaluation failed in {exc.component}: {exc}", file=sys.stderr)
        return 3
    except AnalysisError as exc:
        print(f"intersection analysis failed: {exc}", file=sys.stderr)
        return 3
