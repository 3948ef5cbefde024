"""Command line: bounds, design, simulate, report, generate.

Exit codes: 0 success, 2 input/validation error, 3 numerical or convergence failure.
"""

import argparse
import logging
import re
import sys
from pathlib import Path
from typing import List, Optional

from rctdesign import __version__
from rctdesign.config.loader import apply_overrides, load_design_config, load_synthetic_spec
from rctdesign.design.allocation import default_allocation
from rctdesign.errors import DatasetError, NumericalError
from rctdesign.optimizer.solver import maximize_worst_case
from rctdesign.regions.region import build_regions
from rctdesign.reporting import io
from rctdesign.reporting.manifest import utc_now, write_manifest
from rctdesign.reporting.svg import allocations_svg, index_html, losses_svg, stratum_svg
from rctdesign.simulation.benchmark import benchmark, pilot_naive_plan
from rctdesign.simulation.generator import generate_observational
from rctdesign.utils.logger import get_logger, set_level

logger = get_logger("cli")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _config(args):
    config = load_design_config(args.config)
    return apply_overrides(config, seed=args.seed, gamma=args.gamma, threads=args.threads)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _inputs(*paths) -> List[str]:
    return [str(p) for p in paths if p is not None]


def cmd_bounds(args) -> int:
    """Confidence regions and rectangle dump for every stratum."""
    started = utc_now()
    config = _config(args)
    dataset = io.read_dataset(args.data, args.weights)
    out = _out_dir(args)

    builds = build_regions(dataset, config)
    io.write_regions_json(builds, config, out / "regions.json")
    io.write_rectangles_csv(builds, out / "rectangles.csv")
    logger.info(f"Wrote {len(builds)} regions and {sum(len(b.rectangles) for b in builds)} rectangles to {out}")

    write_manifest(out, "bounds", config.model_dump(mode="json"), config.seed,
                   _inputs(args.data, args.weights, args.config), ["regions.json", "rectangles.csv"], started)
    return EXIT_OK


def cmd_design(args) -> int:
    """Regret-minimizing allocation plus the naive and default plans."""
    started = utc_now()
    config = _config(args)
    dataset = io.read_dataset(args.data, args.weights)
    out = _out_dir(args)

    default = default_allocation(config, dataset)
    builds = build_regions(dataset, config)
    regions = [b.region for b in builds]
    report = maximize_worst_case(regions, dataset.weights, config, default)
    naive = pilot_naive_plan(dataset, config.n_r)

    io.write_allocation_csv(report.allocation, out / "allocation.csv")
    io.write_plans_csv(
        {"RegretMin": report.allocation, "Naive": naive, f"Default({config.default_rule.value})": default},
        out / "plans.csv",
    )
    payload = report.to_dict()
    payload["naive"] = naive.to_dict()
    payload["config"] = config.model_dump(mode="json")
    io.write_json(payload, out / "solve_report.json")
    logger.info(
        f"Worst-case regret {report.worst_case_regret:.6g} (continuous), "
        f"{report.worst_case_regret_integer:.6g} (integer, slack {report.rounding_slack:.3g})"
    )

    write_manifest(out, "design", config.model_dump(mode="json"), config.seed,
                   _inputs(args.data, args.weights, args.config),
                   ["allocation.csv", "plans.csv", "solve_report.json"], started)
    # outputs stay on disk, flagged converged=false
    report.raise_if_not_converged()
    return EXIT_OK


def cmd_simulate(args) -> int:
    """Benchmark Equal, Weighted, Naive and RegretMin on a synthetic spec."""
    started = utc_now()
    config = _config(args)
    spec = load_synthetic_spec(args.spec)
    out = _out_dir(args)

    grid = [args.gamma] if args.gamma is not None else spec.gamma_grid
    result = benchmark(spec, config, grid)
    io.write_benchmark_csv(result.to_frame(), out / "benchmark.csv")
    io.write_plans_csv(result.plans, out / "plans.csv")

    write_manifest(out, "simulate", config.model_dump(mode="json"), config.seed,
                   _inputs(args.spec, args.config), ["benchmark.csv", "plans.csv"], started)
    return EXIT_OK


def _safe_name(stratum_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", stratum_id)


def cmd_report(args) -> int:
    """SVG plots from the outputs of bounds, design and simulate."""
    started = utc_now()
    doc = io.read_regions_json(args.regions)
    rectangles = io.read_rectangles_csv(args.rectangles)
    out = _out_dir(args)

    files = []
    for record in doc.regions:
        region = record.to_region()
        rects = rectangles.get(record.stratum)
        if rects is None or len(rects) == 0:
            logger.warning(f"No rectangles for stratum {record.stratum}; drawing the region only")
        name = f"stratum_{_safe_name(record.stratum)}.svg"
        (out / name).write_text(stratum_svg(region, rects), encoding="utf-8")
        files.append(name)

    if args.benchmark:
        (out / "losses.svg").write_text(losses_svg(io.read_benchmark_csv(args.benchmark)), encoding="utf-8")
        files.append("losses.svg")
    if args.plans:
        (out / "allocations.svg").write_text(allocations_svg(io.read_plans_csv(args.plans)), encoding="utf-8")
        files.append("allocations.svg")

    (out / "index.html").write_text(index_html(files), encoding="utf-8")
    write_manifest(out, "report", {}, doc.seed,
                   _inputs(args.regions, args.rectangles, args.benchmark, args.plans), files + ["index.html"], started)
    return EXIT_OK


def cmd_generate(args) -> int:
    """Observational dataset and stratum weights drawn from a synthetic spec."""
    started = utc_now()
    spec = load_synthetic_spec(args.spec)
    if args.seed is not None:
        spec = spec.model_copy(update={"seed": args.seed})
    out = _out_dir(args)

    dataset = generate_observational(spec)
    io.write_dataset(dataset, out / "observations.csv")
    io.write_weights(dataset, out / "strata.csv")

    write_manifest(out, "generate", spec.model_dump(mode="json"), spec.seed,
                   _inputs(args.spec), ["observations.csv", "strata.csv"], started)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rctdesign",
        description="Design stratified experiments from confounded pilot data",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="Design config JSON (defaults apply when omitted)")
    common.add_argument("--out", type=str, required=True, help="Output directory")
    common.add_argument("--seed", type=int, help="Seed (overrides config)")
    common.add_argument("--gamma", type=float, help="Sensitivity parameter Gamma (overrides config)")
    common.add_argument("--threads", type=int, help="Worker threads for per-stratum work")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="Confidence regions for stratum variances")
    p.add_argument("--data", type=str, required=True, help="Dataset CSV: stratum,treated,outcome,propensity")
    p.add_argument("--weights", type=str, help="Stratum weights CSV: stratum,weight")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("design", parents=[common], help="Regret-minimizing allocation")
    p.add_argument("--data", type=str, required=True, help="Dataset CSV: stratum,treated,outcome,propensity")
    p.add_argument("--weights", type=str, help="Stratum weights CSV: stratum,weight")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", parents=[common], help="Benchmark designs on a synthetic spec")
    p.add_argument("--spec", type=str, required=True, help="Synthetic spec JSON")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", parents=[common], help="SVG plots from earlier outputs")
    p.add_argument("--regions", type=str, required=True, help="regions.json from bounds")
    p.add_argument("--rectangles", type=str, required=True, help="rectangles.csv from bounds")
    p.add_argument("--benchmark", type=str, help="benchmark.csv from simulate")
    p.add_argument("--plans", type=str, help="plans.csv from design or simulate")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("generate", parents=[common], help="Draw an observational dataset from a synthetic spec")
    p.add_argument("--spec", type=str, required=True, help="Synthetic spec JSON")
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        set_level(logging.DEBUG)

    try:
        return args.func(args)
    except (DatasetError, FileNotFoundError) as e:
        logger.error(f"Input error: {e}")
        logger.debug("Traceback", exc_info=True)
        return EXIT_INPUT
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        logger.debug("Traceback", exc_info=True)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
