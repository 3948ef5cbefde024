#!/usr/bin/env python3
"""Smoke test: bounds, design and a short benchmark on the bundled example data."""

import sys
import os
import tempfile

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from rctdesign.utils.logger import get_logger

logger = get_logger("test_pipeline")

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
EXAMPLE_DIR = os.path.join(BASE_DIR, "data", "four_strata")


def test_imports():
    """Test that all modules can be imported."""
    logger.info("Testing module imports...")

    try:
        from rctdesign.sensitivity.sipw import mean_extrema
        from rctdesign.sensitivity.variance import variance_bounds
        from rctdesign.regions.ellipse import min_volume_ellipse
        from rctdesign.regions.region import build_regions
        from rctdesign.optimizer.solver import maximize_worst_case
        from rctdesign.simulation.benchmark import benchmark
        from rctdesign.cli import main
        logger.info("✓ All modules imported")
        return True
    except Exception as e:
        logger.exception(f"Import error: {e}")
        return False


def test_config_loader():
    """Test config loading."""
    logger.info("\nTesting config loader...")

    try:
        from rctdesign.config.loader import load_design_config

        config = load_design_config(os.path.join(EXAMPLE_DIR, "config.json"))
        logger.info(f"✓ Loaded config: gamma={config.gamma}, B={config.bootstrap_reps}, n_r={config.n_r}")

        assert config.gamma == 1.2
        assert config.solver.max_iters == 10000
        return True
    except Exception as e:
        logger.exception(f"Config test error: {e}")
        return False


def test_regions():
    """Test region construction on the example observations."""
    logger.info("\nTesting confidence regions...")

    try:
        from rctdesign.config.loader import load_design_config
        from rctdesign.regions.region import build_regions
        from rctdesign.reporting.io import read_dataset

        config = load_design_config(os.path.join(EXAMPLE_DIR, "config.json")).model_copy(update={"bootstrap_reps": 50})
        dataset = read_dataset(os.path.join(EXAMPLE_DIR, "observations.csv"))
        builds = build_regions(dataset, config)

        for build in builds:
            area = build.region.ellipse.area
            logger.info(f"✓ Stratum {build.region.stratum_id}: {len(build.rectangles)} rectangles, ellipse area {area:.3g}")
            assert len(build.rectangles) == 50
        return True
    except Exception as e:
        logger.exception(f"Region test error: {e}")
        return False


def test_design():
    """Test the regret solve."""
    logger.info("\nTesting regret-minimizing design...")

    try:
        from rctdesign.config.loader import load_design_config
        from rctdesign.design.allocation import default_allocation
        from rctdesign.optimizer.solver import maximize_worst_case
        from rctdesign.regions.region import build_regions
        from rctdesign.reporting.io import read_dataset

        config = load_design_config(os.path.join(EXAMPLE_DIR, "config.json")).model_copy(update={"bootstrap_reps": 50})
        dataset = read_dataset(os.path.join(EXAMPLE_DIR, "observations.csv"))
        regions = [b.region for b in build_regions(dataset, config)]
        report = maximize_worst_case(regions, dataset.weights, config, default_allocation(config, dataset))

        logger.info(f"✓ Converged={report.converged} after {report.iterations} iterations")
        logger.info(f"✓ Allocation: {report.allocation.to_dict()}")
        assert report.converged
        assert report.worst_case_regret <= 1e-6
        return True
    except Exception as e:
        logger.exception(f"Design test error: {e}")
        return False


def test_cli_roundtrip():
    """Test bounds then report through the command line."""
    logger.info("\nTesting command line...")

    try:
        from rctdesign.cli import main as cli_main

        with tempfile.TemporaryDirectory() as tmp:
            bounds = os.path.join(tmp, "bounds")
            code = cli_main(["bounds", "--data", os.path.join(EXAMPLE_DIR, "observations.csv"),
                             "--gamma", "1.2", "--out", bounds])
            assert code == 0
            code = cli_main(["report", "--regions", os.path.join(bounds, "regions.json"),
                             "--rectangles", os.path.join(bounds, "rectangles.csv"), "--out", os.path.join(tmp, "plots")])
            assert code == 0
            logger.info(f"✓ Plots: {sorted(os.listdir(os.path.join(tmp, 'plots')))}")
        return True
    except Exception as e:
        logger.exception(f"CLI test error: {e}")
        return False


def main():
    logger.info("=" * 60)
    logger.info("rctdesign - Pipeline Test")
    logger.info("=" * 60)

    tests = [
        ("Module Imports", test_imports),
        ("Config Loader", test_config_loader),
        ("Confidence Regions", test_regions),
        ("Regret Design", test_design),
        ("Command Line", test_cli_roundtrip),
    ]

    passed = 0
    failed = 0

    for test_name, test_func in tests:
        try:
            if test_func():
                passed += 1
            else:
                failed += 1
                logger.error(f"✗ {test_name} FAILED")
        except Exception as e:
            failed += 1
            logger.error(f"✗ {test_name} FAILED with exception: {e}")

    logger.info("\n" + "=" * 60)
    logger.info(f"Test Results: {passed} passed, {failed} failed")
    logger.info("=" * 60)

    if failed == 0:
        logger.info("✅ All tests passed!")
        logger.info("\nNext steps:")
        logger.info("1. Run: python -m rctdesign generate --spec data/four_strata/spec.json --out runs/gen")
        logger.info("2. Run: python -m rctdesign design --data runs/gen/observations.csv --out runs/design")
        logger.info("3. Run: python -m rctdesign simulate --spec data/four_strata/spec.json --out runs/sim")
        return 0
    else:
        logger.error("❌ Some tests failed")
        return 1


if __name__ == "__main__":
    sys.exit(main())
