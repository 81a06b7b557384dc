#!/usr/bin/env python3
"""
Reference Data Script
=====================
Write the reference data sets of the spin engine:

    distributions  efficiency distributions at the nonadiabatic and adiabatic
                   points (JSON), plus a Monte Carlo histogram of the
                   nonadiabatic point
    tau-window     engine quantities over the stroke duration (CSV) and the
                   edges of the engine windows (JSON)
    beta-moments   adiabatic mean, variance, their limits and Cov(Q2, eta)
                   over beta1 (CSV)

Plotting is left to external tools; every artifact is plain JSON or CSV.
"""

import argparse
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from otto_engine.cli.artifacts import write_json
from otto_engine.cli.commands import cmd_dist, cmd_sample, cmd_sweep_beta, cmd_sweep_tau
from otto_engine.cli.config import load_config
from otto_engine.twolevel import engine_window_edges
from otto_engine.utils.errors import OttoEngineError
from otto_engine.utils.logging_config import setup_logging

CONFIG_DIR = project_root / "configs"
TARGETS = ["distributions", "tau-window", "beta-moments"]


def _config(name: str, output_dir: Path, **overrides):
    return load_config(str(CONFIG_DIR / name), {"output_dir": str(output_dir), **overrides})


def write_distributions(output_dir: Path, n_samples: int) -> None:
    nonadiabatic = _config("nonadiabatic.json", output_dir / "nonadiabatic", **{"sample.n_samples": n_samples})
    cmd_dist(nonadiabatic)
    fit = cmd_sample(nonadiabatic)["goodness_of_fit"]
    print(f"✅ nonadiabatic: TV distance {fit['tv_distance']:.2e}, p = {fit['p_value']}")

    cmd_dist(_config("adiabatic.json", output_dir / "adiabatic"))
    print("✅ adiabatic")


def write_tau_window(output_dir: Path) -> None:
    config = _config("sweep_tau.json", output_dir / "sweep_tau")
    frame = cmd_sweep_tau(config)
    edges = engine_window_edges(config.params(), frame["tau"].tolist())
    write_json({"params": config.describe(), "window_edges": edges}, output_dir / "sweep_tau" / "window_edges.json")
    print(f"✅ tau window: {len(frame)} stroke durations, {len(edges)} window edges")


def write_beta_moments(output_dir: Path) -> None:
    frame = cmd_sweep_beta(_config("sweep_beta.json", output_dir / "sweep_beta"))
    print(f"✅ beta moments: {len(frame)} inverse temperatures")


def main():
    """Write the selected reference data sets."""
    parser = argparse.ArgumentParser(description="Write the reference data of the spin Otto engine")
    parser.add_argument("--output-dir", default="output/reference", help="Artifact root directory")
    parser.add_argument("--n-samples", type=int, default=1_000_000, help="Sampled cycles at the nonadiabatic point")
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("--only", choices=TARGETS, action="append", help="Restrict to these data sets (repeatable)")
    args = parser.parse_args()

    setup_logging(level=args.log_level)
    output_dir = Path(args.output_dir)
    selected = args.only or TARGETS

    print("\n📈 Reference Data\n" + "=" * 50 + "\n")
    try:
        if "distributions" in selected:
            write_distributions(output_dir, args.n_samples)
        if "tau-window" in selected:
            write_tau_window(output_dir)
        if "beta-moments" in selected:
            write_beta_moments(output_dir)
    except OttoEngineError as e:
        print(f"❌ {e}")
        sys.exit(1)

    print(f"\n📁 Artifacts in {output_dir}")


if __name__ == "__main__":
    main()
