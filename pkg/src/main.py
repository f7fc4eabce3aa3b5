"""Train, evaluate and report VQ-CNNI phase-estimation experiments"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import questionary

from src.constants.env import LOG_LEVEL, OUTPUT_DIR, WORKERS
from src.constants.presets import get_preset, presets
from src.models.errors import ConfigError, VqcnniError
from src.models.experiment import ExperimentConfig, RunArtifact
from src.service.experiment_runner import run_experiment
from src.util.artifacts import apply_overrides, load_config, parse_overrides
from src.util.generate_report import generate_html_report, report
from src.util.plots import make_plots

logger = logging.getLogger(__name__)

# keys that fix where a preset writes; use --out to move a preset
PRESET_LAYOUT_KEYS = frozenset({"name", "output_dir", "reference_dir"})


def _configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _run_all(configs: List[ExperimentConfig], workers: int) -> List[RunArtifact]:
    artifacts = []
    for config in configs:
        print(f"Running {config.name} ({config.model_kind.value}, {config.runs} runs) -> {config.experiment_dir}")
        results = run_experiment(config, workers=workers)
        failed = sum(a.status == "failed" for a in results)
        print(f"  {len(results) - failed} ok, {failed} failed")
        artifacts.extend(results)
    return artifacts


def _pick_preset() -> Optional[str]:
    if not sys.stdin.isatty():
        return None
    choices = [questionary.Choice(f"{name}: {preset.description}", value=name) for name, preset in presets().items()]
    return questionary.select("Which experiment preset?", choices=choices).ask()


def cmd_run(args) -> int:
    overrides = parse_overrides(args.set)
    if args.out:
        overrides["output_dir"] = args.out
    config = load_config(args.config, overrides)
    artifacts = _run_all([config], args.workers)
    return 1 if any(a.status == "failed" for a in artifacts) else 0


def cmd_preset(args) -> int:
    name = args.name or _pick_preset()
    if not name:
        print("No preset given. Choose one of: " + ", ".join(presets()))
        return 2
    preset = get_preset(name, args.out)
    overrides = parse_overrides(args.set)
    fixed = sorted(overrides.keys() & PRESET_LAYOUT_KEYS)
    if fixed:
        raise ConfigError(f"preset experiments do not accept --set for {', '.join(fixed)}; use --out instead")
    configs = [apply_overrides(config, overrides) for config in preset.experiments]
    print(f"Preset {preset.name}: {preset.description}")
    artifacts = _run_all(configs, args.workers)

    root = Path(args.out or OUTPUT_DIR) / preset.name
    result = report(root)
    print(result.text)
    return 1 if any(a.status == "failed" for a in artifacts) else 0


def cmd_report(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        print(f"Not a directory: {root}")
        return 2
    result = report(root)
    print(result.text)
    print(f"Summary written to {root / 'report'}")
    return 0


def cmd_plot(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        print(f"Not a directory: {root}")
        return 2
    out_dir = root / "report"
    print("Rendering figures...")
    charts = make_plots(root, out_dir / "plots")
    path = generate_html_report(root, charts, out_dir)
    print(f"HTML report generated: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqcnni", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--out", help="output directory (default: VQCNNI_OUTPUT_DIR)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key, dotted for nesting (e.g. train.max_iters=500)")
        p.add_argument("--workers", type=int, default=WORKERS, help="parallel runs (default: VQCNNI_WORKERS)")

    run = sub.add_parser("run", help="run the experiment described by a JSON config file")
    run.add_argument("config")
    add_run_flags(run)
    run.set_defaults(func=cmd_run)

    preset = sub.add_parser("preset", help="run a named experiment preset")
    preset.add_argument("name", nargs="?", help=", ".join(presets()))
    add_run_flags(preset)
    preset.set_defaults(func=cmd_preset)

    rep = sub.add_parser("report", help="summarize the artifacts under a directory")
    rep.add_argument("directory")
    rep.set_defaults(func=cmd_report)

    plot = sub.add_parser("plot", help="render figures and an HTML report from artifacts")
    plot.add_argument("directory")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VqcnniError as e:
        logger.error("%s", e)
        print(f"Error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
