"""
Summarize experiment artifact directories into plain-text, CSV and HTML reports
"""
import logging
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from src.constants.report_templates import (
    CHART_SECTION_TEMPLATE, CHECK_ROW_TEMPLATE, EMPTY_TEXT_TEMPLATE, NO_RUNS_MARKER, PARTIAL_SECTION_TEMPLATE,
    PARTIAL_TEXT_TEMPLATE, REPORT_HTML_TEMPLATE, SUMMARY_ROW_TEMPLATE, SUMMARY_TEXT_TEMPLATE,
)
from src.models.errors import ArtifactError
from src.models.experiment import ExperimentConfig, ModelKind, RunArtifact
from src.models.network import ABLATION_ACTIVATIONS, ActivationKind
from src.util.artifacts import (
    experiment_dirs, load_experiment, missing_files, read_csv, run_dir_name, write_csv,
)

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["group", "model", "model_kind", "activation", "runs_ok", "runs_failed", "runs_total",
                   "swpe_median_exact", "swpe_median_shots", "j_mean", "j_var", "qfi", "final_loss"]
CHECK_COLUMNS = ["group", "check", "value", "detail", "passed"]

# fraction of matched runs an empirical ordering must hold in
MAJORITY = 0.75
MIN_GAP_DB = 10.0
TAIL_PHASE = np.pi / 4


class Experiment(NamedTuple):
    group: str
    directory: Path
    config: ExperimentConfig
    runs: List[RunArtifact]

    @property
    def ok_runs(self) -> List[RunArtifact]:
        return [run for run in self.runs if run.status == "ok"]


class Report(NamedTuple):
    summary: pd.DataFrame
    checks: pd.DataFrame
    partial: List[str]
    text: str


def _collect(root: Path) -> Tuple[List[Experiment], List[str]]:
    experiments, partial = [], []
    for directory in experiment_dirs(root):
        try:
            config = ExperimentConfig.model_validate_json((directory / "config.json").read_text())
        except (OSError, ValidationError) as e:
            partial.append(f"{directory}: unreadable config ({e.__class__.__name__})")
            continue
        runs = load_experiment(directory)
        group = str(directory.parent.relative_to(root)) if directory != root else "."
        experiment = Experiment(group, directory, config, runs)
        experiments.append(experiment)

        if len(runs) < config.runs:
            partial.append(f"{directory}: {len(runs)} of {config.runs} runs present")
        for run in runs:
            if run.status == "failed":
                partial.append(f"{directory}/{run_dir_name(run.run_index)}: failed ({run.error})")
                continue
            missing = missing_files(directory / run_dir_name(run.run_index))
            if missing:
                partial.append(f"{directory}/{run_dir_name(run.run_index)}: missing {', '.join(missing)}")
    return experiments, partial


def _median(values) -> float:
    values = [v for v in values if v is not None]
    return float(np.median(values)) if values else float("nan")


def _mean(values) -> float:
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else float("nan")


def _summary_row(experiment: Experiment) -> Dict:
    ok = experiment.ok_runs
    activation = experiment.config.decoder_activation
    return {
        "group": experiment.group,
        "model": experiment.config.name,
        "model_kind": experiment.config.model_kind.value,
        "activation": activation.value if activation else "",
        "runs_ok": len(ok),
        "runs_failed": len(experiment.runs) - len(ok),
        "runs_total": experiment.config.runs,
        "swpe_median_exact": _median(r.swpe_median_exact for r in ok),
        "swpe_median_shots": _median(r.swpe_median_shots for r in ok),
        "j_mean": _mean(r.j_mean for r in ok),
        "j_var": _mean(r.j_var for r in ok),
        "qfi": _median(r.qfi for r in ok),
        "final_loss": _median(r.final_loss for r in ok),
    }


def _tail_median(experiment: Experiment, mode: str) -> float:
    """Median SWPE over all ok runs at |phi| > pi/4"""
    values = []
    for run in experiment.ok_runs:
        sweep = read_csv(experiment.directory / run_dir_name(run.run_index) / "swpe.csv")
        sweep = sweep[(sweep["mode"] == mode) & (sweep["phase"].abs() > TAIL_PHASE)]
        values.extend(sweep["swpe_db"].tolist())
    return float(np.median(values)) if values else float("nan")


def _has_mode(experiment: Experiment, mode: str) -> bool:
    return experiment.config.shots > 0 if mode == "shots" else True


def _check(group: str, name: str, value, detail: str, passed: Optional[bool]) -> Dict:
    return {"group": group, "check": name, "value": value, "detail": detail, "passed": passed}


def _activation_checks(group: str, experiments: List[Experiment]) -> List[Dict]:
    by_activation = {e.config.activation: e for e in experiments
                     if e.config.model_kind == ModelKind.VQCNNI and e.config.activation in ABLATION_ACTIVATIONS
                     and e.ok_runs}
    if len(by_activation) < 2:
        return []
    ordered = sorted(by_activation, key=lambda kind: _mean(r.j_var for r in by_activation[kind].ok_runs))
    parities = [kind.parity for kind in ordered]
    odd_first = None
    if "odd" in parities and "asymmetric" in parities:
        odd_first = max(i for i, p in enumerate(parities) if p == "odd") < min(
            i for i, p in enumerate(parities) if p == "asymmetric")
    checks = [_check(group, "jacobian_variance_order", " < ".join(k.value for k in ordered),
                     "activations by ascending mean Jacobian variance; passed if every odd one precedes "
                     "every asymmetric one", odd_first)]

    softsign = by_activation.get(ActivationKind.SOFTSIGN)
    shifted = by_activation.get(ActivationKind.SOFTSIGN_SHIFT)
    if softsign and shifted:
        mode = "shots" if _has_mode(softsign, "shots") and _has_mode(shifted, "shots") else "exact"
        field = f"swpe_median_{mode}"
        gap = (_median(getattr(r, field) for r in shifted.ok_runs)
               - _median(getattr(r, field) for r in softsign.ok_runs))
        checks.append(_check(group, "softsign_vs_shift_gap_db", round(gap, 6),
                             f"{mode} median SWPE of SoftsignShift minus Softsign", bool(gap >= MIN_GAP_DB)))
    return checks


def _global_gap_check(group: str, experiments: List[Experiment]) -> List[Dict]:
    vqi = next((e for e in experiments if e.config.model_kind == ModelKind.VQI and e.ok_runs), None)
    joint = [e for e in experiments if e.config.model_kind == ModelKind.VQCNNI and e.ok_runs]
    joint = next((e for e in joint if e.config.activation == ActivationKind.SOFTSIGN), joint[0] if joint else None)
    if vqi is None or joint is None:
        return []
    mode = "shots" if _has_mode(vqi, "shots") and _has_mode(joint, "shots") else "exact"
    gap = _tail_median(vqi, mode) - _tail_median(joint, mode)
    return [_check(group, "vqcnni_vs_vqi_tail_gap_db", round(gap, 6),
                   f"{mode} median SWPE at |phi| > pi/4, {vqi.config.name} minus {joint.config.name}",
                   bool(gap >= MIN_GAP_DB))]


def _fixed_check(group: str, experiments: List[Experiment]) -> List[Dict]:
    fixed = next((e for e in experiments if e.config.model_kind == ModelKind.VQCNNI_FIXED), None)
    joint = next((e for e in experiments if e.config.model_kind == ModelKind.VQCNNI), None)
    if fixed is None or joint is None:
        return []
    joint_runs = {r.run_index: r for r in joint.ok_runs}
    matched = [(r, joint_runs[r.run_index]) for r in fixed.ok_runs if r.run_index in joint_runs]
    if not matched:
        return []
    worse = sum(f.swpe_median_exact > j.swpe_median_exact for f, j in matched)
    return [_check(group, "fixed_worse_than_joint", f"{worse}/{len(matched)}",
                   "matched runs where decoupled training ends with a higher median SWPE",
                   bool(worse >= MAJORITY * len(matched)))]


def _qfi_peak_checks(group: str, experiments: List[Experiment]) -> List[Dict]:
    checks = []
    for experiment in experiments:
        if experiment.config.model_kind != ModelKind.VQCNNI:
            continue
        traced = [r for r in experiment.ok_runs if r.trace is not None and len(r.trace.evals) >= 2]
        if not traced:
            continue
        hits = 0
        for run in traced:
            evals = run.trace.evals
            peak = max(range(len(evals)), key=lambda i: evals[i].qfi)
            if peak < len(evals) - 1 and evals[-1].swpe_median <= evals[peak].swpe_median:
                hits += 1
        checks.append(_check(group, f"qfi_peaks_before_swpe[{experiment.config.name}]", f"{hits}/{len(traced)}",
                             "runs whose QFI peaks before the final epoch while SWPE keeps falling",
                             bool(hits >= MAJORITY * len(traced))))
    return checks


def ordering_checks(experiments: List[Experiment]) -> pd.DataFrame:
    rows = []
    groups = sorted({e.group for e in experiments})
    for group in groups:
        members = [e for e in experiments if e.group == group]
        rows += _global_gap_check(group, members)
        rows += _fixed_check(group, members)
        rows += _qfi_peak_checks(group, members)
        rows += _activation_checks(group, members)
    return pd.DataFrame(rows, columns=CHECK_COLUMNS)


def report(root, out_dir: Optional[Path] = None) -> Report:
    """Per-model summary and ordering checks for every experiment below `root`.

    Writes summary.csv, checks.csv and summary.txt to `out_dir` (root/report by default).
    """
    root = Path(root)
    out_dir = Path(out_dir) if out_dir else root / "report"
    try:
        experiments, partial = _collect(root)
    except ArtifactError:
        experiments, partial = [], []
    summary = pd.DataFrame([_summary_row(e) for e in experiments], columns=SUMMARY_COLUMNS)
    checks = ordering_checks(experiments)

    if not any(e.runs for e in experiments):
        text = EMPTY_TEXT_TEMPLATE.format(root=root, marker=NO_RUNS_MARKER)
    else:
        text = SUMMARY_TEXT_TEMPLATE.format(
            root=root,
            n_experiments=len(experiments),
            runs_ok=int(summary["runs_ok"].sum()),
            runs_failed=int(summary["runs_failed"].sum()),
            status="partial" if partial else "complete",
            summary_table=summary.drop(columns=["group"]).to_string(index=False),
            checks_table=checks.to_string(index=False) if not checks.empty else "(none applicable)",
        )
        if partial:
            text += PARTIAL_TEXT_TEMPLATE.format(partial_items="\n".join(f"  - {item}" for item in partial))

    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(summary, out_dir / "summary.csv")
    write_csv(checks, out_dir / "checks.csv")
    (out_dir / "summary.txt").write_text(text)
    logger.info("report for %s: %d experiments, %s", root, len(experiments), "partial" if partial else "complete")
    return Report(summary, checks, partial, text)


def generate_html_report(root, charts: List[Tuple[str, str]], out_dir: Optional[Path] = None) -> Path:
    """report() plus an HTML page embedding the given (title, relative image path) charts"""
    root = Path(root)
    out_dir = Path(out_dir) if out_dir else root / "report"
    result = report(root, out_dir)
    summary = result.summary

    summary_rows = ""
    for row in summary.to_dict("records"):
        summary_rows += SUMMARY_ROW_TEMPLATE.format(**row)
    check_rows = ""
    for row in result.checks.to_dict("records"):
        passed = None if row["passed"] is None or pd.isna(row["passed"]) else bool(row["passed"])
        check_rows += CHECK_ROW_TEMPLATE.format(
            group=row["group"], check=row["check"], value=row["value"],
            passed={True: "yes", False: "no"}.get(passed, "n/a"),
            passed_class={True: "positive", False: "negative"}.get(passed, ""),
        )
    partial_section = ""
    if result.partial:
        partial_section = PARTIAL_SECTION_TEMPLATE.format(
            partial_items="".join(f"<li>{item}</li>" for item in result.partial))
    chart_sections = "".join(CHART_SECTION_TEMPLATE.format(title=title, src=src) for title, src in charts)

    ranked = summary.dropna(subset=["swpe_median_exact"]).sort_values("swpe_median_exact")
    best_model, best_swpe = (("-", float("nan")) if ranked.empty
                             else (ranked.iloc[0]["model"], float(ranked.iloc[0]["swpe_median_exact"])))
    runs_failed = int(summary["runs_failed"].sum()) if not summary.empty else 0
    html_content = REPORT_HTML_TEMPLATE.format(
        root=root,
        n_experiments=len(summary),
        runs_ok=int(summary["runs_ok"].sum()) if not summary.empty else 0,
        runs_failed=runs_failed,
        failed_class="negative" if runs_failed else "positive",
        best_swpe=best_swpe,
        best_model=best_model,
        summary_rows=summary_rows,
        check_rows=check_rows,
        partial_section=partial_section,
        chart_sections=chart_sections,
    )
    path = out_dir / "report.html"
    path.write_text(html_content)
    return path
