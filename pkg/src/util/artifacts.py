"""
Config loading with dotted overrides, and reading/writing run artifact directories
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel, ValidationError

from src.models.errors import ArtifactError, ConfigError
from src.models.experiment import ExperimentConfig, RunArtifact

PathLike = Union[str, Path]

RUN_FILES = ("config.json", "run.json", "status.json", "trace.csv", "trajectory.csv", "swpe.csv", "jacobian.csv")


def run_dir_name(run_index: int) -> str:
    return f"run_{run_index:03d}"


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def parse_overrides(items: Optional[Sequence[str]]) -> Dict[str, Any]:
    """["train.learning_rate=0.005", "runs=2"] -> nested dict"""
    overrides: Dict[str, Any] = {}
    for item in items or []:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        node = overrides
        *parents, leaf = key.strip().split(".")
        for part in parents:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {item!r} conflicts with a scalar override")
        node[leaf] = _parse_value(raw.strip())
    return overrides


def merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def apply_overrides(config: ExperimentConfig, overrides: Dict[str, Any]) -> ExperimentConfig:
    if not overrides:
        return config
    try:
        return ExperimentConfig.model_validate(merge(config.model_dump(mode="json"), overrides))
    except ValidationError as e:
        raise ConfigError(f"invalid override for {config.name}: {e}") from e


def load_config(path: PathLike, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Validate a JSON config file, applying overrides before validation"""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        return ExperimentConfig.model_validate(merge(data, overrides or {}))
    except ValidationError as e:
        raise ConfigError(f"invalid config {path}: {e}") from e


def write_json(path: PathLike, payload: Union[BaseModel, Dict[str, Any]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, BaseModel):
        path.write_text(payload.model_dump_json(indent=2))
    else:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True))


def write_csv(frame: pd.DataFrame, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)


def write_status(run_dir: PathLike, error: Optional[str] = None) -> None:
    status = {"status": "ok"} if error is None else {"status": "failed", "error": error}
    write_json(Path(run_dir) / "status.json", status)


def load_run(run_dir: PathLike) -> RunArtifact:
    path = Path(run_dir) / "run.json"
    try:
        return RunArtifact.model_validate_json(path.read_text())
    except (OSError, ValueError) as e:
        raise ArtifactError(f"cannot read run artifact {path}: {e}") from e


def missing_files(run_dir: PathLike) -> List[str]:
    run_dir = Path(run_dir)
    return [name for name in RUN_FILES if not (run_dir / name).exists()]


def experiment_dirs(root: PathLike) -> List[Path]:
    """Experiment directories below `root`, `root` itself included, sorted by path"""
    root = Path(root)
    if not root.is_dir():
        raise ArtifactError(f"{root} is not a directory")
    found = {p.parent for p in root.rglob("config.json") if p.parent.name != "summary"
             and not p.parent.name.startswith("run_")}
    return sorted(found)


def load_experiment(experiment_dir: PathLike) -> List[RunArtifact]:
    """Run artifacts of one experiment in run-index order; unreadable runs are skipped"""
    runs = []
    for run_dir in sorted(Path(experiment_dir).glob("run_*")):
        try:
            runs.append(load_run(run_dir))
        except ArtifactError:
            continue
    return runs


def read_csv(path: PathLike) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except (OSError, pd.errors.EmptyDataError) as e:
        raise ArtifactError(f"cannot read {path}: {e}") from e
