"""
Report Generator - Point tables, analysis tables, JSON reports and the run manifest
"""
import hashlib
import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from .. import __version__
from ..analytics.hull_geometry import Projection
from ..analytics.trajectory import TrajectoryAnalysis
from ..models.lmg_models import LmgParams, RdmPoint, RunManifest, Source, SweepConfig, SweepRow
from ..utils.config import config_hash

logger = logging.getLogger(__name__)

POINT_COLUMNS = ["epsilon", "lambda", "jz", "jz2", "jpm2", "energy", "degenerate", "limit", "source", "shots", "seed"]
# derived from epsilon on reading, so older files without it still load
DERIVED_COLUMNS = ("limit",)
ERROR_COLUMNS = ["epsilon", "lambda", "jz_err", "jz2_err", "jpm2_err"]
GRADIENT_COLUMNS = ["lambda", "djz_dlambda", "arc_speed", "std_error"]
ORDER_AXES = ("jz", "jz2", "jpm2")


def errors_path_for(points_path: str) -> str:
    """Sidecar holding the standard errors of a sampled points table"""
    root, ext = os.path.splitext(points_path)
    return f"{root}_errors{ext or '.csv'}"


def points_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    records = []
    for row in rows:
        p = row.point
        records.append({
            "epsilon": row.params.epsilon,
            "lambda": row.params.lam,
            "jz": p.jz if p else np.nan,
            "jz2": p.jz2 if p else np.nan,
            "jpm2": p.jpm2 if p else np.nan,
            "energy": p.energy if p and p.energy is not None else np.nan,
            "degenerate": bool(p.degenerate) if p else False,
            "limit": row.params.limit,
            "source": row.source.value,
            "shots": p.shots if p else None,
            "seed": row.seed,
        })
    frame = pd.DataFrame.from_records(records, columns=POINT_COLUMNS)
    frame["shots"] = frame["shots"].astype("Int64")
    frame["seed"] = frame["seed"].astype("Int64")
    return frame


def write_points_csv(path: str, rows: Sequence[SweepRow]) -> List[str]:
    """
    points.csv with exactly POINT_COLUMNS; failed points keep their row with
    empty order parameters. Sampled points also get an errors sidecar.
    """
    written = [path]
    points_frame(rows).to_csv(path, index=False, na_rep="", lineterminator="\n")
    sampled = [row for row in rows if row.point is not None and row.point.jz_err is not None]
    if sampled:
        errors = pd.DataFrame.from_records(
            [{
                "epsilon": row.params.epsilon,
                "lambda": row.params.lam,
                "jz_err": row.point.jz_err,
                "jz2_err": row.point.jz2_err,
                "jpm2_err": row.point.jpm2_err,
            } for row in sampled],
            columns=ERROR_COLUMNS,
        )
        errors_path = errors_path_for(path)
        errors.to_csv(errors_path, index=False, na_rep="", lineterminator="\n")
        written.append(errors_path)
    return written


def _optional_int(value) -> Optional[int]:
    return None if pd.isna(value) else int(value)


def read_points_csv(path: str, n_particles: Optional[int] = None) -> List[RdmPoint]:
    """
    Inverse of write_points_csv. The particle number is not a column; it is
    taken from the argument or inferred from the largest |jz| and sqrt(jz2).
    Malformed tables raise ValueError; failed rows are skipped.
    """
    frame = pd.read_csv(path, float_precision="round_trip", dtype={"shots": "Int64", "seed": "Int64",
                                                                     "source": str})
    missing = [c for c in POINT_COLUMNS if c not in frame.columns and c not in DERIVED_COLUMNS]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")

    errors: Dict[tuple, Dict[str, float]] = {}
    errors_path = errors_path_for(path)
    if os.path.exists(errors_path):
        err_frame = pd.read_csv(errors_path, float_precision="round_trip")
        for rec in err_frame.to_dict("records"):
            errors[(rec["epsilon"], rec["lambda"])] = {k: rec[k] for k in ERROR_COLUMNS[2:]}

    valid = frame.dropna(subset=["jz", "jz2", "jpm2"])
    if len(valid) < len(frame):
        logger.warning("%s: skipping %d failed rows", path, len(frame) - len(valid))
    if n_particles is None:
        if valid.empty:
            raise ValueError(f"{path}: no valid rows")
        half_n = max(float(valid["jz"].abs().max()), float(np.sqrt(valid["jz2"].clip(lower=0).max())))
        n_particles = max(1, int(np.ceil(2 * half_n - 1e-9)))

    points = []
    for rec in valid.to_dict("records"):
        try:
            params = LmgParams(epsilon=rec["epsilon"], lam=rec["lambda"], n_particles=n_particles)
            err = errors.get((rec["epsilon"], rec["lambda"]), {})
            points.append(RdmPoint(
                jz=rec["jz"], jz2=rec["jz2"], jpm2=rec["jpm2"], params=params,
                source=Source(rec["source"]),
                shots=_optional_int(rec["shots"]), seed=_optional_int(rec["seed"]),
                energy=None if pd.isna(rec["energy"]) else rec["energy"],
                degenerate=bool(rec["degenerate"]),
                jz_err=err.get("jz_err"), jz2_err=err.get("jz2_err"), jpm2_err=err.get("jpm2_err"),
            ))
        except ValueError as e:
            raise ValueError(f"{path}: bad row at epsilon={rec['epsilon']}, lambda={rec['lambda']}: {e}")
    return points


def gradient_frame(analysis: TrajectoryAnalysis) -> pd.DataFrame:
    return pd.DataFrame({
        "lambda": analysis.lambdas,
        "djz_dlambda": analysis.djz_dlambda,
        "arc_speed": analysis.arc_speed,
        "std_error": analysis.std_error,
    }, columns=GRADIENT_COLUMNS)


def projection_frame(projection: Projection) -> pd.DataFrame:
    """Projected coordinates plus the position of each point on the 2D outline"""
    a, b = projection.kept_axes
    order = pd.array([None] * len(projection.points), dtype="Int64")
    for position, idx in enumerate(projection.outline):
        order[idx] = position
    return pd.DataFrame({
        a: projection.points[:, 0],
        b: projection.points[:, 1],
        "outline_order": order,
    })


def comparison_frame(exact: Sequence[RdmPoint], simulated: Sequence[RdmPoint]) -> pd.DataFrame:
    """
    Join on (epsilon, lambda); d_* is simulated minus exact and z_* the same
    delta in standard errors (empty without an error estimate)
    """
    def frame(points, suffix):
        return pd.DataFrame.from_records([{
            "epsilon": p.params.epsilon,
            "lambda": p.params.lam,
            **{f"{axis}_{suffix}": getattr(p, axis) for axis in ORDER_AXES},
            **({f"{axis}_err": getattr(p, f"{axis}_err") for axis in ORDER_AXES} if suffix == "sim" else {}),
        } for p in points])

    if not exact or not simulated:
        raise ValueError("both point sets must be non-empty")
    joined = frame(exact, "exact").merge(frame(simulated, "sim"), on=["epsilon", "lambda"], how="inner")
    joined = joined.sort_values(["epsilon", "lambda"], kind="mergesort").reset_index(drop=True)
    for axis in ORDER_AXES:
        delta = joined[f"{axis}_sim"] - joined[f"{axis}_exact"]
        err = pd.to_numeric(joined[f"{axis}_err"], errors="coerce")
        joined[f"d_{axis}"] = delta
        joined[f"z_{axis}"] = (delta / err).where(err > 0)
    columns = ["epsilon", "lambda"]
    for axis in ORDER_AXES:
        columns += [f"{axis}_exact", f"{axis}_sim", f"d_{axis}", f"z_{axis}"]
    return joined[columns]


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class ReportGenerator:
    """
    Writes every artifact of one command into an output directory and keeps
    the inventory for the run manifest
    """

    def __init__(self, output_dir: str = "./runs"):
        self.output_dir = output_dir
        self.outputs: Dict[str, str] = {}
        self.ensure_output_directory()

    def ensure_output_directory(self):
        """Ensure the output directory exists"""
        os.makedirs(self.output_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def _record(self, *paths: str):
        for p in paths:
            self.outputs[os.path.basename(p)] = p

    def write_points(self, rows: Sequence[SweepRow], name: str = "points.csv") -> str:
        paths = write_points_csv(self.path(name), rows)
        self._record(*paths)
        return paths[0]

    def write_frame(self, frame: pd.DataFrame, name: str) -> str:
        target = self.path(name)
        frame.to_csv(target, index=False, na_rep="", lineterminator="\n")
        self._record(target)
        return target

    def write_json(self, data: Dict[str, Any], name: str) -> str:
        target = self.path(name)
        with open(target, "w") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
        self._record(target)
        return target

    def add_output(self, target: str):
        """Register a file written by another writer (counts, plots, meshes)"""
        self._record(target)

    def write_manifest(self, command: str, started_at: str, config: Optional[SweepConfig] = None,
                       point_seeds: Optional[List[Dict[str, Optional[int]]]] = None) -> RunManifest:
        manifest = RunManifest(
            config_hash=config_hash(config) if config is not None else "",
            tool_version=__version__,
            command=command,
            started_at=started_at,
            finished_at=utc_now(),
            point_seeds=point_seeds or [],
            outputs={name: sha256_file(p) for name, p in sorted(self.outputs.items())},
        )
        target = self.path("manifest.json")
        with open(target, "w") as f:
            f.write(manifest.model_dump_json(indent=2))
            f.write("\n")
        print(f"Reports generated in: {self.output_dir}")
        return manifest
