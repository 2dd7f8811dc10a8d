"""File formats: point CSVs, depth reports, result JSON, run manifests.

Point files hold one encoded point per row in the active space's encoding
(vectors as comma-separated coordinates, matrices row-major flattened,
spider points as ``branch,radius``, products joined with ``|``). Depth
values travel as exact numerator/denominator integers; JSON adds a
convenience float.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .depth import DepthReport
from .errors import DataError, PointValidationError
from .estimators import EstimatorResult
from .inference import TestResult
from .spaces import Space

MANIFEST_SCHEMA = "metricdepth.manifest/1"

DEPTH_CSV_COLUMNS = ("query_index", "depth_num", "depth_den",
                     "anchor1_index", "anchor2_index")
LONG_CSV_COLUMNS = ("estimator", "case", "space", "k", "n", "rep", "error")
SUMMARY_CSV_COLUMNS = ("estimator", "case", "space", "k", "n", "median_error", "se")


def read_points(path, space: Space) -> list:
    """Parse one point per non-empty row, reporting row numbers on failure."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    points = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        row = line.strip()
        if not row or row.startswith("#"):
            continue
        try:
            points.append(space.decode_point(row))
        except PointValidationError as exc:
            raise DataError(f"{path}: row {lineno}: {exc}") from exc
    if not points:
        raise DataError(f"{path}: no points found")
    return points


def write_points(path, space: Space, points) -> None:
    Path(path).write_text("".join(space.encode_point(p) + "\n" for p in points))


def write_depth_reports_csv(path, reports: list[DepthReport]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(DEPTH_CSV_COLUMNS)
        for r in reports:
            writer.writerow([r.query_index, r.depth_num, r.depth_den, r.anchor1, r.anchor2])


def read_depth_reports_csv(path) -> list[DepthReport]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise DataError(f"{path}: empty depth file")
    if tuple(rows[0]) != DEPTH_CSV_COLUMNS:
        raise DataError(f"{path}: row 1: expected header {','.join(DEPTH_CSV_COLUMNS)}")
    reports = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            q, num, den, a1, a2 = (int(v) for v in row)
        except ValueError as exc:
            raise DataError(f"{path}: row {lineno}: bad depth row {row!r}") from exc
        reports.append(DepthReport(q, num, den, a1, a2))
    if not reports:
        raise DataError(f"{path}: no depth rows found")
    return reports


def depth_reports_to_json(reports: list[DepthReport]) -> list[dict]:
    return [
        {
            "query_index": r.query_index,
            "depth_num": r.depth_num,
            "depth_den": r.depth_den,
            "depth": r.value,
            "anchor1_index": r.anchor1,
            "anchor2_index": r.anchor2,
        }
        for r in reports
    ]


def estimator_result_to_json(space: Space, result: EstimatorResult) -> dict:
    extras = {
        key: (value if not isinstance(value, np.generic) else value.item())
        for key, value in result.extras.items()
    }
    return {
        "point": space.encode_point(result.point),
        "objective": result.objective,
        "iterations": result.iterations,
        "converged": result.converged,
        **extras,
    }


def test_result_to_json(result: TestResult) -> dict:
    return {
        "test": result.test,
        "statistic": result.statistic,
        "p_value": result.p_value,
        "n_permutations": result.n_permutations,
        "seed": result.seed,
        "group_labels": list(result.group_labels),
        "group_sizes": list(result.group_sizes),
    }


def write_csv_rows(path, columns, rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns))
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Reproducibility record written alongside every command output."""

    command: list
    config: dict
    seed: int | None
    inputs: dict = field(default_factory=dict)
    version: str = __version__
    schema: str = MANIFEST_SCHEMA
    wall_time_s: float = 0.0

    def write(self, output_path) -> Path:
        target = manifest_path_for(output_path)
        target.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return target


def manifest_path_for(output_path) -> Path:
    output_path = Path(output_path)
    if output_path.is_dir():
        return output_path / "manifest.json"
    return output_path.with_name(output_path.name + ".manifest.json")


class ManifestTimer:
    """Times a command body and records input digests for the manifest."""

    def __init__(self, command: list, config: dict, seed=None):
        self.manifest = RunManifest(command=list(command), config=dict(config), seed=seed)
        self._start = time.perf_counter()

    def add_input(self, path) -> None:
        self.manifest.inputs[str(path)] = sha256_file(path)

    def finish(self, output_path) -> Path:
        self.manifest.wall_time_s = round(time.perf_counter() - self._start, 6)
        return self.manifest.write(output_path)
