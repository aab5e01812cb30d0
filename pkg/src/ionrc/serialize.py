"""Audit-friendly persistence: matrices, weight bundles, series, metrics.

Matrices travel as CSV with a leading ``shape`` row followed by row-major
values, or as the JSON equivalent {"shape": [r, c], "data": [...]}. Floats
are written with repr so every file round-trips bit for bit. Metrics files
are canonical JSON (sorted keys, no timestamps), which makes determinism
checkable by byte comparison.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import IngestionError
from .reservoir import ReservoirWeights
from .tasks import LabeledSeries


def plain(obj):
    """Recursively convert numpy containers/scalars to built-in types."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def canonical_json(payload: dict) -> str:
    """Deterministic JSON text for byte-comparable artifacts."""
    return json.dumps(plain(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_metrics_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(payload))
    return path


# ---------------------------------------------------------------------------
# matrices


def matrix_payload(matrix: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    return {"shape": list(m.shape), "data": [float(v) for v in m.ravel()]}


def matrix_from_payload(payload: dict) -> np.ndarray:
    shape = tuple(int(s) for s in payload["shape"])
    data = np.array(payload["data"], dtype=float)
    if data.size != int(np.prod(shape)):
        raise IngestionError(
            f"matrix payload has {data.size} values for shape {shape}"
        )
    return data.reshape(shape)


def write_matrix_csv(path: str | Path, matrix: np.ndarray) -> Path:
    path = Path(path)
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["shape", m.shape[0], m.shape[1]])
        for row in m:
            writer.writerow([repr(float(v)) for v in row])
    return path


def read_matrix_csv(path: str | Path) -> np.ndarray:
    path = Path(path)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[0] != "shape" or len(header) != 3:
            raise IngestionError(f"{path.name}: expected a 'shape,rows,cols' header row")
        rows, cols = int(header[1]), int(header[2])
        values = [[float(v) for v in row] for row in reader if row]
    m = np.array(values, dtype=float)
    if m.shape != (rows, cols):
        raise IngestionError(
            f"{path.name}: header says {(rows, cols)}, file holds {m.shape}"
        )
    return m


# ---------------------------------------------------------------------------
# weight bundles


def weights_payload(weights: ReservoirWeights) -> dict:
    return {
        "w": matrix_payload(weights.w),
        "w_in": matrix_payload(weights.w_in),
        "timescales_s": [float(c) for c in weights.timescales],
        "leak_rate": float(weights.leak_rate),
        "stepsize_s": float(weights.stepsize),
        "input_scale": float(weights.input_scale),
        "sparsity": float(weights.sparsity),
    }


def weights_from_payload(payload: dict) -> ReservoirWeights:
    return ReservoirWeights(
        w=matrix_from_payload(payload["w"]),
        w_in=matrix_from_payload(payload["w_in"]),
        leak_rate=float(payload["leak_rate"]),
        stepsize=float(payload["stepsize_s"]),
        timescales=np.array(payload["timescales_s"], dtype=float),
        input_scale=float(payload["input_scale"]),
        sparsity=float(payload["sparsity"]),
    )


def write_weights_json(path: str | Path, weights: ReservoirWeights) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(weights_payload(weights)))
    return path


def read_weights_json(path: str | Path) -> ReservoirWeights:
    return weights_from_payload(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# labeled series


def write_series_csv(path: str | Path, series: LabeledSeries) -> Path:
    """CSV of (t, u..., y...) plus a JSON sidecar holding the metadata."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = (
        ["t"]
        + [f"u_{j}" for j in range(series.n_inputs)]
        + [f"y_{j}" for j in range(series.n_targets)]
    )
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for i in range(series.length):
            row = [series.t[i], *series.u[i], *series.y[i]]
            writer.writerow([repr(float(v)) for v in row])
    sidecar = {
        "stepsize_s": float(series.stepsize),
        "washout_steps": int(series.washout_steps),
        "n_inputs": int(series.n_inputs),
        "n_targets": int(series.n_targets),
        "metadata": plain(series.metadata),
    }
    path.with_suffix(".json").write_text(canonical_json(sidecar))
    return path


def read_series_csv(path: str | Path) -> LabeledSeries:
    path = Path(path)
    sidecar_path = path.with_suffix(".json")
    if not sidecar_path.exists():
        raise IngestionError(f"missing metadata sidecar {sidecar_path.name}")
    sidecar = json.loads(sidecar_path.read_text())
    k, l = int(sidecar["n_inputs"]), int(sidecar["n_targets"])
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[0] != "t" or len(header) != 1 + k + l:
            raise IngestionError(f"{path.name}: header does not match sidecar shapes")
        values = [[float(v) for v in row] for row in reader if row]
    m = np.array(values, dtype=float)
    return LabeledSeries(
        t=m[:, 0],
        u=m[:, 1 : 1 + k],
        y=m[:, 1 + k :],
        stepsize=float(sidecar["stepsize_s"]),
        washout_steps=int(sidecar["washout_steps"]),
        metadata=sidecar.get("metadata", {}),
    )


def write_table_csv(path: str | Path, columns: dict[str, np.ndarray]) -> Path:
    """Columnar CSV for plot data; numeric columns get repr, text stays as is."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    length = arrays[0].shape[0]
    for n, a in zip(names, arrays):
        if a.shape[0] != length:
            raise IngestionError(f"column {n!r} has {a.shape[0]} rows, expected {length}")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(names)
        for i in range(length):
            writer.writerow(
                [
                    repr(float(a[i])) if np.issubdtype(a.dtype, np.number) else str(a[i])
                    for a in arrays
                ]
            )
    return path


def read_table_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Inverse of write_table_csv; columns come back numeric where possible."""
    path = Path(path)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header:
            raise IngestionError(f"{path.name} is empty")
        rows = [row for row in reader if row]
    out: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        column = [row[j] for row in rows]
        try:
            out[name] = np.array([float(v) for v in column])
        except ValueError:
            out[name] = np.array(column)
    return out
