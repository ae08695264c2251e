"""Dataset and result files.

Dataset CSVs have the header ``t,u,y`` with every value written in shortest
round-trip form. A single leading comment line
``# arxgen-metadata: {...}`` carries a JSON metadata block; readers that do
not know about it can skip ``#`` lines.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DataError, MalformedRow, MissingColumn
from .pmu_io import infer_sampling
from .simulate import TimeSeries, same_sampling

META_PREFIX = "# arxgen-metadata: "


def tool_metadata(config: dict | None = None) -> dict:
    return {"tool": "arxgen", "version": __version__, "config": config or {}}


def write_dataset_csv(path, u: TimeSeries, y: TimeSeries, metadata: dict | None = None) -> None:
    if len(u) != len(y) or not same_sampling(u.h, y.h):
        raise DataError("u and y must share length and sampling interval")
    meta = dict(metadata or {})
    meta.setdefault("h", u.h)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(META_PREFIX + json.dumps(meta, sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(["t", "u", "y"])
        for row in zip(u.t, u.values, y.values):
            w.writerow([repr(float(v)) for v in row])


def read_metadata(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(META_PREFIX):
                return json.loads(line[len(META_PREFIX):])
            if not line.startswith("#"):
                break
    return {}


def read_dataset_csv(path) -> tuple[TimeSeries, TimeSeries, dict]:
    """Return ``(u, y, metadata)``.

    ``h`` comes from the metadata block when present and consistent with the
    time column, otherwise from the time column.
    """
    path = Path(path)
    meta = read_metadata(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(line for line in fh if not line.startswith("#"))
        header = reader.fieldnames or []
        missing = [c for c in ("t", "u", "y") if c not in header]
        if missing:
            raise MissingColumn(f"{path}: missing column(s) {missing}; header is {header}")
        rows, bad = [], []
        for row in reader:
            try:
                rows.append((float(row["t"]), float(row["u"]), float(row["y"])))
            except (TypeError, ValueError):
                bad.append(reader.line_num)
    if bad:
        raise MalformedRow(f"{path}: malformed line(s) {bad[:20]}")
    data = np.array(rows, dtype=np.float64).reshape(-1, 3)
    if not np.all(np.isfinite(data)):
        raise MalformedRow(f"{path}: NaN or Inf values")
    t = data[:, 0]
    h = infer_sampling(t)
    if "h" in meta and abs(float(meta["h"]) - h) <= 0.01 * h:
        h = float(meta["h"])
    t0 = float(t[0])
    return (TimeSeries(h=h, values=data[:, 1], t0=t0), TimeSeries(h=h, values=data[:, 2], t0=t0),
            meta)


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
