"""PMU recordings: CSV ingestion and preparation for estimation.

The default input layout is a CSV with columns ``t,freq_hz,p_mw`` (time in
seconds, frequency in Hz, active power in MW), plus an optional JSON sidecar
``{"f_nom": 60, "s_base": 100, "prescaled": false}``. Column names can be
remapped with a schema dict ``{"t": ..., "freq": ..., "power": ...}``.

Preparation turns a recording into deviation signals in per unit:

* ``dw = (f - f_pre) / f_nom`` where ``f_pre`` is the mean frequency over the
  first ``pre_event_samples`` samples;
* ``dPe = (P - P_pre) / s_base`` (no division when ``prescaled``);
* the window starts ``pre`` seconds before the first sample where ``|dPe|``
  exceeds the event threshold and ends ``post`` seconds after it.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .discretize import zoh_omega
from .errors import (
    IrregularSampling,
    MalformedRow,
    MissingColumn,
    NoEventFound,
    NonMonotoneTime,
    NonPositiveParameter,
    TooFewSamples,
    WindowTooShort,
)
from .model import GeneratorParams
from .simulate import TimeSeries, simulate_arx

DEFAULT_SCHEMA = {"t": "t", "freq": "freq_hz", "power": "p_mw"}
JITTER_RTOL = 0.01
DEFAULT_THRESHOLD = 0.02


@dataclass(frozen=True)
class PmuMeta:
    f_nom: float = 60.0
    s_base: float = 100.0
    prescaled: bool = False
    source: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class PmuRecording:
    timestamps: np.ndarray
    freq: np.ndarray
    power: np.ndarray
    meta: PmuMeta = field(default_factory=PmuMeta)

    def __post_init__(self):
        arrays = {}
        for name in ("timestamps", "freq", "power"):
            a = np.array(getattr(self, name), dtype=np.float64).ravel()
            a.setflags(write=False)
            arrays[name] = a
            object.__setattr__(self, name, a)
        if not len(arrays["timestamps"]) == len(arrays["freq"]) == len(arrays["power"]):
            raise ValueError("timestamps, freq and power must have equal length")
        bad = np.flatnonzero(np.diff(arrays["timestamps"]) <= 0.0)
        if bad.size:
            raise NonMonotoneTime(
                f"timestamps not strictly increasing at sample(s) {(bad + 1).tolist()[:10]}"
            )

    def __len__(self):
        return self.timestamps.size


def _data_lines(fh):
    for line in fh:
        if not line.lstrip().startswith("#"):
            yield line


def read_meta_sidecar(path) -> PmuMeta:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    known = {k: d[k] for k in ("f_nom", "s_base", "prescaled", "source") if k in d}
    return PmuMeta(**known)


def write_meta_sidecar(meta: PmuMeta, path) -> None:
    Path(path).write_text(json.dumps(meta.as_dict(), indent=2) + "\n", encoding="utf-8")


def read_pmu_csv(path, schema: Mapping[str, str] | None = None,
                 meta: PmuMeta | None = None) -> PmuRecording:
    """Parse a PMU CSV; lines starting with ``#`` are ignored.

    All malformed rows are reported together, numbered as file lines.
    """
    names = {**DEFAULT_SCHEMA, **(schema or {})}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(_data_lines(fh))
        header = reader.fieldnames or []
        missing = [names[k] for k in ("t", "freq", "power") if names[k] not in header]
        if missing:
            raise MissingColumn(f"{path}: missing column(s) {missing}; header is {header}")
        cols = {"t": [], "freq": [], "power": []}
        bad = []
        for row in reader:
            try:
                vals = {k: float(row[names[k]]) for k in cols}
            except (TypeError, ValueError):
                bad.append(reader.line_num)
                continue
            if not all(math.isfinite(v) for v in vals.values()):
                bad.append(reader.line_num)
                continue
            for k, v in vals.items():
                cols[k].append(v)
    if bad:
        raise MalformedRow(f"{path}: non-numeric or non-finite values on line(s) {bad[:20]}")
    return PmuRecording(np.array(cols["t"]), np.array(cols["freq"]), np.array(cols["power"]),
                        meta or PmuMeta())


def write_pmu_csv(rec: PmuRecording, path, schema: Mapping[str, str] | None = None) -> None:
    names = {**DEFAULT_SCHEMA, **(schema or {})}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([names["t"], names["freq"], names["power"]])
        for row in zip(rec.timestamps, rec.freq, rec.power):
            w.writerow([repr(float(v)) for v in row])


def infer_sampling(timestamps) -> float:
    """Median timestamp spacing; every spacing must lie within 1% of it."""
    t = np.asarray(timestamps, dtype=np.float64)
    if t.size < 3:
        raise TooFewSamples(f"need at least 3 timestamps, got {t.size}")
    dt = np.diff(t)
    h = float(np.median(dt))
    if not h > 0.0:
        raise NonMonotoneTime("median timestamp spacing is not positive")
    off = np.flatnonzero(np.abs(dt - h) > JITTER_RTOL * h)
    if off.size:
        raise IrregularSampling(
            f"{off.size} spacing(s) deviate from h = {h:.6g} s by more than "
            f"{JITTER_RTOL:.0%}, first after sample {int(off[0])}"
        )
    return h


def to_per_unit(rec: PmuRecording) -> tuple[np.ndarray, np.ndarray]:
    if not (rec.meta.f_nom > 0.0 and rec.meta.s_base > 0.0):
        raise NonPositiveParameter("f_nom and s_base must be positive")
    freq_pu = rec.freq / rec.meta.f_nom
    power_pu = rec.power if rec.meta.prescaled else rec.power / rec.meta.s_base
    return freq_pu, power_pu


def detrend(series: TimeSeries, pre_event_samples: int) -> TimeSeries:
    if pre_event_samples < 10:
        raise WindowTooShort(f"pre_event_samples must be >= 10, got {pre_event_samples}")
    if pre_event_samples > len(series):
        raise WindowTooShort(
            f"series has {len(series)} samples, fewer than pre_event_samples={pre_event_samples}"
        )
    base = float(np.mean(series.values[:pre_event_samples]))
    return series.with_values(series.values - base)


@dataclass(frozen=True)
class EventWindow:
    """Half-open sample range ``[start, stop)`` around the event ``anchor``."""

    anchor: int
    start: int
    stop: int

    def as_dict(self) -> dict:
        return asdict(self)


def select_event_window(u: TimeSeries, threshold: float = DEFAULT_THRESHOLD,
                        pre: float = 1.0, post: float = 60.0) -> EventWindow:
    """Window around the first sample where the deviation ``|u|`` exceeds ``threshold``.

    ``u`` is expected to be detrended already. When several disturbances are
    present the first one anchors the window.
    """
    if not threshold > 0.0:
        raise ValueError(f"threshold must be > 0, got {threshold!r}")
    hits = np.flatnonzero(np.abs(u.values) > threshold)
    if hits.size == 0:
        raise NoEventFound(f"|u| never exceeds {threshold!r}")
    anchor = int(hits[0])
    start = max(0, anchor - int(round(pre / u.h)))
    stop = min(len(u), anchor + int(round(post / u.h)) + 1)
    return EventWindow(anchor=anchor, start=start, stop=stop)


@dataclass(frozen=True, eq=False)
class PreparedDataset:
    u: TimeSeries
    y: TimeSeries
    h: float
    window: EventWindow
    metadata: dict


def prepare_dataset(rec: PmuRecording, threshold: float = DEFAULT_THRESHOLD,
                    pre: float = 1.0, post: float = 60.0,
                    pre_event_samples: int = 30) -> PreparedDataset:
    """Per-unit deviation signals ``(dPe, dw)`` cut to the event window."""
    h = infer_sampling(rec.timestamps)
    freq_pu, power_pu = to_per_unit(rec)
    t0 = float(rec.timestamps[0])
    u = detrend(TimeSeries(h=h, values=power_pu, t0=t0), pre_event_samples)
    y = detrend(TimeSeries(h=h, values=freq_pu, t0=t0), pre_event_samples)
    win = select_event_window(u, threshold, pre, post)
    meta = {
        "source": rec.meta.source,
        "f_nom": rec.meta.f_nom,
        "s_base": rec.meta.s_base,
        "prescaled": rec.meta.prescaled,
        "normalization": "dw = (f - f_pre)/f_nom; dPe = (P - P_pre)/s_base; "
                         f"pre-event means over the first {pre_event_samples} samples",
        "f_pre_hz": float(np.mean(rec.freq[:pre_event_samples])),
        "p_pre": float(np.mean(rec.power[:pre_event_samples])),
        "h": h,
        "threshold": threshold,
        "window": win.as_dict(),
    }
    return PreparedDataset(u=u.slice(win.start, win.stop), y=y.slice(win.start, win.stop),
                           h=h, window=win, metadata=meta)


def synthetic_recording(p: GeneratorParams, h: float = 1.0 / 30.0, duration: float = 40.0,
                        event_time: float = 5.0, step_pu: float = -0.2,
                        f_nom: float = 60.0, s_base: float = 100.0,
                        p0_mw: float = 250.0, f0_hz: float = 60.002,
                        load_noise_var: float = 1e-5, power_noise_pu: float = 5e-4,
                        freq_noise_hz: float = 1e-4, seed=0) -> PmuRecording:
    """Pseudo-PMU recording of a power step seen through the ZOH model of ``p``.

    The true power deviation is the step plus small random load variation;
    it drives the model. Independent Gaussian measurement noise is then
    added to both recorded channels.
    """
    model = zoh_omega(p, h)
    n = int(math.floor(duration / h + 1e-9)) + 1
    t = h * np.arange(n)
    rng = np.random.default_rng(seed)
    dp_true = np.where(t >= event_time - 1e-9 * h, step_pu, 0.0)
    dp_true = dp_true + rng.normal(0.0, math.sqrt(load_noise_var), n)
    dw = simulate_arx(model, TimeSeries(h=h, values=dp_true)).values
    power = (p0_mw / s_base + dp_true + rng.normal(0.0, power_noise_pu, n)) * s_base
    freq = f0_hz + f_nom * dw + rng.normal(0.0, freq_noise_hz, n)
    meta = PmuMeta(f_nom=f_nom, s_base=s_base, prescaled=False, source="synthetic")
    return PmuRecording(t, freq, power, meta)
