"""Playback validation: drive an estimated model with the measured input."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass

import numpy as np

from .discretize import Output, discretize
from .errors import LengthMismatch
from .model import GeneratorParams
from .simulate import TimeSeries, same_sampling, simulate_arx


@dataclass(frozen=True)
class FitReport:
    """``nrmse_fit = 100 * (1 - |y - yhat| / |y - mean(y)|)``, in percent."""

    rmse: float
    nrmse_fit: float
    max_abs_err: float

    def as_dict(self) -> dict:
        return asdict(self)


def playback(p: GeneratorParams, method, u: TimeSeries) -> TimeSeries:
    """Speed response of the ``method`` discretization of ``p`` to ``u``, from rest."""
    return simulate_arx(discretize(p, u.h, method, Output.OMEGA), u)


def fit_metrics(measured: TimeSeries, predicted: TimeSeries) -> FitReport:
    if len(measured) != len(predicted) or not same_sampling(measured.h, predicted.h):
        raise LengthMismatch(
            f"measured has {len(measured)} samples at h={measured.h!r}, "
            f"predicted has {len(predicted)} at h={predicted.h!r}"
        )
    y, yhat = measured.values, predicted.values
    err = y - yhat
    spread = np.linalg.norm(y - y.mean())
    if spread == 0.0:
        fit = 100.0 if not np.any(err) else -np.inf
    else:
        fit = 100.0 * (1.0 - np.linalg.norm(err) / spread)
    return FitReport(rmse=float(np.sqrt(np.mean(err ** 2))), nrmse_fit=float(fit),
                     max_abs_err=float(np.max(np.abs(err))))


def write_overlay_csv(path, measured: TimeSeries, predicted: TimeSeries,
                      metadata: dict | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if metadata is not None:
            fh.write("# arxgen-metadata: " + json.dumps(metadata, sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(["t", "measured", "predicted"])
        for row in zip(measured.t, measured.values, predicted.values):
            w.writerow([repr(float(v)) for v in row])
