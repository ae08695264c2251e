"""Synchronous-generator parameter identification through discrete ARX models.

The continuous speed/angle model of a generator with primary frequency
control is discretized (ZOH or Tustin), its ARX coefficients are estimated by
linear least squares, and inertia ``H``, droop ``R`` and governor time
constant ``T`` are recovered from them.
"""

__version__ = "0.1.0"

from .discretize import ArxModel, Method, Output, discretize
from .errors import ArxgenError
from .model import GeneratorParams, validate_params
from .recover import EstimationResult, estimate_parameters, fit_arx, recover
from .simulate import ScenarioConfig, TimeSeries, generate_dataset, simulate_arx
from .validate import FitReport, fit_metrics, playback

__all__ = [
    "ArxModel",
    "ArxgenError",
    "EstimationResult",
    "FitReport",
    "GeneratorParams",
    "Method",
    "Output",
    "ScenarioConfig",
    "TimeSeries",
    "discretize",
    "estimate_parameters",
    "fit_arx",
    "fit_metrics",
    "generate_dataset",
    "playback",
    "recover",
    "simulate_arx",
    "validate_params",
]
