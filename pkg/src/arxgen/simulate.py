"""Benchmark data generation.

Datasets are produced the way a discrete-block benchmark would produce them:
a step in electrical power, zero-mean Gaussian noise added to that input, and
the noisy input driven through an :class:`~arxgen.discretize.ArxModel` from
rest. Noise is drawn with numpy's ``PCG64`` generator so a seed pins the
dataset exactly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.signal import lfilter

from .discretize import ArxModel, Method, Output, discretize
from .errors import ConfigError, NonPositiveParameter, SamplingMismatch
from .model import GeneratorParams, derived_constants_omega

RNG_ALGORITHM = "PCG64"
# relative tolerance when comparing two sampling intervals
H_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniformly sampled signal; sample ``i`` sits at ``t0 + i*h``."""

    h: float
    values: np.ndarray
    t0: float = 0.0
    unit: str = "p.u."

    def __post_init__(self):
        h = float(self.h)
        if not (h > 0.0 and math.isfinite(h)):
            raise NonPositiveParameter(f"sampling interval must be > 0, got {self.h!r}")
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.size == 0:
            raise ValueError("a time series needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("time series contains NaN or Inf")
        values.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.values.size)

    def with_values(self, values) -> "TimeSeries":
        return TimeSeries(h=self.h, values=values, t0=self.t0, unit=self.unit)

    def slice(self, start: int, stop: int) -> "TimeSeries":
        return TimeSeries(h=self.h, values=self.values[start:stop],
                          t0=self.t0 + start * self.h, unit=self.unit)


def same_sampling(a: float, b: float) -> bool:
    return abs(a - b) <= H_RTOL * max(abs(a), abs(b))


@dataclass(frozen=True)
class ScenarioConfig:
    """Step test definition.

    Defaults reproduce the benchmark: 0.2 p.u. step at t = 1 s, input noise
    variance 1e-4, 15 s of data. ``output_noise_variance`` is off by default.
    """

    step_amplitude: float = 0.2
    step_time: float = 1.0
    duration: float = 15.0
    noise_variance: float = 1e-4
    rng_seed: int = 0
    output_noise_variance: float = 0.0

    def __post_init__(self):
        if not (self.duration > self.step_time >= 0.0):
            raise ConfigError(
                f"need duration > step_time >= 0, got duration={self.duration}, "
                f"step_time={self.step_time}"
            )
        if self.noise_variance < 0.0 or self.output_noise_variance < 0.0:
            raise ConfigError("noise variances must be >= 0")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["rng_algorithm"] = RNG_ALGORITHM
        return d


def _n_samples(duration: float, h: float) -> int:
    # floor(duration/h) + 1, guarded against 15/0.1 = 149.99999...
    return int(math.floor(duration / h + 1e-9)) + 1


def step_signal(cfg: ScenarioConfig, h: float) -> TimeSeries:
    n = _n_samples(cfg.duration, h)
    t = h * np.arange(n)
    # sample instants that land on step_time up to rounding count as "after"
    on = t >= cfg.step_time - 1e-9 * h
    return TimeSeries(h=h, values=np.where(on, cfg.step_amplitude, 0.0))


def add_gaussian_noise(s: TimeSeries, variance: float, seed) -> TimeSeries:
    if variance < 0.0:
        raise ConfigError(f"variance must be >= 0, got {variance!r}")
    if variance == 0.0:
        return s
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, math.sqrt(variance), size=len(s))
    return s.with_values(s.values + noise)


def simulate_arx(m: ArxModel, u: TimeSeries) -> TimeSeries:
    """Run the difference equation of ``m`` from rest on input ``u``.

    For ``m == n`` the current input ``u(k)`` feeds through directly.
    """
    if not same_sampling(m.h, u.h):
        raise SamplingMismatch(f"model h = {m.h!r} but input h = {u.h!r}")
    b, a = m.lfilter_coefficients()
    return TimeSeries(h=u.h, values=lfilter(b, a, u.values), t0=u.t0, unit=u.unit)


def analytic_step_response_omega(p: GeneratorParams, amplitude: float, h: float, n: int) -> TimeSeries:
    """Exact continuous speed response to a step at ``t = 0``, sampled at ``k*h``.

    ``y(t) = amplitude * R * (1 - exp(-t/2T) (cos(w t) + k sin(w t)))``.
    """
    c = derived_constants_omega(p)
    t = h * np.arange(n)
    decay = np.exp(-t / (2.0 * p.T))
    y = amplitude * p.R * (1.0 - decay * (np.cos(c.omega * t) + c.k * np.sin(c.omega * t)))
    return TimeSeries(h=h, values=y)


def analytic_step_response_delta(p: GeneratorParams, amplitude: float, h: float, n: int) -> TimeSeries:
    """Exact continuous angle response to a step at ``t = 0``.

    ``y(t) = amplitude * R * (t + a - exp(-t/2T) (a cos(w t) + b sin(w t)))``
    with ``a = T - 2HR`` and ``b = (3T - 2HR) / (2T w)``.
    """
    w = derived_constants_omega(p).omega
    a = p.T - 2.0 * p.H * p.R
    b = (3.0 * p.T - 2.0 * p.H * p.R) / (2.0 * p.T) / w
    t = h * np.arange(n)
    decay = np.exp(-t / (2.0 * p.T))
    y = amplitude * p.R * (t + a - decay * (a * np.cos(w * t) + b * np.sin(w * t)))
    return TimeSeries(h=h, values=y)


@dataclass(frozen=True, eq=False)
class Dataset:
    u: TimeSeries
    y: TimeSeries
    model: ArxModel
    params: GeneratorParams
    config: ScenarioConfig

    def metadata(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "h": self.model.h,
            "method": self.model.method.value,
            "output": self.model.output.value,
            "scenario": self.config.as_dict(),
        }


def generate_dataset(p: GeneratorParams, h: float, cfg: ScenarioConfig | None = None,
                     method=Method.ZOH, output=Output.OMEGA) -> Dataset:
    """Step test on the discrete model of ``p`` built with ``method``.

    The noisy input is what drives the model, and it is also what gets
    recorded. Output noise, when enabled, uses an independent stream derived
    from the same seed.
    """
    cfg = cfg or ScenarioConfig()
    model = discretize(p, h, method, output)
    seeds = np.random.SeedSequence(cfg.rng_seed).spawn(2)
    u = add_gaussian_noise(step_signal(cfg, model.h), cfg.noise_variance, seeds[0])
    y = simulate_arx(model, u)
    if cfg.output_noise_variance > 0.0:
        y = add_gaussian_noise(y, cfg.output_noise_variance, seeds[1])
    return Dataset(u=u, y=y, model=model, params=p, config=cfg)
