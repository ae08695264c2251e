"""Exact discrete ARX forms of the generator model.

Four coefficient sets are available, one per (method, output) pair:

=========  ======  ==========================================  ========
method     output  transfer function                           (n, m)
=========  ======  ==========================================  ========
ZOH        omega   (b1 z + b0) / (z^2 + a1 z + a0)             (2, 1)
Tustin     omega   (b2 z^2 + b1 z + b0) / (z^2 + a1 z + a0)    (2, 2)
ZOH        delta   (b2 z^2 + ...) / (z^3 + a2 z^2 + ...)       (3, 2)
Tustin     delta   (b3 z^3 + ...) / (z^3 + a2 z^2 + ...)       (3, 3)
=========  ======  ==========================================  ========

Coefficient sequences are always stored highest power first; the leading
``1`` of the monic denominator is implicit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import FoldedSampling, NonPositiveParameter
from .model import GeneratorParams, derived_constants_omega, require_undamped


class Method(str, enum.Enum):
    ZOH = "zoh"
    TUSTIN = "tustin"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"method must be 'zoh' or 'tustin', got {value!r}") from None


class Output(str, enum.Enum):
    OMEGA = "omega"
    DELTA = "delta"

    @classmethod
    def parse(cls, value) -> "Output":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"output must be 'omega' or 'delta', got {value!r}") from None


# (n, m) for each structure
ORDERS = {
    (Method.ZOH, Output.OMEGA): (2, 1),
    (Method.TUSTIN, Output.OMEGA): (2, 2),
    (Method.ZOH, Output.DELTA): (3, 2),
    (Method.TUSTIN, Output.DELTA): (3, 3),
}


def coefficient_labels(n: int, m: int) -> list[str]:
    return [f"a{i}" for i in range(n - 1, -1, -1)] + [f"b{j}" for j in range(m, -1, -1)]


@dataclass(frozen=True)
class ArxModel:
    """Discrete rational model ``num(z) / den(z)`` sampled every ``h`` seconds.

    ``den`` holds ``[a_{n-1}, ..., a_0]`` of a monic degree-``n`` polynomial,
    ``num`` holds ``[b_m, ..., b_0]``.
    """

    h: float
    den: tuple
    num: tuple
    output: Output = Output.OMEGA
    method: Method = Method.ZOH

    def __post_init__(self):
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "den", tuple(float(c) for c in self.den))
        object.__setattr__(self, "num", tuple(float(c) for c in self.num))
        object.__setattr__(self, "output", Output.parse(self.output))
        object.__setattr__(self, "method", Method.parse(self.method))
        if not (self.h > 0.0 and math.isfinite(self.h)):
            raise NonPositiveParameter(f"sampling interval must be > 0, got {self.h!r}")
        if len(self.den) < 1 or len(self.num) < 1 or len(self.num) - 1 > len(self.den):
            raise ValueError(
                f"need numerator degree <= denominator degree, got num={self.num}, den={self.den}"
            )
        if not all(math.isfinite(c) for c in self.den + self.num):
            raise ValueError("coefficients must be finite")

    @property
    def n(self) -> int:
        return len(self.den)

    @property
    def m(self) -> int:
        return len(self.num) - 1

    @property
    def labels(self) -> list[str]:
        return coefficient_labels(self.n, self.m)

    @property
    def vector(self) -> np.ndarray:
        """Coefficients in regression order ``[a_{n-1}..a_0, b_m..b_0]``."""
        return np.array(self.den + self.num)

    def coefficients(self) -> dict[str, float]:
        return dict(zip(self.labels, self.den + self.num))

    @classmethod
    def from_vector(cls, x: Sequence[float], n: int, m: int, h: float,
                    output=Output.OMEGA, method=Method.ZOH) -> "ArxModel":
        x = list(map(float, x))
        if len(x) != n + m + 1:
            raise ValueError(f"expected {n + m + 1} coefficients, got {len(x)}")
        return cls(h=h, den=x[:n], num=x[n:], output=output, method=method)

    def lfilter_coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        """``(b, a)`` in powers of ``z^-1`` for :func:`scipy.signal.lfilter`."""
        a = np.concatenate(([1.0], self.den))
        b = np.concatenate((np.zeros(self.n - self.m), self.num))
        return b, a

    def poles(self) -> np.ndarray:
        return np.roots(np.concatenate(([1.0], self.den)))

    def evaluate(self, z: complex) -> complex:
        return np.polyval(self.num, z) / np.polyval(np.concatenate(([1.0], self.den)), z)

    def dc_gain(self) -> float:
        return float(np.real(self.evaluate(1.0)))

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "method": self.method.value,
            "output": self.output.value,
            "den": list(self.den),
            "num": list(self.num),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ArxModel":
        return cls(h=d["h"], den=d["den"], num=d["num"], output=d["output"], method=d["method"])


def _check_h(h: float) -> float:
    h = float(h)
    if not (h > 0.0 and math.isfinite(h)):
        raise NonPositiveParameter(f"sampling interval must be > 0, got {h!r}")
    return h


def _check_folding(omega: float, h: float) -> None:
    # arccos in the recovery is only invertible for omega*h in [0, pi)
    if omega * h >= math.pi:
        raise FoldedSampling(
            f"omega*h = {omega * h:.6g} >= pi; the damped oscillation folds at h = {h!r}"
        )


def zoh_omega(p: GeneratorParams, h: float) -> ArxModel:
    require_undamped(p)
    h = _check_h(h)
    c = derived_constants_omega(p)
    _check_folding(c.omega, h)
    R, T = p.R, p.T
    e_half = math.exp(-h / (2.0 * T))
    e_full = math.exp(-h / T)
    ec = e_half * math.cos(c.omega * h)
    es = e_half * math.sin(c.omega * h)
    a1 = -2.0 * ec
    a0 = e_full
    b1 = R * (1.0 - ec - c.k * es)
    b0 = R * (e_full - ec + c.k * es)
    return ArxModel(h=h, den=(a1, a0), num=(b1, b0), output=Output.OMEGA, method=Method.ZOH)


def tustin_omega(p: GeneratorParams, h: float) -> ArxModel:
    require_undamped(p)
    h = _check_h(h)
    H, R, T = p.H, p.R, p.T
    k = 2.0 / h
    hr = H * R
    alpha = 2.0 * hr * T * k * k + 2.0 * hr * k + 1.0
    a1 = (2.0 - 4.0 * hr * T * k * k) / alpha
    a0 = (2.0 * hr * T * k * k - 2.0 * hr * k + 1.0) / alpha
    b2 = R * (1.0 + T * k) / alpha
    b1 = 2.0 * R / alpha
    b0 = R * (1.0 - T * k) / alpha
    return ArxModel(h=h, den=(a1, a0), num=(b2, b1, b0), output=Output.OMEGA, method=Method.TUSTIN)


def zoh_delta(p: GeneratorParams, h: float) -> ArxModel:
    """ZOH model of the angle output.

    Note the constant named ``alpha`` here, ``(3T - 2HR)/(2T)``, is not the
    speed-output ``alpha``.
    """
    require_undamped(p)
    h = _check_h(h)
    H, R, T = p.H, p.R, p.T
    omega = derived_constants_omega(p).omega
    _check_folding(omega, h)
    a = T - 2.0 * H * R
    alpha = (3.0 * T - 2.0 * H * R) / (2.0 * T)
    b = alpha / omega
    e_half = math.exp(-h / (2.0 * T))
    e_full = math.exp(-h / T)
    ec = e_half * math.cos(omega * h)
    es = e_half * math.sin(omega * h)
    a2 = -2.0 * ec - 1.0
    a1 = e_full + 2.0 * ec
    a0 = -e_full
    b2 = R * (a - a * ec - b * es + h)
    b1 = R * (-a + a * e_full - 2.0 * h * ec + 2.0 * b * es)
    b0 = R * ((h - a) * e_full + a * ec - b * es)
    return ArxModel(h=h, den=(a2, a1, a0), num=(b2, b1, b0), output=Output.DELTA, method=Method.ZOH)


def tustin_delta(p: GeneratorParams, h: float) -> ArxModel:
    require_undamped(p)
    h = _check_h(h)
    H, R, T = p.H, p.R, p.T
    k = 2.0 / h
    hr = H * R
    big_p = hr * T * k ** 3
    big_q = hr * k * k
    alpha = 2.0 * big_p + 2.0 * big_q + k
    a2 = (-6.0 * big_p - 2.0 * big_q + k) / alpha
    a1 = (6.0 * big_p - 2.0 * big_q - k) / alpha
    a0 = (-2.0 * big_p + 2.0 * big_q - k) / alpha
    b3 = R * (1.0 + T * k) / alpha
    b2 = R * (3.0 + T * k) / alpha
    b1 = R * (3.0 - T * k) / alpha
    b0 = R * (1.0 - T * k) / alpha
    return ArxModel(h=h, den=(a2, a1, a0), num=(b3, b2, b1, b0),
                    output=Output.DELTA, method=Method.TUSTIN)


_FORWARD = {
    (Method.ZOH, Output.OMEGA): zoh_omega,
    (Method.TUSTIN, Output.OMEGA): tustin_omega,
    (Method.ZOH, Output.DELTA): zoh_delta,
    (Method.TUSTIN, Output.DELTA): tustin_delta,
}


def discretize(p: GeneratorParams, h: float, method="zoh", output="omega") -> ArxModel:
    return _FORWARD[Method.parse(method), Output.parse(output)](p, h)
