"""Continuous-time generator model with primary frequency control.

The linearized single-machine model maps a change in electrical power
``dPe`` to a change in rotor speed ``dw`` through

    dw/dPe = (T s + 1) / (2 H T s^2 + 2 H s + 1/R)

with damping ``D`` set to zero. The rotor angle is the integral of the speed
deviation with unit gain, so ``dd/dPe = (dw/dPe) / s``. The nominal speed
``w0`` is not part of the model; angles come out in per-unit-speed seconds.

The DC gain from ``dPe`` to ``dw`` is ``+R``. A physical load increase that
should make the frequency dip must be fed in as a negative step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import DampingNotSupported, NonPositiveParameter, NotUnderdamped


@dataclass(frozen=True)
class GeneratorParams:
    """Inertia ``H`` (s), droop ``R`` (p.u.), governor lag ``T`` (s), damping ``D`` (p.u.).

    Construction fails unless ``H, R, T > 0``, ``D >= 0`` and ``2T > H R``
    (complex-conjugate poles).
    """

    H: float
    R: float
    T: float
    D: float = 0.0

    def __post_init__(self):
        for name in ("H", "R", "T", "D"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise NonPositiveParameter(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        for name in ("H", "R", "T"):
            if getattr(self, name) <= 0.0:
                raise NonPositiveParameter(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.D < 0.0:
            raise NonPositiveParameter(f"D must be >= 0, got {self.D!r}")
        if 2.0 * self.T - self.H * self.R <= 0.0:
            raise NotUnderdamped(
                f"2T - HR = {2.0 * self.T - self.H * self.R:.6g} <= 0; "
                "the model has real poles"
            )

    def as_dict(self) -> dict:
        return {"H": self.H, "R": self.R, "T": self.T, "D": self.D}


@dataclass(frozen=True)
class DerivedConstants:
    alpha: float
    omega: float
    k: float


@dataclass(frozen=True)
class ComplexPair:
    """One member of a conjugate pair, stored with ``im > 0``."""

    re: float
    im: float

    def as_complex(self) -> complex:
        return complex(self.re, self.im)


def validate_params(raw: Mapping[str, Any]) -> GeneratorParams:
    """Build a checked :class:`GeneratorParams` from a loose mapping.

    Missing ``D`` defaults to 0.
    """
    try:
        H, R, T = raw["H"], raw["R"], raw["T"]
    except KeyError as exc:
        raise NonPositiveParameter(f"missing parameter {exc.args[0]!r}") from None
    D = raw.get("D", 0.0)
    if D is None:
        D = 0.0
    try:
        return GeneratorParams(H=float(H), R=float(R), T=float(T), D=float(D))
    except (TypeError, ValueError) as exc:
        raise NonPositiveParameter(str(exc)) from None


def require_undamped(p: GeneratorParams) -> None:
    # every discretization and recovery formula assumes D = 0
    if p.D != 0.0:
        raise DampingNotSupported(f"estimation paths assume D = 0, got D = {p.D!r}")


def derived_constants_omega(p: GeneratorParams) -> DerivedConstants:
    """Constants of the speed-output step response.

    ``alpha = (HR - T)/(2HTR)``, ``omega = sqrt((2T - HR)/(4HRT^2))``,
    ``k = alpha/omega``.
    """
    H, R, T = p.H, p.R, p.T
    alpha = (H * R - T) / (2.0 * H * T * R)
    omega = math.sqrt((2.0 * T - H * R) / (4.0 * H * R * T * T))
    return DerivedConstants(alpha=alpha, omega=omega, k=alpha / omega)


def continuous_poles(p: GeneratorParams) -> ComplexPair:
    H, R, T = p.H, p.R, p.T
    re = -1.0 / (2.0 * T)
    im = math.sqrt(2.0 * H * T / R - H * H) / (2.0 * H * T)
    return ComplexPair(re=re, im=im)


def dc_gain_omega(p: GeneratorParams) -> float:
    return p.R


def transfer_function(p: GeneratorParams, output: str = "omega"):
    """Numerator and denominator of the continuous model in powers of ``s``.

    Highest power first, as used by ``scipy.signal``. ``output`` is
    ``"omega"`` (speed) or ``"delta"`` (angle, one extra pole at the origin).
    """
    require_undamped(p)
    num = np.array([p.T, 1.0])
    den = np.array([2.0 * p.H * p.T, 2.0 * p.H, 1.0 / p.R])
    if str(output).lower() == "delta":
        den = np.append(den, 0.0)
    elif str(output).lower() != "omega":
        raise ValueError(f"unknown output {output!r}")
    return num, den
