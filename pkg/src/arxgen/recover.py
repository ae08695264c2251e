"""Physical parameters from ARX coefficients.

Each recovery inverts one forward map in :mod:`arxgen.discretize`:

* ZOH, speed output: ``T`` from ``a0``, then ``w`` from ``a1``, ``R`` from
  the DC gain and ``H`` from ``w``.
* Tustin, speed output: ``T`` from ``b2/b1``, the product ``HR`` from ``a1``,
  ``R`` from ``b2``, ``H = HR/R``.
* ZOH, angle output: ``T`` from ``a0``, ``w`` from ``a2``, ``HR`` from ``w``,
  ``R`` from ``b2``.
* Tustin, angle output: ``P = HRTk^3`` and ``Q = HRk^2`` from the linear
  system given by ``a2`` and ``a1``, then ``R`` from ``b3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .discretize import ORDERS, ArxModel, Method, Output
from .errors import (
    BranchViolation,
    DegenerateCoefficients,
    NonPhysical,
    NotUnderdamped,
    SingularRecovery,
)
from .model import GeneratorParams
from .regression import build_regression, residual_stats, solve_lse
from .simulate import TimeSeries

DEGENERATE_RTOL = 1e-12
SINGULAR_RTOL = 1e-12
# regressions with a scaled condition number above this get a warning
CONDITION_WARN = 1e10


def _physical(H: float, R: float, T: float) -> GeneratorParams:
    for name, value in (("H", H), ("R", R), ("T", T)):
        if not (math.isfinite(value) and value > 0.0):
            raise NonPhysical(f"recovered {name} = {value!r} is not a positive number "
                              f"(H={H!r}, R={R!r}, T={T!r})")
    try:
        return GeneratorParams(H=H, R=R, T=T, D=0.0)
    except NotUnderdamped as exc:
        raise NonPhysical(f"recovered parameters are not underdamped: {exc}") from None


def _arccos_branch(arg: float, h: float) -> float:
    if not -1.0 <= arg <= 1.0:
        raise BranchViolation(f"arccos argument {arg!r} outside [-1, 1]")
    omega = math.acos(arg) / h
    if omega == 0.0:
        raise NonPhysical("recovered damped frequency is zero (real double pole)")
    return omega


def recover_zoh_omega(c: Mapping[str, float], h: float) -> GeneratorParams:
    a1, a0, b1, b0 = c["a1"], c["a0"], c["b1"], c["b0"]
    if not a0 > 0.0:
        raise BranchViolation(f"a0 = {a0!r} must be positive for ln(a0)")
    if a0 >= 1.0:
        raise NonPhysical(f"a0 = {a0!r} >= 1 gives T <= 0 or infinite")
    T = -h / math.log(a0)
    omega = _arccos_branch(-a1 * math.exp(h / (2.0 * T)) / 2.0, h)
    denom = 1.0 + math.exp(-h / T) + a1
    if denom == 0.0:
        raise DegenerateCoefficients("1 + a0 + a1 = 0; DC gain undefined")
    R = (b1 + b0) / denom
    H = 2.0 * T / (R + 4.0 * R * T * T * omega * omega)
    return _physical(H, R, T)


def recover_tustin_omega(c: Mapping[str, float], h: float) -> GeneratorParams:
    a1, b2, b1, b0 = c["a1"], c["b2"], c["b1"], c["b0"]
    if abs(b1) <= DEGENERATE_RTOL * max(abs(b2), abs(b1), abs(b0)) or b1 == 0.0:
        raise DegenerateCoefficients(f"b1 = {b1!r} is numerically zero")
    k = 2.0 / h
    T = (2.0 * b2 / b1 - 1.0) / k
    if not T > 0.0:
        raise NonPhysical(f"recovered T = {T!r} from b2/b1 = {b2 / b1!r}")
    denom = 2.0 * a1 * T * k * k + 2.0 * a1 * k + 4.0 * T * k * k
    if denom == 0.0:
        raise DegenerateCoefficients("a1 leaves the HR product undetermined")
    hr = (2.0 - a1) / denom
    alpha = 2.0 * hr * T * k * k + 2.0 * hr * k + 1.0
    R = b2 * alpha / (1.0 + T * k)
    return _physical(hr / R, R, T)


def recover_zoh_delta(c: Mapping[str, float], h: float) -> GeneratorParams:
    a2, a0, b2 = c["a2"], c["a0"], c["b2"]
    if not a0 < 0.0:
        raise BranchViolation(f"a0 = {a0!r} must be negative (a0 = -exp(-h/T))")
    if a0 <= -1.0:
        raise NonPhysical(f"a0 = {a0!r} <= -1 gives T <= 0 or infinite")
    T = -h / math.log(-a0)
    e_half = math.exp(-h / (2.0 * T))
    omega = _arccos_branch(-(a2 + 1.0) / (2.0 * e_half), h)
    hr = 2.0 * T / (1.0 + 4.0 * omega * omega * T * T)
    a = T - 2.0 * hr
    b = (3.0 * T - 2.0 * hr) / (2.0 * T) / omega
    bracket = (a - a * e_half * math.cos(omega * h)
               - b * e_half * math.sin(omega * h) + h)
    if bracket == 0.0:
        raise DegenerateCoefficients("b2 carries no information about R")
    R = b2 / bracket
    return _physical(hr / R, R, T)


def recover_tustin_delta(c: Mapping[str, float], h: float) -> GeneratorParams:
    a2, a1, b3 = c["a2"], c["a1"], c["b3"]
    k = 2.0 / h
    # Cramer's rule on
    #   (2 a2 + 6) P + (2 a2 + 2) Q = k (1 - a2)
    #   (2 a1 - 6) P + (2 a1 + 2) Q = -k (1 + a1)
    # whose determinant reduces to 8 (2 a2 + a1 + 3)
    d = 2.0 * a2 + a1 + 3.0
    if abs(d) <= SINGULAR_RTOL * (2.0 * abs(a2) + abs(a1) + 3.0):
        raise SingularRecovery(f"determinant 8*(2 a2 + a1 + 3) = {8.0 * d!r} is numerically zero")
    s = a1 + a2
    if abs(s) <= SINGULAR_RTOL * max(abs(a1), abs(a2), 1.0):
        raise SingularRecovery("a1 + a2 = 0 leaves Q = HRk^2 at zero; T is undefined")
    P = k * (1.0 + a1) / (2.0 * d)
    Q = -k * s / d
    T = P / (Q * k)
    hr = Q / (k * k)
    if not (T > 0.0 and hr > 0.0):
        raise NonPhysical(f"recovered T = {T!r}, HR = {hr!r}")
    alpha = 2.0 * P + 2.0 * Q + k
    R = b3 * alpha / (1.0 + T * k)
    return _physical(hr / R, R, T)


_RECOVER = {
    (Method.ZOH, Output.OMEGA): recover_zoh_omega,
    (Method.TUSTIN, Output.OMEGA): recover_tustin_omega,
    (Method.ZOH, Output.DELTA): recover_zoh_delta,
    (Method.TUSTIN, Output.DELTA): recover_tustin_delta,
}


def recover(model: ArxModel) -> GeneratorParams:
    """Invert the forward map matching ``model.method`` and ``model.output``."""
    expected = ORDERS[model.method, model.output]
    if (model.n, model.m) != expected:
        raise ValueError(f"{model.method.value}/{model.output.value} needs orders {expected}, "
                         f"got {(model.n, model.m)}")
    return _RECOVER[model.method, model.output](model.coefficients(), model.h)


@dataclass
class EstimationResult:
    method: Method
    output: Output
    h: float
    coefficients: dict
    params: GeneratorParams | None
    residual: dict
    condition_estimate: float
    n_equations: int
    warnings: list = field(default_factory=list)
    error: str | None = None

    @property
    def model(self) -> ArxModel:
        n, m = ORDERS[self.method, self.output]
        return ArxModel.from_vector(list(self.coefficients.values()), n, m, self.h,
                                    self.output, self.method)

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "output": self.output.value,
            "h": self.h,
            "coefficients": dict(self.coefficients),
            "params": None if self.params is None else self.params.as_dict(),
            "residual": dict(self.residual),
            "condition_estimate": self.condition_estimate,
            "n_equations": self.n_equations,
            "warnings": list(self.warnings),
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "EstimationResult":
        params = d.get("params")
        return cls(
            method=Method.parse(d["method"]),
            output=Output.parse(d["output"]),
            h=float(d["h"]),
            coefficients={k: float(v) for k, v in d["coefficients"].items()},
            params=None if params is None else GeneratorParams(**params),
            residual=dict(d.get("residual", {})),
            condition_estimate=float(d.get("condition_estimate", float("nan"))),
            n_equations=int(d.get("n_equations", 0)),
            warnings=list(d.get("warnings", [])),
            error=d.get("error"),
        )


def fit_arx(u: TimeSeries, y: TimeSeries, method="zoh", output="omega"):
    """Least-squares ARX fit with the structure of ``(method, output)``.

    Returns ``(model, problem, solution)``.
    """
    method, output = Method.parse(method), Output.parse(output)
    n, m = ORDERS[method, output]
    prob = build_regression(y, u, n, m)
    sol = solve_lse(prob)
    model = ArxModel.from_vector(sol.x, n, m, y.h, output, method)
    return model, prob, sol


def estimate_parameters(u: TimeSeries, y: TimeSeries, method="zoh", output="omega",
                        strict: bool = True) -> EstimationResult:
    """Fit the ARX structure, then recover ``(H, R, T)``.

    With ``strict=False`` a recovery failure is recorded in ``result.error``
    and ``result.params`` is ``None`` instead of raising.
    """
    model, prob, sol = fit_arx(u, y, method, output)
    stats = residual_stats(prob, sol)
    warnings = []
    if sol.condition_estimate > CONDITION_WARN:
        warnings.append(f"regression condition estimate {sol.condition_estimate:.3g}")
    result = EstimationResult(
        method=model.method, output=model.output, h=model.h,
        coefficients=model.coefficients(), params=None,
        residual=stats.as_dict(), condition_estimate=sol.condition_estimate,
        n_equations=prob.rows, warnings=warnings,
    )
    try:
        result.params = recover(model)
    except (BranchViolation, NonPhysical, DegenerateCoefficients, SingularRecovery) as exc:
        if strict:
            raise
        result.error = f"{exc.code}: {exc}"
    return result
