"""Linear least-squares estimation of ARX coefficients.

For a model with denominator degree ``n`` and numerator degree ``m`` each
usable sample ``k`` gives one equation

    y(k) = -a_{n-1} y(k-1) - ... - a_0 y(k-n)
           + b_m u(k-n+m) + ... + b_0 u(k-n)

In the 1-based notation of the classical layout the first row for
``(n, m) = (2, 1)`` reads ``y(3) = [-y(2), -y(1), u(2), u(1)] x``; here the
arrays are 0-based, so row ``r`` corresponds to ``k = r + n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .discretize import coefficient_labels
from .errors import RankDeficient, SamplingMismatch, TooFewSamples
from .simulate import TimeSeries, same_sampling

RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class RegressionProblem:
    A: np.ndarray
    b: np.ndarray
    column_labels: tuple
    n: int
    m: int

    @property
    def rows(self) -> int:
        return self.A.shape[0]

    @property
    def cols(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True, eq=False)
class LseSolution:
    x: np.ndarray
    residual_norm: float
    condition_estimate: float
    rank: int


@dataclass(frozen=True)
class ResidualStats:
    rms: float
    max_abs: float

    def as_dict(self) -> dict:
        return {"rms": self.rms, "max_abs": self.max_abs}


def build_regression(y: TimeSeries, u: TimeSeries, n: int, m: int) -> RegressionProblem:
    if not same_sampling(y.h, u.h):
        raise SamplingMismatch(f"y has h = {y.h!r}, u has h = {u.h!r}")
    if len(y) != len(u):
        raise SamplingMismatch(f"y has {len(y)} samples, u has {len(u)}")
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    cols = n + m + 1
    N = len(y)
    if N < n + cols:
        raise TooFewSamples(f"{N} samples cannot determine {cols} coefficients at order {n}")
    yv, uv = y.values, u.values
    rows = N - n
    A = np.empty((rows, cols))
    for i in range(1, n + 1):
        A[:, i - 1] = -yv[n - i:N - i]
    for j in range(m + 1):
        lag = n - m + j
        A[:, n + j] = uv[n - lag:N - lag]
    b = yv[n:].copy()
    A.setflags(write=False)
    b.setflags(write=False)
    return RegressionProblem(A=A, b=b, column_labels=tuple(coefficient_labels(n, m)), n=n, m=m)


def solve_lse(prob: RegressionProblem) -> LseSolution:
    """Least-squares solution via column-pivoted QR.

    Columns are scaled to unit norm first so the rank test does not depend
    on the units of ``u`` and ``y``.
    """
    A, b = prob.A, prob.b
    rows, cols = A.shape
    if rows < cols:
        raise RankDeficient(f"{rows} equations for {cols} unknowns")
    scale = np.linalg.norm(A, axis=0)
    if np.any(scale == 0.0):
        dead = [prob.column_labels[i] for i in np.flatnonzero(scale == 0.0)]
        raise RankDeficient(f"regressor columns {dead} are identically zero (no excitation)")
    As = A / scale
    Q, R, perm = scipy.linalg.qr(As, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > RANK_RTOL * diag[0]))
    if rank < cols:
        raise RankDeficient(f"effective rank {rank} < {cols} unknowns")
    z = scipy.linalg.solve_triangular(R, Q.T @ b)
    xs = np.empty(cols)
    xs[perm] = z
    x = xs / scale
    residual = A @ x - b
    sv = np.linalg.svd(R, compute_uv=False)
    return LseSolution(
        x=x,
        residual_norm=float(np.linalg.norm(residual)),
        condition_estimate=float(sv[0] / sv[-1]),
        rank=rank,
    )


def residual_stats(prob: RegressionProblem, sol: LseSolution) -> ResidualStats:
    r = prob.A @ sol.x - prob.b
    return ResidualStats(rms=sol.residual_norm / np.sqrt(prob.rows),
                         max_abs=float(np.max(np.abs(r))) if r.size else 0.0)


def write_regression_csv(prob: RegressionProblem, path) -> None:
    """Dump ``[A | b]`` with a header naming each column."""
    header = ",".join(prob.column_labels + ("rhs",))
    data = np.column_stack([prob.A, prob.b])
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")
