"""Spectral cut-off estimators of a density and of a survival function.

All four estimators are truncated inverse Mellin transforms of an
estimate of ``M_X``:

* known error:   ``M_Y_hat * dagger(M_U)``
* unknown error: ``M_Y_hat * dagger(M_U_hat) * 1_mask`` (see :func:`~.empirical.mx_hat`)

Survival estimates invert ``M_X(t) / (c - 1 + 2 pi i t)`` along the line
``c - 1`` and therefore need ``c > 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .empirical import ThresholdMask, mx_tilde
from .mellin_core import (TWO_PI, MellinFn, Weight, _frozen, dagger,
                          inverse_transform, l2_norm_sq)

KINDS = ("density-known", "density-unknown", "survival-known", "survival-unknown")


def default_x_points(lo: float = 0.01, hi: float = 8.0, num: int = 400) -> np.ndarray:
    return np.linspace(lo, hi, num)


@dataclass(frozen=True)
class CurveEstimate:
    x_points: np.ndarray
    values: np.ndarray
    cutoff_k: float
    c: float
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown estimate kind {self.kind!r}")
        if self.kind.startswith("survival") and not self.c > 1:
            raise ValueError("survival estimates require c > 1")
        vals = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError("estimate has non-finite values")
        object.__setattr__(self, "x_points", _frozen(np.asarray(self.x_points, dtype=float)))
        object.__setattr__(self, "values", _frozen(vals))


def _invert(mx: MellinFn, k, c, x_points, kind) -> CurveEstimate:
    """Invert along ``c`` (density) or ``c - 1`` (survival); the record keeps ``c``."""
    x = np.asarray(x_points, dtype=float)
    line = c - 1.0 if kind.startswith("survival") else c
    vals = inverse_transform(mx, k, line, x).real
    return CurveEstimate(x, vals, float(k), float(c), kind)


def survival_factor(mx: MellinFn, c: float) -> MellinFn:
    """``mx(t) / (c - 1 + 2 pi i t)``, the transform of the survival function on line ``c - 1``."""
    if not c > 1:
        raise ValueError("survival estimation requires c > 1")
    return MellinFn(mx.grid, mx.values / ((c - 1.0) + 1j * TWO_PI * mx.grid.points))


def density_known(mY_hat: MellinFn, mU: MellinFn, k: float, c: float,
                  x_points) -> CurveEstimate:
    return _invert(mx_tilde(mY_hat, mU), k, c, x_points, "density-known")


def density_unknown(mx_hat_k: MellinFn, k: float, c: float, x_points) -> CurveEstimate:
    """Thresholded estimator; ``mx_hat_k`` already carries the mask."""
    return _invert(mx_hat_k, k, c, x_points, "density-unknown")


def survival_known(mY_hat: MellinFn, mU: MellinFn, k: float, c: float,
                   x_points) -> CurveEstimate:
    mx = survival_factor(mx_tilde(mY_hat, mU), c)
    return _invert(mx, k, c, x_points, "survival-known")


def survival_unknown(mx_hat_k: MellinFn, k: float, c: float, x_points) -> CurveEstimate:
    mx = survival_factor(mx_hat_k, c)
    return _invert(mx, k, c, x_points, "survival-unknown")


def estimate(mx: MellinFn, k: float, c: float, x_points, survival: bool = False,
             known: bool = False) -> CurveEstimate:
    """Dispatch on estimand; ``mx`` is the (masked) transform estimate."""
    regime = "known" if known else "unknown"
    if survival:
        return _invert(survival_factor(mx, c), k, c, x_points, f"survival-{regime}")
    return _invert(mx, k, c, x_points, f"density-{regime}")


@dataclass(frozen=True)
class RiskTerms:
    """One realisation of the four-term risk decomposition.

    ``total`` is the realised loss ``||M_X_hat^k - M_X||^2``; the four
    components are single-draw estimates whose expectations add up to
    the expected loss.  ``variance`` is already averaged over the
    Y-sample (it depends on the U-sample only).
    """

    total: float
    bias: float
    variance: float
    mask_loss: float
    u_error: float

    @property
    def decomposition(self) -> float:
        return self.bias + self.variance + self.mask_loss + self.u_error


def scaled_variance(mY: MellinFn, second_moment: float) -> np.ndarray:
    """``V_Y^2(t) = E[Y^(2(c-1))] - |M_Y(t)|^2`` from the exact transform."""
    return second_moment - mY.abs_sq()


def risk_terms(mx_hat: MellinFn, mX: MellinFn, mU: MellinFn, mU_hat: MellinFn,
               mask: ThresholdMask, vY_sq: np.ndarray, n: int, k: float,
               weight: Weight = None) -> RiskTerms:
    """Diagnostic only: needs the exact transforms, i.e. a simulation setting."""
    grid = mX.grid
    inner = MellinFn(grid, mx_hat.values - mX.values)
    total = l2_norm_sq(inner, weight, k) + l2_norm_sq(mX, weight, k, complement=True)
    bias = l2_norm_sq(mX, weight, k, complement=True)

    inv_u = dagger(mU_hat).values * mask.indicator
    variance = l2_norm_sq(MellinFn(grid, inv_u * np.sqrt(np.maximum(vY_sq, 0))), weight, k) / n
    off_mask = MellinFn(grid, mX.values * (~mask.included))
    mask_loss = l2_norm_sq(off_mask, weight, k)
    u_err = MellinFn(grid, inv_u * (mU.values - mU_hat.values) * mX.values)
    u_error = l2_norm_sq(u_err, weight, k)
    return RiskTerms(total, bias, variance, mask_loss, u_error)
