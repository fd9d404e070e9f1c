"""Quantities computed directly from positive samples."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mellin_core import MellinFn, TGrid, _check_same_grid, _frozen, _mirror, dagger, power_sums


def as_sample(values) -> np.ndarray:
    """Validate a batch of observations: nonempty, finite, strictly positive."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("sample is empty")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("sample values must be finite and strictly positive")
    return arr


def empirical_mellin(sample, c: float, grid: TGrid) -> MellinFn:
    """``(1/n) sum_i Y_i^(c - 1 + 2 pi i t)`` on every grid point.

    Each power is evaluated as ``exp(z log y)``.  Only ``t >= 0`` is
    computed and the rest is filled by conjugation.
    """
    y = as_sample(sample)
    logy = np.log(y)
    amp = np.exp((c - 1.0) * logy) / y.size
    return MellinFn(grid, _mirror(power_sums(logy, amp, grid)))


def sigma_hat_sq(sample, c: float) -> float:
    """``1 + mean(Y^(2(c-1)))``, the plug-in bound on the scaled variance."""
    y = as_sample(sample)
    return 1.0 + float(np.mean(np.exp(2.0 * (c - 1.0) * np.log(y))))


@dataclass(frozen=True)
class ThresholdMask:
    """Frequencies where ``min(m, n) |M_U_hat(t)|^2 >= 1``."""

    grid: TGrid
    included: np.ndarray
    m: int
    n: int

    def __post_init__(self):
        inc = np.asarray(self.included, dtype=bool)
        if inc.shape != (self.grid.size,):
            raise ValueError("mask length does not match the grid")
        object.__setattr__(self, "included", _frozen(inc))

    @classmethod
    def everywhere(cls, grid: TGrid, m: int = 1, n: int = 1) -> "ThresholdMask":
        return cls(grid, np.ones(grid.size, dtype=bool), m, n)

    @classmethod
    def nowhere(cls, grid: TGrid, m: int = 1, n: int = 1) -> "ThresholdMask":
        return cls(grid, np.zeros(grid.size, dtype=bool), m, n)

    @property
    def indicator(self) -> np.ndarray:
        return self.included.astype(float)


def threshold_mask(mU_hat: MellinFn, m: int, n: int) -> ThresholdMask:
    if m < 1 or n < 1:
        raise ValueError("sample sizes must be at least 1")
    included = min(m, n) * mU_hat.abs_sq() >= 1.0
    return ThresholdMask(mU_hat.grid, included, m, n)


def mx_hat(mY_hat: MellinFn, mU_hat: MellinFn, mask: ThresholdMask) -> MellinFn:
    """Plug-in transform of the target: ``M_Y_hat * dagger(M_U_hat)`` on the mask, 0 off it."""
    _check_same_grid(mY_hat.grid, mU_hat.grid)
    _check_same_grid(mY_hat.grid, mask.grid)
    ratio = mY_hat.values * dagger(mU_hat).values
    return MellinFn(mY_hat.grid, np.where(mask.included, ratio, 0))


def mx_tilde(mY_hat: MellinFn, mU: MellinFn) -> MellinFn:
    """Known-error counterpart ``M_Y_hat * dagger(M_U)``."""
    _check_same_grid(mY_hat.grid, mU.grid)
    return MellinFn(mY_hat.grid, mY_hat.values * dagger(mU).values)
