"""Penalised choice of the integer cut-off ``k``.

The objective minimised over ``k = 1, ..., k_n`` is

    -||M_X_est 1_[-k,k]||^2_{L2(v)} + 2 sigma_hat^2 * kappa * Delta_k delta_k k / n

where ``Delta_k`` is the sup of the penalty weight on ``[-k, k]`` and
``delta_k = log(max(Delta_k, k + 2)) / log(k + 2)``.  With a known error
the penalty weight is ``v_U = |dagger(M_U)|^2 v``; with an estimated
error it is the random ``v_hat = |dagger(M_U_hat) 1_mask|^2 v``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .empirical import ThresholdMask, mx_hat, mx_tilde
from .mellin_core import MellinFn, TGrid, WeightFn, dagger, l2_norm_sq

log = logging.getLogger(__name__)

THEORY_CONSTANT = {"known": 48.0, "unknown": 24.0}
# constants used for the reported simulations; the theoretical ones are far too large
PRACTICAL_KAPPA = {"known": 0.6, "unknown": 0.3}


@dataclass(frozen=True)
class PenaltyConfig:
    regime: str = "unknown"
    kappa: float | None = None

    def __post_init__(self):
        if self.regime not in THEORY_CONSTANT:
            raise ValueError(f"regime must be 'known' or 'unknown', got {self.regime!r}")
        if self.kappa is not None and not self.kappa >= 0:
            raise ValueError("kappa must be nonnegative")

    @property
    def theory_constant(self) -> float:
        return THEORY_CONSTANT[self.regime]

    @property
    def constant(self) -> float:
        return self.theory_constant if self.kappa is None else float(self.kappa)


@dataclass(frozen=True)
class SelectionResult:
    """Selected cut-off together with the full per-``k`` trace.

    ``penalty`` holds the complete additive term ``2 sigma_hat^2 pen_k``
    so that ``objective = contrast + penalty``.
    """

    k_hat: float
    k_n: int
    sigma_hat_sq: float
    kappa: float
    ks: np.ndarray
    contrast: np.ndarray
    penalty: np.ndarray
    objective: np.ndarray
    deltas: np.ndarray = field(repr=False)

    @property
    def kappa_effective(self) -> float:
        """Multiplier of ``Delta_k delta_k k / n`` in the objective."""
        return 2.0 * self.sigma_hat_sq * self.kappa

    def rows(self):
        for k, con, pen, obj in zip(self.ks, self.contrast, self.penalty, self.objective):
            yield int(k), float(con), float(pen), float(obj)


_warned_caps: set[tuple[int, int]] = set()


def _grid_cap(grid: TGrid) -> int:
    return int(math.floor(grid.t_max + 1e-9))


def delta_k(weight: np.ndarray, grid: TGrid, k: float) -> float:
    """Sup of the tabulated weight over the grid points in ``[-k, k]``."""
    weight = np.asarray(weight, dtype=float)
    return float(np.max(weight[grid.window(k)]))


def small_delta_k(delta: float, k: float) -> float:
    return math.log(max(delta, k + 2.0)) / math.log(k + 2.0)


def _kn(limit: int, weight: np.ndarray, grid: TGrid) -> int:
    cap = _grid_cap(grid)
    top = min(limit, cap)
    ks = np.arange(1, top + 1)
    deltas = delta_window_profile(weight, grid)[[grid.cutoff_index(k) for k in ks]]
    feasible = ks * deltas <= limit * deltas[0]
    # feasibility is a prefix because k * Delta_k increases in k
    kn = int(ks[feasible][-1])
    if kn == cap < limit and (limit, cap) not in _warned_caps:
        _warned_caps.add((limit, cap))
        log.warning("k_n truncated to %d by the frequency grid (t_max=%g)", cap, grid.t_max)
    return kn


def kn_known(n: int, weight_vU: np.ndarray, grid: TGrid) -> int:
    """``max{k <= n^2 : k Delta_k <= n^2 Delta_1}``, capped at the grid support."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _kn(n * n, weight_vU, grid)


def kn_unknown(n: int, weight_v: np.ndarray, grid: TGrid) -> int:
    """``max{k <= n : k Delta_k <= n Delta_1}``, capped at the grid support."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _kn(n, weight_v, grid)


def penalty(cfg: PenaltyConfig, k: float, n: int, delta: float, small_delta: float) -> float:
    return cfg.constant * delta * small_delta * k / n


def candidate_cutoffs(k_n: int, k_step: float = 1.0) -> np.ndarray:
    """``k_step, 2 k_step, ..., k_n``; ``k_step=1`` gives the integers ``1..k_n``."""
    count = int(round(k_n / k_step))
    if not (k_step > 0 and count >= 1 and abs(count * k_step - k_n) < 1e-9 * max(1, k_n)):
        raise ValueError("k_step must divide k_n")
    if k_step == 1:
        return np.arange(1, k_n + 1)
    # rounding keeps e.g. 47 * 0.01 at 0.47 rather than 0.47000000000000003
    return np.round(np.arange(1, count + 1) * k_step, 12)


def window_norms(mx: MellinFn, v: WeightFn | np.ndarray | None = None) -> np.ndarray:
    """``||mx 1_[-j step, j step]||^2_{L2(v)}`` for every ``j = 0..half``.

    Requires an even integrand (true for conjugate-symmetric ``mx`` and an
    even weight).  Built as a running sum of nonnegative trapezoid cells,
    so the profile is nondecreasing in floating point, not only in exact
    arithmetic.
    """
    grid = mx.grid
    w = np.ones(grid.size) if v is None else getattr(v, "values", v)
    e = (mx.abs_sq() * np.asarray(w, dtype=float))[grid.half:]
    cells = (e[:-1] + e[1:]) * (grid.step / 2)
    # 2 * sum(cells) == 2 * (cells summed once per side of 0)
    return np.concatenate([[0.0], 2.0 * np.cumsum(cells)])


def delta_window_profile(weight: np.ndarray, grid: TGrid) -> np.ndarray:
    """``max_{|t| <= j step} weight(t)`` for every ``j = 0..half``."""
    weight = np.asarray(weight, dtype=float)
    pair = np.maximum(weight[grid.half:], weight[grid.half::-1])
    return np.maximum.accumulate(pair)


def _scan(mx: MellinFn, v: WeightFn, pen_weight: np.ndarray, k_n: int, n: int,
          sigma_sq: float, cfg: PenaltyConfig, k_step: float = 1.0) -> SelectionResult:
    grid = mx.grid
    ks = candidate_cutoffs(k_n, k_step)
    idx = np.array([grid.cutoff_index(k) for k in ks])
    deltas = delta_window_profile(pen_weight, grid)[idx]
    contrast = -window_norms(mx, v)[idx]
    small = np.log(np.maximum(deltas, ks + 2.0)) / np.log(ks + 2.0)
    pen = cfg.constant * deltas * small * ks / n
    pen_term = 2.0 * sigma_sq * pen
    objective = contrast + pen_term
    k_hat = ks[np.argmin(objective)].item()
    return SelectionResult(k_hat, k_n, float(sigma_sq), cfg.constant, ks, contrast,
                           pen_term, objective, deltas)


def select_known(mY_hat: MellinFn, mU: MellinFn, v: WeightFn, c: float, n: int,
                 cfg: PenaltyConfig, sigma_sq: float, k_step: float = 1.0) -> SelectionResult:
    """Known error density; ``sigma_sq`` is :func:`~.empirical.sigma_hat_sq` of the Y-sample."""
    mx = mx_tilde(mY_hat, mU)
    v_u = dagger(mU).abs_sq() * v.values
    k_n = kn_known(n, v_u, mY_hat.grid)
    return _scan(mx, v, v_u, k_n, n, sigma_sq, cfg, k_step)


def select_unknown(mY_hat: MellinFn, mU_hat: MellinFn, mask: ThresholdMask, v: WeightFn,
                   c: float, n: int, m: int, cfg: PenaltyConfig,
                   sigma_sq: float, k_step: float = 1.0) -> SelectionResult:
    """Estimated error density; the penalty uses the random weight ``v_hat``."""
    mx = mx_hat(mY_hat, mU_hat, mask)
    v_hat = dagger(mU_hat).abs_sq() * mask.indicator * v.values
    k_n = kn_unknown(n, v.values, mY_hat.grid)
    return _scan(mx, v, v_hat, k_n, n, sigma_sq, cfg, k_step)
