"""Frequency grids, numerical Mellin transforms and weighted L2 norms.

Every Mellin-domain object in the package lives on a symmetric, uniform
frequency grid (:class:`TGrid`).  Integrals in ``t`` and in ``x`` use the
composite trapezoid rule, which keeps the inverse transform linear in the
tabulated values.

Conventions
-----------
The forward transform along the line ``c`` is

    M_c[h](t) = int_0^inf x^(c - 1 + 2*pi*i*t) h(x) dx

and its inverse, restricted to the frequency window ``[-k, k]``, is

    h_k(x) = int_{-k}^{k} x^(-c - 2*pi*i*t) M_c[h](t) dt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

TWO_PI = 2.0 * np.pi

# observations (or x-nodes) processed per block in power_sums
_CHUNK = 4096


@dataclass(frozen=True)
class TGrid:
    """Symmetric uniform frequency grid ``{-half*step, ..., half*step}``."""

    step: float
    half: int
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        if self.half < 1:
            raise ValueError("grid needs at least one positive frequency")
        pts = np.arange(-self.half, self.half + 1, dtype=float) * self.step
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def t_max(self) -> float:
        return self.half * self.step

    @property
    def size(self) -> int:
        return 2 * self.half + 1

    @property
    def zero_index(self) -> int:
        return self.half

    def cutoff_index(self, k: float) -> int:
        """Number of grid steps needed to cover ``[0, k]``.

        The window snaps outward to the nearest grid point; values that
        sit on a grid point up to rounding noise are not pushed outward.
        """
        if k < 0:
            raise ValueError("cutoff must be nonnegative")
        j = math.ceil(k / self.step - 1e-9)
        if j > self.half:
            raise ValueError(
                f"cutoff {k} exceeds the grid support t_max={self.t_max}")
        return j

    def window(self, k: float) -> slice:
        """Slice selecting the grid points in the snapped window ``[-k, k]``."""
        j = self.cutoff_index(k)
        return slice(self.half - j, self.half + j + 1)


def make_tgrid(t_max: float, step: float) -> TGrid:
    """Build a symmetric grid containing 0, snapping ``t_max`` up to a multiple of ``step``.

    >>> make_tgrid(1, 0.5).points.tolist()
    [-1.0, -0.5, 0.0, 0.5, 1.0]
    """
    if not (t_max > 0 and step > 0):
        raise ValueError("t_max and step must be positive")
    half = math.ceil(t_max / step - 1e-9)
    return TGrid(step=float(step), half=max(half, 1))


DEFAULT_T_MAX = 20.0
DEFAULT_T_STEP = 0.01


def default_tgrid() -> TGrid:
    return make_tgrid(DEFAULT_T_MAX, DEFAULT_T_STEP)


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class MellinFn:
    """Complex function tabulated on a :class:`TGrid`."""

    grid: TGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.size,):
            raise ValueError(
                f"expected {self.grid.size} values, got shape {vals.shape}")
        object.__setattr__(self, "values", _frozen(vals))

    def conj_asymmetry(self) -> float:
        """``max_t |m(-t) - conj(m(t))|``; zero for transforms of real functions."""
        v = self.values
        return float(np.max(np.abs(v[::-1] - np.conj(v))))

    def __mul__(self, other):
        if isinstance(other, MellinFn):
            _check_same_grid(self.grid, other.grid)
            return MellinFn(self.grid, self.values * other.values)
        return MellinFn(self.grid, self.values * other)

    __rmul__ = __mul__

    def abs_sq(self) -> np.ndarray:
        return self.values.real ** 2 + self.values.imag ** 2


@dataclass(frozen=True)
class WeightFn:
    """Weight ``t_c(t)**a`` with ``t_c(t) = ((c-1)**2 + 4*pi**2*t**2)**-1``."""

    grid: TGrid
    c: float
    a: float
    values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.a == 0:
            vals = np.ones(self.grid.size)
        else:
            if self.c == 1:
                raise ValueError("t_c is singular at t=0 when c == 1; use a = 0")
            vals = survival_weight(self.grid.points, self.c) ** self.a
        object.__setattr__(self, "values", _frozen(vals))


def survival_weight(t, c: float) -> np.ndarray:
    """The density function ``t_c(t) = 1 / ((c-1)**2 + 4 pi^2 t^2)``."""
    t = np.asarray(t, dtype=float)
    return 1.0 / ((c - 1.0) ** 2 + (TWO_PI * t) ** 2)


def _check_same_grid(a: TGrid, b: TGrid):
    if a != b:
        raise ValueError("functions are tabulated on different grids")


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    """Composite trapezoid weights for (possibly non-uniform) sorted nodes."""
    x = np.asarray(x, dtype=float)
    w = np.zeros_like(x)
    if x.size < 2:
        return w
    dx = np.diff(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


def mellin_numeric(density, x, c: float, grid: TGrid) -> MellinFn:
    """Trapezoid approximation of ``M_c[h]`` on every grid frequency.

    Parameters
    ----------
    density : array_like
        Nonnegative values ``h(x_i)``.
    x : array_like
        Strictly positive, increasing abscissae.  Log-spaced nodes work
        well for densities with mass spread over several decades.
    c : float
        Line parameter of the transform.
    grid : TGrid

    Notes
    -----
    Only ``t >= 0`` is computed; the negative half is filled in by
    conjugation, so the output is conjugate-symmetric to the last bit.
    """
    x = np.asarray(x, dtype=float)
    h = np.asarray(density, dtype=float)
    if x.shape != h.shape or x.ndim != 1:
        raise ValueError("density and x must be 1-d arrays of equal length")
    if np.any(x <= 0):
        raise ValueError("x-grid must be strictly positive")
    if np.any(np.diff(x) <= 0):
        raise ValueError("x-grid must be strictly increasing")

    logx = np.log(x)
    amp = trapezoid_weights(x) * np.exp((c - 1.0) * logx) * h
    return MellinFn(grid, _mirror(power_sums(logx, amp, grid)))


def power_sums(logv: np.ndarray, amp: np.ndarray, grid: TGrid) -> np.ndarray:
    """``sum_i amp_i exp(2 pi i t_j logv_i)`` for the grid's ``t_j >= 0``.

    The exponent index is split as ``j = b*B + r`` so that only
    ``O(n sqrt(J))`` complex exponentials are needed; the product of the
    two factors differs from a direct evaluation by rounding only.
    """
    n_t = grid.half + 1
    block = max(1, math.isqrt(n_t - 1) + 1)
    n_blocks = -(-n_t // block)
    theta = TWO_PI * grid.step * np.asarray(logv, dtype=float)
    out = np.zeros(n_blocks * block, dtype=complex)
    for start in range(0, theta.size, _CHUNK):
        th = theta[start:start + _CHUNK]
        inner = np.exp(1j * np.outer(th, np.arange(block)))
        outer = np.exp(1j * np.outer(th, np.arange(n_blocks) * block))
        outer *= amp[start:start + _CHUNK, None]
        out += (outer.T @ inner).ravel()
    out = out[:n_t]
    out[0] = out[0].real
    return out


def _mirror(pos: np.ndarray) -> np.ndarray:
    """Assemble a full grid from the ``t >= 0`` half via conjugate symmetry."""
    return np.concatenate([np.conj(pos[:0:-1]), pos])


def _trapezoid_t(grid: TGrid, j: int) -> np.ndarray:
    w = np.full(2 * j + 1, grid.step)
    w[0] = w[-1] = grid.step / 2
    return w


def inverse_transform(mfn: MellinFn, cutoff_k: float, c: float, x) -> np.ndarray:
    """Complex-valued truncated inverse ``int_{-k}^{k} x^(-c-2 pi i t) m(t) dt``.

    The imaginary part is a diagnostic: it vanishes (up to rounding) when
    ``mfn`` is conjugate-symmetric.
    """
    grid = mfn.grid
    j = grid.cutoff_index(cutoff_k)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("evaluation points must be positive")
    if j == 0:
        return np.zeros(x.shape, dtype=complex)
    sl = slice(grid.half - j, grid.half + j + 1)
    t = grid.points[sl]
    coef = mfn.values[sl] * _trapezoid_t(grid, j)
    logx = np.log(np.atleast_1d(x)).ravel()
    kernel = np.exp(-1j * TWO_PI * np.outer(logx, t))
    vals = np.exp(-c * logx) * (kernel @ coef)
    return vals.reshape(x.shape)


def mellin_inverse(mfn: MellinFn, cutoff_k: float, c: float, x):
    """Real part of :func:`inverse_transform`."""
    out = inverse_transform(mfn, cutoff_k, c, x).real
    return float(out) if np.ndim(out) == 0 else out


Weight = Union[WeightFn, np.ndarray, None]


def _weight_values(grid: TGrid, w: Weight) -> np.ndarray:
    if w is None:
        return np.ones(grid.size)
    if isinstance(w, WeightFn):
        _check_same_grid(grid, w.grid)
        return w.values
    w = np.asarray(w, dtype=float)
    if w.shape != (grid.size,):
        raise ValueError("weight is not tabulated on the function's grid")
    return w


def l2_norm_sq(mfn: MellinFn, w: Weight = None, k: float | None = None,
               complement: bool = False) -> float:
    """Trapezoid approximation of ``int |m(t)|^2 w(t) dt``.

    Parameters
    ----------
    k : float, optional
        Restrict to the snapped window ``[-k, k]``.  ``None`` integrates
        over the whole grid.
    complement : bool
        Integrate over the part of the grid outside ``(-k, k)`` instead.
        Inner and complement pieces add up to the full-grid value.
    """
    grid = mfn.grid
    integrand = mfn.abs_sq() * _weight_values(grid, w)
    if k is None:
        if complement:
            return 0.0
        return float(np.trapezoid(integrand, dx=grid.step))
    j = grid.cutoff_index(k)
    lo, hi = grid.half - j, grid.half + j
    if not complement:
        return float(np.trapezoid(integrand[lo:hi + 1], dx=grid.step))
    left = np.trapezoid(integrand[:lo + 1], dx=grid.step)
    right = np.trapezoid(integrand[hi:], dx=grid.step)
    return float(left + right)


def dagger(mfn: MellinFn) -> MellinFn:
    """Pointwise reciprocal where the value is nonzero, 0 elsewhere."""
    v = mfn.values
    nz = v != 0
    out = np.zeros_like(v)
    out[nz] = 1.0 / v[nz]
    return MellinFn(mfn.grid, out)
