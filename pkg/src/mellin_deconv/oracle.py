"""Independent reference computations used to check the production paths.

Nothing here reuses the trapezoid machinery of :mod:`.mellin_core`.
Integrals go through QUADPACK (:func:`scipy.integrate.quad`): the Mellin
integral is rewritten in ``u = log x`` and its oscillatory factor is
handled by the Fourier-weighted routines (QAWO/QAWF), split at ``x = 1``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

TWO_PI = 2.0 * math.pi


class OracleConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadSpec:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    max_depth: int = 500

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


DEFAULT_QUAD = QuadSpec()

# integrands are treated as 0 for |log x| beyond this (x outside 1e-100..1e100)
_U_LIMIT = 230.0


def _in_log_domain(fn):
    """Wrap ``fn(x)`` as a function of ``u = log x`` that is safe at extreme ``u``."""
    def wrapped(u):
        if abs(u) > _U_LIMIT:
            return 0.0
        with np.errstate(over="ignore", under="ignore"):
            return fn(math.exp(u), u)
    return wrapped


def _quad(fn, a, b, spec: QuadSpec, **kw) -> float:
    opts = dict(epsabs=spec.abs_tol, limit=spec.max_depth)
    if kw.get("weight") in ("cos", "sin") and math.isinf(b):
        # QAWF works cycle by cycle and only takes an absolute tolerance
        opts["limlst"] = max(3, spec.max_depth)
    else:
        opts["epsrel"] = spec.rel_tol
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(fn, a, b, **opts, **kw)
        except integrate.IntegrationWarning as exc:
            raise OracleConvergenceError(str(exc)) from exc
    return val


def _fourier_half_line(g: Callable[[float], float], omega: float, spec: QuadSpec,
                       a: float = 0.0, b: float = math.inf) -> complex:
    """``int_a^b g(u) exp(i omega u) du`` with Fourier-weighted quadrature."""
    if omega == 0:
        return complex(_quad(g, a, b, spec))
    re = _quad(g, a, b, spec, weight="cos", wvar=omega)
    im = _quad(g, a, b, spec, weight="sin", wvar=omega)
    return complex(re, im)


def quad_mellin(pdf: Callable, c: float, t: float, spec: QuadSpec = DEFAULT_QUAD,
                support: tuple[float, float] = (0.0, math.inf)) -> complex:
    """Reference value of ``int_0^inf x^(c-1+2 pi i t) h(x) dx``.

    With ``x = e^u`` the integrand becomes ``e^(c u) h(e^u) e^(2 pi i t u)``;
    the two half-lines ``u < 0`` and ``u > 0`` are integrated separately.
    A finite ``support`` only trims the integration range.
    """
    omega = TWO_PI * t
    lo, hi = support
    u_lo = -math.inf if lo <= 0 else math.log(lo)
    u_hi = math.inf if math.isinf(hi) else math.log(hi)

    g = _in_log_domain(lambda x, u: math.exp(c * u) * float(pdf(x)))

    total = 0j
    if u_hi > 0:
        total += _fourier_half_line(g, omega, spec, max(u_lo, 0.0), u_hi)
    if u_lo < 0:
        # reflect u -> -u so the piece lives on [0, inf)
        total += _fourier_half_line(lambda s: g(-s), -omega, spec,
                                    max(-u_hi, 0.0), -u_lo)
    return total


def quad_mult_convolution(pdf_x: Callable, pdf_u: Callable, y: float,
                          spec: QuadSpec = DEFAULT_QUAD,
                          breakpoints: Sequence[float] = ()) -> float:
    """``int f_X(x) f_U(y/x) dx / x`` evaluated in ``u = log x``.

    ``breakpoints`` lists x-values where either factor jumps (e.g. the
    lower end of a Pareto support, which sits at ``x = y / x_min``).
    """
    if not y > 0:
        raise ValueError("y must be positive")

    g = _in_log_domain(lambda x, u: float(pdf_x(x)) * float(pdf_u(y / x)))

    cuts = sorted({0.0, math.log(y), *(math.log(b) for b in breakpoints if b > 0)})
    edges = [-math.inf, *cuts, math.inf]
    return float(sum(_quad(g, a, b, spec) for a, b in zip(edges[:-1], edges[1:])))


def quad_weighted_sq_norm(pdf: Callable, c: float, spec: QuadSpec = DEFAULT_QUAD,
                          breakpoints: Sequence[float] = ()) -> float:
    """``int h(x)^2 x^(2c-1) dx``, the x-side of the Plancherel identity."""
    g = _in_log_domain(lambda x, u: float(pdf(x)) ** 2 * math.exp(2 * c * u))

    cuts = sorted({0.0, *(math.log(b) for b in breakpoints if b > 0)})
    edges = [-math.inf, *cuts, math.inf]
    return float(sum(_quad(g, a, b, spec) for a, b in zip(edges[:-1], edges[1:])))


def quad_ise(curve, truth: Callable, c: float, spec: QuadSpec = DEFAULT_QUAD,
             interval: tuple[float, float] | None = None, refine: int = 10) -> float:
    """Dense-grid ``int (curve - truth)^2 x^(2c-1) dx``.

    ``curve`` is either a tabulated estimate (anything with ``x_points``
    and ``values``; interpolated by a cubic spline) or a callable that can
    be evaluated on the dense grid directly.  The dense grid has
    ``refine`` times the production resolution and is integrated with
    Simpson's rule.
    """
    if callable(curve):
        if interval is None:
            raise ValueError("a callable curve needs an explicit interval")
        lo, hi = interval
        num = 400 * refine + 1
        f_hat = curve
    else:
        x_tab = np.asarray(curve.x_points, dtype=float)
        lo, hi = interval or (x_tab[0], x_tab[-1])
        num = x_tab.size * refine + 1
        f_hat = CubicSpline(x_tab, np.asarray(curve.values, dtype=float))
    x = np.linspace(lo, hi, num)
    err = np.asarray(f_hat(x), dtype=float) - np.asarray(truth(x), dtype=float)
    return float(integrate.simpson(err * err * x ** (2 * c - 1), x=x))
