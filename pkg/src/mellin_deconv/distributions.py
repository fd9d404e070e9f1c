"""Positive distributions used as targets and as multiplicative noise.

Each family carries its pdf, cdf, a sampler and the closed form of its
Mellin transform ``E[X^z]`` with ``z = c - 1 + 2*pi*i*t``.  Complex
gamma values come from :func:`scipy.special.loggamma`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .mellin_core import TWO_PI, MellinFn, TGrid


class MomentDomainError(ValueError):
    """``E[X^(c-1)]`` does not exist for the requested line ``c``."""


def mellin_exponent(c: float, t) -> np.ndarray:
    return (c - 1.0) + 1j * TWO_PI * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class DistSpec:
    """Base class; subclasses are frozen parameter records."""

    name = "dist"

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def check_moment(self, c: float):
        """Raise :class:`MomentDomainError` unless ``E[X^(c-1)]`` is finite."""

    def mellin(self, c: float, t):
        raise NotImplementedError

    def support(self, c: float = 0.5, tol: float = 1e-12) -> tuple[float, float]:
        """Interval outside of which ``x^(c-1) f(x)`` carries mass below ``tol``."""
        raise NotImplementedError

    def label(self) -> str:
        params = ",".join(f"{v:g}" for v in self.__dict__.values())
        return f"{self.name}({params})"


def _require_positive(**params):
    for key, val in params.items():
        if not (np.isfinite(val) and val > 0):
            raise ValueError(f"parameter {key} must be positive, got {val}")


def _positive_part(x):
    x = np.asarray(x, dtype=float)
    return x, x > 0


@dataclass(frozen=True)
class Gamma(DistSpec):
    """Gamma with rate ``q`` and shape ``p``: ``q^p/Gamma(p) x^(p-1) exp(-q x)``."""

    q: float
    p: float
    name = "Gamma"

    def __post_init__(self):
        _require_positive(q=self.q, p=self.p)

    def pdf(self, x):
        x, pos = _positive_part(x)
        xs = np.where(pos, x, 1.0)
        logf = (self.p * np.log(self.q) - special.gammaln(self.p)
                + (self.p - 1) * np.log(xs) - self.q * xs)
        return np.where(pos, np.exp(logf), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return special.gammainc(self.p, self.q * np.maximum(x, 0))

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return special.gammaincc(self.p, self.q * np.maximum(x, 0))

    def draw(self, rng, n):
        return rng.gamma(self.p, 1.0 / self.q, size=n)

    def check_moment(self, c):
        if not self.p + c - 1 > 0:
            raise MomentDomainError(f"{self.label()}: need p + c - 1 > 0, got c={c}")

    def mellin(self, c, t):
        self.check_moment(c)
        z = mellin_exponent(c, t)
        return np.exp(-z * np.log(self.q) + special.loggamma(self.p + z)
                      - special.gammaln(self.p))

    def support(self, c=0.5, tol=1e-12):
        lo = special.gammaincinv(self.p, tol) / self.q
        hi = special.gammainccinv(self.p, tol) / self.q
        return lo * 1e-2, hi * 2.0


@dataclass(frozen=True)
class Weibull(DistSpec):
    """Weibull ``s k (s x)^(k-1) exp(-(s x)^k)``; ``s`` acts as an inverse scale."""

    s: float
    k: float
    name = "Weibull"

    def __post_init__(self):
        _require_positive(s=self.s, k=self.k)

    def pdf(self, x):
        x, pos = _positive_part(x)
        sx = self.s * np.where(pos, x, 1.0)
        with np.errstate(over="ignore"):
            logf = np.log(self.s * self.k) + (self.k - 1) * np.log(sx) - sx ** self.k
        return np.where(pos, np.exp(logf), 0.0)

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0)
        return -np.expm1(-(self.s * x) ** self.k)

    def sf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0)
        return np.exp(-(self.s * x) ** self.k)

    def draw(self, rng, n):
        u = rng.random(n)
        return (-np.log1p(-u)) ** (1.0 / self.k) / self.s

    def check_moment(self, c):
        if not (c - 1) / self.k > -1:
            raise MomentDomainError(f"{self.label()}: need (c-1)/k > -1, got c={c}")

    def mellin(self, c, t):
        self.check_moment(c)
        z = mellin_exponent(c, t)
        return np.exp(-z * np.log(self.s) + special.loggamma(1 + z / self.k))

    def support(self, c=0.5, tol=1e-12):
        lo = (-np.log1p(-tol)) ** (1 / self.k) / self.s
        hi = (-np.log(tol)) ** (1 / self.k) / self.s
        return lo * 1e-2, hi * 2.0


@dataclass(frozen=True)
class Beta(DistSpec):
    a: float
    b: float
    name = "Beta"

    def __post_init__(self):
        _require_positive(a=self.a, b=self.b)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0) & (x < 1)
        xs = np.where(inside, x, 0.5)
        logf = ((self.a - 1) * np.log(xs) + (self.b - 1) * np.log1p(-xs)
                - special.betaln(self.a, self.b))
        return np.where(inside, np.exp(logf), 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0, 1)
        return special.betainc(self.a, self.b, x)

    def sf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0, 1)
        return special.betaincc(self.a, self.b, x)

    def draw(self, rng, n):
        return rng.beta(self.a, self.b, size=n)

    def check_moment(self, c):
        if not self.a + c - 1 > 0:
            raise MomentDomainError(f"{self.label()}: need a + c - 1 > 0, got c={c}")

    def mellin(self, c, t):
        self.check_moment(c)
        z = mellin_exponent(c, t)
        # B(a+z, b) / B(a, b)
        return np.exp(special.loggamma(self.a + z) - special.loggamma(self.a + self.b + z)
                      + special.gammaln(self.a + self.b) - special.gammaln(self.a))

    def support(self, c=0.5, tol=1e-12):
        lo = special.betaincinv(self.a, self.b, tol)
        return lo * 1e-2, 1.0


@dataclass(frozen=True)
class LogNormal(DistSpec):
    """Log-normal with log-mean ``mu`` and log-variance ``sigma2``."""

    mu: float
    sigma2: float
    name = "LogNormal"

    def __post_init__(self):
        if not np.isfinite(self.mu):
            raise ValueError("mu must be finite")
        _require_positive(sigma2=self.sigma2)

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))

    def pdf(self, x):
        x, pos = _positive_part(x)
        xs = np.where(pos, x, 1.0)
        val = np.exp(-(np.log(xs) - self.mu) ** 2 / (2 * self.sigma2)) / (
            np.sqrt(2 * np.pi) * self.sigma * xs)
        return np.where(pos, val, 0.0)

    def cdf(self, x):
        x, pos = _positive_part(x)
        z = (np.log(np.where(pos, x, 1.0)) - self.mu) / self.sigma
        return np.where(pos, special.ndtr(z), 0.0)

    def sf(self, x):
        x, pos = _positive_part(x)
        z = (np.log(np.where(pos, x, 1.0)) - self.mu) / self.sigma
        return np.where(pos, special.ndtr(-z), 1.0)

    def draw(self, rng, n):
        return np.exp(self.mu + self.sigma * rng.standard_normal(n))

    def mellin(self, c, t):
        z = mellin_exponent(c, t)
        return np.exp(self.mu * z + self.sigma2 * z * z / 2)

    def support(self, c=0.5, tol=1e-12):
        # the x^(c-1) tilt moves the log-mean by (c-1)*sigma2
        centre = self.mu + (c - 1) * self.sigma2
        width = (-special.ndtri(tol) + 1.0) * self.sigma
        return float(np.exp(centre - width)), float(np.exp(centre + width))


@dataclass(frozen=True)
class Pareto(DistSpec):
    """Pareto ``l x_min^l / x^(l+1)`` on ``[x_min, inf)``."""

    l: float
    x_min: float
    name = "Pareto"

    def __post_init__(self):
        _require_positive(l=self.l, x_min=self.x_min)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = x >= self.x_min
        xs = np.where(inside, x, self.x_min)
        with np.errstate(over="ignore"):
            return np.where(inside, self.l * self.x_min ** self.l / xs ** (self.l + 1), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.maximum(x, self.x_min)
        return 1.0 - (self.x_min / xs) ** self.l

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return (self.x_min / np.maximum(x, self.x_min)) ** self.l

    def draw(self, rng, n):
        u = rng.random(n)
        return self.x_min * (1.0 - u) ** (-1.0 / self.l)

    def check_moment(self, c):
        if not c - 1 < self.l:
            raise MomentDomainError(f"{self.label()}: need c - 1 < l, got c={c}")

    def mellin(self, c, t):
        self.check_moment(c)
        z = mellin_exponent(c, t)
        return self.l * np.exp(z * np.log(self.x_min)) / (self.l - z)

    def support(self, c=0.5, tol=1e-12):
        # tail of E[X^(c-1)] beyond h is (h/x_min)^(c-1-l) up to a constant
        decay = self.l - (c - 1)
        return self.x_min, self.x_min * tol ** (-1.0 / decay)


FAMILIES = {cls.name.lower(): cls for cls in (Gamma, Weibull, Beta, LogNormal, Pareto)}


def make_dist(kind: str, *params: float) -> DistSpec:
    """Construct a family by name, e.g. ``make_dist("gamma", 1, 3)``."""
    try:
        cls = FAMILIES[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown distribution {kind!r}; choose from {sorted(FAMILIES)}") from None
    return cls(*map(float, params))


def sample(dist: DistSpec, n: int, rng_seed=None) -> np.ndarray:
    """Draw ``n`` i.i.d. values; ``rng_seed`` is anything :func:`numpy.random.default_rng` accepts."""
    if n < 1:
        raise ValueError("sample size must be at least 1")
    rng = np.random.default_rng(rng_seed)
    return dist.draw(rng, n)


def sample_product(dist_x: DistSpec, dist_u: DistSpec, n: int, rng_seed=None) -> np.ndarray:
    """``n`` draws of ``Y = X * U`` with independent ``X`` and ``U``."""
    if n < 1:
        raise ValueError("sample size must be at least 1")
    rng = np.random.default_rng(rng_seed)
    x = dist_x.draw(rng, n)
    u = dist_u.draw(rng, n)
    return x * u


def pdf(dist: DistSpec, x):
    return dist.pdf(x)


def analytic_mellin(dist: DistSpec, c: float, t):
    """Closed-form ``E[X^(c-1+2 pi i t)]``; scalar in, scalar out."""
    val = dist.mellin(c, t)
    return complex(val) if np.ndim(val) == 0 else val


def analytic_mellin_fn(dist: DistSpec, c: float, grid: TGrid) -> MellinFn:
    """Tabulate the closed-form transform on a grid, exactly conjugate-symmetric."""
    pos = dist.mellin(c, grid.points[grid.half:])
    pos = np.array(pos, dtype=complex)
    pos[0] = pos[0].real
    return MellinFn(grid, np.concatenate([np.conj(pos[:0:-1]), pos]))


def xgrid_for(dist: DistSpec, c: float = 0.5, n_points: int = 4000,
              tol: float = 1e-8) -> np.ndarray:
    """Log-spaced abscissae covering the effective support of ``x^(c-1) f``.

    The grid starts exactly at the lower support boundary for families
    with a jump there (Pareto), so the trapezoid rule never straddles it.
    """
    lo, hi = dist.support(c, tol)
    return np.geomspace(lo, hi, n_points)


def tabulate_pdf(dist: DistSpec, c: float = 0.5, n_points: int = 4000):
    x = xgrid_for(dist, c, n_points)
    return x, dist.pdf(x)
