"""Parametric membership functions.

Two type-1 families (Gaussian, trapezoid) and three interval type-2
families whose footprint of uncertainty is bounded by a lower (LMF) and an
upper (UMF) membership function. All sets are immutable; evaluation accepts
scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar, Union

import numpy as np

# Round-off allowance when clamping memberships into [0, 1].
CLAMP_TOL = 1e-12
TRAPEZOID_CHECK_POINTS = 1001


def _finish(values, scalar_input):
    out = np.clip(values, 0.0, 1.0)
    return float(out) if scalar_input else out


def _gauss(x, m, sigma):
    return np.exp(-((x - m) ** 2) / (2.0 * sigma * sigma))


def _trapezoid(x, a, b, c, d, height=1.0):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    mu = np.zeros_like(x)
    rise = (a < x) & (x < b)
    mu[rise] = height * (x[rise] - a) / (b - a)
    mu[(b <= x) & (x <= c)] = height
    fall = (c < x) & (x < d)
    mu[fall] = height * (d - x[fall]) / (d - c)
    return mu[0] if scalar else mu


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


def _finite(*values):
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class GaussianT1:
    m: float
    sigma: float
    name: str = field(default="", compare=False)

    family: ClassVar[str] = "gaussian"
    is_it2: ClassVar[bool] = False
    n_params: ClassVar[int] = 2

    def __post_init__(self):
        _require(_finite(self.m, self.sigma), "gaussian parameters must be finite")
        _require(self.sigma > 0, f"gaussian sigma must be > 0, got {self.sigma}")

    def membership(self, x):
        scalar = np.ndim(x) == 0
        return _finish(_gauss(np.asarray(x, dtype=float), self.m, self.sigma), scalar)

    def interval(self, x):
        mu = self.membership(x)
        return mu, mu

    def params(self) -> dict:
        return {"m": self.m, "sigma": self.sigma}


@dataclass(frozen=True)
class TrapezoidT1:
    """Trapezoid with unit plateau on ``[b, c]``; ``b == c`` gives a triangle."""

    a: float
    b: float
    c: float
    d: float
    name: str = field(default="", compare=False)

    family: ClassVar[str] = "trapezoid"
    is_it2: ClassVar[bool] = False
    n_params: ClassVar[int] = 4

    def __post_init__(self):
        _require(_finite(self.a, self.b, self.c, self.d), "trapezoid parameters must be finite")
        _require(self.a <= self.b <= self.c <= self.d,
                 f"trapezoid needs a <= b <= c <= d, got {self.params()}")
        _require(self.a < self.d, "trapezoid needs a < d")

    def membership(self, x):
        scalar = np.ndim(x) == 0
        return _finish(_trapezoid(x, self.a, self.b, self.c, self.d), scalar)

    def interval(self, x):
        mu = self.membership(x)
        return mu, mu

    def params(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


@dataclass(frozen=True)
class GaussianUncertainMeanIT2:
    """Gaussian whose mean is blurred to ``[m1, m2]``.

    The UMF is flat at 1 between the means; the LMF is the smaller of the two
    shifted Gaussians.
    """

    m1: float
    m2: float
    sigma: float
    name: str = field(default="", compare=False)

    family: ClassVar[str] = "gaussian_uncertain_mean"
    is_it2: ClassVar[bool] = True
    n_params: ClassVar[int] = 3

    def __post_init__(self):
        _require(_finite(self.m1, self.m2, self.sigma), "gaussian parameters must be finite")
        _require(self.m1 <= self.m2, f"need m1 <= m2, got {self.m1} > {self.m2}")
        _require(self.sigma > 0, f"gaussian sigma must be > 0, got {self.sigma}")

    def lower(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        mu = np.minimum(_gauss(x, self.m1, self.sigma), _gauss(x, self.m2, self.sigma))
        return _finish(mu, scalar)

    def upper(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        mu = np.where(x < self.m1, _gauss(x, self.m1, self.sigma),
                      np.where(x > self.m2, _gauss(x, self.m2, self.sigma), 1.0))
        return _finish(mu, scalar)

    def interval(self, x):
        return self.lower(x), self.upper(x)

    def params(self) -> dict:
        return {"m1": self.m1, "m2": self.m2, "sigma": self.sigma}


@dataclass(frozen=True)
class GaussianUncertainStdIT2:
    """Gaussian whose spread is blurred to ``[sigma1, sigma2]``."""

    m: float
    sigma1: float
    sigma2: float
    name: str = field(default="", compare=False)

    family: ClassVar[str] = "gaussian_uncertain_std"
    is_it2: ClassVar[bool] = True
    n_params: ClassVar[int] = 3

    def __post_init__(self):
        _require(_finite(self.m, self.sigma1, self.sigma2), "gaussian parameters must be finite")
        _require(0 < self.sigma1 <= self.sigma2,
                 f"need 0 < sigma1 <= sigma2, got [{self.sigma1}, {self.sigma2}]")

    def lower(self, x):
        scalar = np.ndim(x) == 0
        return _finish(_gauss(np.asarray(x, dtype=float), self.m, self.sigma1), scalar)

    def upper(self, x):
        scalar = np.ndim(x) == 0
        return _finish(_gauss(np.asarray(x, dtype=float), self.m, self.sigma2), scalar)

    def interval(self, x):
        return self.lower(x), self.upper(x)

    def params(self) -> dict:
        return {"m": self.m, "sigma1": self.sigma1, "sigma2": self.sigma2}


@dataclass(frozen=True)
class TrapezoidIT2:
    """Piecewise linear FOU.

    ``(a, b, c, d)`` is the UMF trapezoid; ``(e, f, g, i)`` with height ``h``
    is the (possibly sub-normal) LMF. The LMF must lie under the UMF, which is
    checked on a grid at construction.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    g: float
    i: float
    h: float = 1.0
    name: str = field(default="", compare=False)

    family: ClassVar[str] = "trapezoid_it2"
    is_it2: ClassVar[bool] = True
    n_params: ClassVar[int] = 9

    def __post_init__(self):
        p = self.params()
        _require(_finite(*p.values()), "trapezoid parameters must be finite")
        _require(self.a <= self.b <= self.c <= self.d, f"UMF needs a <= b <= c <= d, got {p}")
        _require(self.a < self.d, "UMF needs a < d")
        _require(self.e <= self.f <= self.g <= self.i, f"LMF needs e <= f <= g <= i, got {p}")
        _require(0 < self.h <= 1, f"LMF height must be in (0, 1], got {self.h}")
        _require(self.a <= self.e and self.i <= self.d,
                 "LMF support must lie inside the UMF support")
        grid = np.linspace(self.a, self.d, TRAPEZOID_CHECK_POINTS)
        # breakpoints are where violations would show first
        grid = np.union1d(grid, [self.e, self.f, self.g, self.i])
        over = _trapezoid(grid, self.e, self.f, self.g, self.i, self.h) - \
            _trapezoid(grid, self.a, self.b, self.c, self.d)
        _require(np.all(over <= CLAMP_TOL), f"LMF exceeds UMF for {p}")

    def lower(self, x):
        scalar = np.ndim(x) == 0
        return _finish(_trapezoid(x, self.e, self.f, self.g, self.i, self.h), scalar)

    def upper(self, x):
        scalar = np.ndim(x) == 0
        return _finish(_trapezoid(x, self.a, self.b, self.c, self.d), scalar)

    def interval(self, x):
        return self.lower(x), self.upper(x)

    def params(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d,
                "e": self.e, "f": self.f, "g": self.g, "i": self.i, "h": self.h}


T1Set = Union[GaussianT1, TrapezoidT1]
IT2Set = Union[GaussianUncertainMeanIT2, GaussianUncertainStdIT2, TrapezoidIT2]
FuzzySet = Union[T1Set, IT2Set]

FAMILIES: dict[str, type] = {
    cls.family: cls
    for cls in (GaussianT1, TrapezoidT1, GaussianUncertainMeanIT2,
                GaussianUncertainStdIT2, TrapezoidIT2)
}


def _check_input(x):
    if not np.all(np.isfinite(x)):
        raise ValueError(f"membership input must be finite, got {x!r}")


def t1_membership(fs: T1Set, x):
    """Membership degree of ``x`` in a type-1 set."""
    _check_input(x)
    if fs.is_it2:
        raise TypeError(f"{fs.family} is an interval type-2 set")
    return fs.membership(x)


def it2_membership_interval(fs: IT2Set, x):
    """``(lower, upper)`` membership of ``x`` in an IT2 set."""
    _check_input(x)
    if not fs.is_it2:
        raise TypeError(f"{fs.family} is a type-1 set")
    return fs.interval(x)


def make_set(family: str, params: dict, name: str = "") -> FuzzySet:
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown set family {family!r}") from None
    return cls(**params, name=name)
