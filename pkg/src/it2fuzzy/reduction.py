"""Type-reduction and defuzzification.

Center-of-sets type-reduction is computed with EIASC (enhanced iterative
algorithm with stop condition). ``corner_oracle`` brute-forces the same
extremum for verification. The Nie-Tan and Begian-Melek-Mendel defuzzifiers
skip type-reduction entirely.

Every weighted mean goes through :func:`_wavg`, which sums in ascending
consequent order. With zero-width footprints all reducers then reproduce
the type-1 weighted average bit for bit, which the two-step optimizer
relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .rulebase import (DimensionError, FiringInterval, FuzzySystem, Reducer,
                       consequent_bounds, fire_batch)

ORACLE_MAX_RULES = 20
_ORACLE_CHUNK = 1 << 14


class ReductionError(ValueError):
    pass


class AllZeroFiring(ReductionError):
    """Every rule has zero firing strength, so the weighted mean is undefined."""


class TooLarge(ReductionError):
    pass


@dataclass(frozen=True)
class ReductionResult:
    y_l: float
    y_r: float
    y: float
    reducer: str
    switch_points: Optional[tuple] = None


@dataclass(frozen=True)
class BatchResult:
    y_l: np.ndarray
    y_r: np.ndarray
    y: np.ndarray

    @property
    def gaps(self):
        return ~np.isfinite(self.y)


def _as_arrays(firings, consequents):
    fl, fu = [], []
    for f in firings:
        if isinstance(f, FiringInterval):
            fl.append(f.f_lower)
            fu.append(f.f_upper)
        elif np.ndim(f) == 0:
            fl.append(float(f))
            fu.append(float(f))
        else:
            fl.append(float(f[0]))
            fu.append(float(f[1]))
    yl, yu = [], []
    for c in consequents:
        if np.ndim(c) == 0:
            yl.append(float(c))
            yu.append(float(c))
        else:
            yl.append(float(c[0]))
            yu.append(float(c[1]))
    fl, fu, yl, yu = (np.asarray(a, dtype=float) for a in (fl, fu, yl, yu))
    if fl.size == 0:
        raise ValueError("need at least one rule")
    if not (fl.size == fu.size == yl.size == yu.size):
        raise DimensionError(f"{fl.size} firing intervals but {yl.size} consequents")
    if np.any(fl < 0) or np.any(fl > fu):
        raise ValueError("firing intervals need 0 <= f_lower <= f_upper")
    if np.any(yl > yu):
        raise ValueError("consequent intervals need lower <= upper")
    return fl, fu, yl, yu


_TINY = np.finfo(float).tiny


def _unit(w, ref=None, axis=None):
    """Scale weights so the largest ``ref`` is 1 and flush subnormals to zero.

    Weighted means are scale invariant, but products with subnormal weights
    lose almost all precision, so such weights are treated as zero.
    """
    ref = w if ref is None else ref
    m = np.max(ref, axis=axis, keepdims=axis is not None)
    w = w / np.where(m > 0, m, 1.0)
    return np.where(w < _TINY, 0.0, w)


def _wavg(y, w, axis=-1):
    w = _unit(w, axis=axis)
    order = np.argsort(y, axis=axis, kind="stable")
    ys = np.take_along_axis(y, order, axis=axis)
    ws = np.take_along_axis(w, order, axis=axis)
    den = ws.sum(axis=axis)
    num = (ys * ws).sum(axis=axis)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)


def _scalar_wavg(y, w, what):
    out = float(_wavg(np.asarray(y, float), np.asarray(w, float)))
    if math.isnan(out):
        raise AllZeroFiring(f"{what}: total firing strength is zero")
    return out


# -- EIASC -------------------------------------------------------------------

def eiasc(firings, consequents):
    """Center-of-sets endpoints ``(y_l, y_r, L, R)``.

    ``L`` and ``R`` are the switch points: the number of rules (in ascending
    order of the respective consequent endpoint) taken at their upper firing
    strength for ``y_l``, and the number taken at their lower firing strength
    for ``y_r``.
    """
    fl, fu, yl, yu = _as_arrays(firings, consequents)
    fl, fu = _unit(fl, fu), _unit(fu)
    if not np.any(fu > 0):
        raise AllZeroFiring("eiasc: every upper firing strength is zero")
    n = fl.size

    order = np.argsort(yl, kind="stable")
    y, lo, up = yl[order], fl[order], fu[order]
    a = float(np.sum(y * lo))
    b = float(np.sum(lo))
    y, lo, up = y.tolist(), lo.tolist(), up.tolist()
    L = 0
    while True:
        d = up[L] - lo[L]
        a += y[L] * d
        b += d
        L += 1
        y_left = a / b if b > 0 else math.inf
        if L == n or y_left <= y[L]:
            break

    order = np.argsort(yu, kind="stable")
    y, lo, up = yu[order], fl[order], fu[order]
    a = float(np.sum(y * lo))
    b = float(np.sum(lo))
    y, lo, up = y.tolist(), lo.tolist(), up.tolist()
    R = n
    while True:
        d = up[R - 1] - lo[R - 1]
        a += y[R - 1] * d
        b += d
        y_right = a / b if b > 0 else -math.inf
        R -= 1
        if R == 0 or y_right >= y[R - 1]:
            break
    return y_left, y_right, L, R


def _eiasc_side(fl, fu, y, left):
    rows, n = y.shape
    a = (y * fl).sum(axis=1)
    b = fl.sum(axis=1)
    out = np.full(rows, np.nan)
    active = np.ones(rows, dtype=bool)
    fill = np.inf if left else -np.inf
    steps = range(n) if left else range(n - 1, -1, -1)
    for j in steps:
        d = fu[:, j] - fl[:, j]
        a = np.where(active, a + y[:, j] * d, a)
        b = np.where(active, b + d, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(b > 0, a / np.where(b > 0, b, 1.0), fill)
        last = j == n - 1 if left else j == 0
        if last:
            stop = active
        elif left:
            stop = active & (val <= y[:, j + 1])
        else:
            stop = active & (val >= y[:, j - 1])
        out[stop] = val[stop]
        active &= ~stop
        if not active.any():
            break
    out[~np.isfinite(out)] = np.nan
    return out


def eiasc_batch(fl, fu, yl, yu):
    """Row-wise EIASC over arrays of shape (rows, N); all-zero rows give NaN."""
    fl, fu, yl, yu = (np.atleast_2d(np.asarray(a, dtype=float)) for a in (fl, fu, yl, yu))
    fl, fu = _unit(fl, fu, axis=1), _unit(fu, axis=1)
    order = np.argsort(yl, axis=1, kind="stable")
    take = lambda arr: np.take_along_axis(arr, order, axis=1)  # noqa: E731
    y_l = _eiasc_side(take(fl), take(fu), take(yl), left=True)
    order = np.argsort(yu, axis=1, kind="stable")
    y_r = _eiasc_side(take(fl), take(fu), take(yu), left=False)
    return y_l, y_r


# -- oracle ------------------------------------------------------------------

def corner_oracle(firings, consequents):
    """Exhaustive ``(y_l, y_r)`` over all 2**N firing corners."""
    fl, fu, yl, yu = _as_arrays(firings, consequents)
    n = fl.size
    if n > ORACLE_MAX_RULES:
        raise TooLarge(f"corner enumeration limited to {ORACLE_MAX_RULES} rules, got {n}")
    fl, fu = _unit(fl, fu), _unit(fu)
    shifts = np.arange(n)
    best_l, best_r = math.inf, -math.inf
    for start in range(0, 1 << n, _ORACLE_CHUNK):
        codes = np.arange(start, min(start + _ORACLE_CHUNK, 1 << n))
        pick = ((codes[:, None] >> shifts) & 1).astype(bool)
        w = np.where(pick, fu, fl)
        den = w.sum(axis=1)
        ok = den > 0
        if not ok.any():
            continue
        w, den = w[ok], den[ok]
        best_l = min(best_l, float(np.min((w * yl).sum(axis=1) / den)))
        best_r = max(best_r, float(np.max((w * yu).sum(axis=1) / den)))
    if not math.isfinite(best_l):
        raise AllZeroFiring("corner_oracle: every corner has zero total firing")
    return best_l, best_r


# -- defuzzifiers ------------------------------------------------------------

def cos_defuzz(y_l: float, y_r: float) -> float:
    if y_l > y_r:
        raise ValueError(f"need y_l <= y_r, got {y_l} > {y_r}")
    return (y_l + y_r) / 2.0


def nt_defuzz(firings, consequents) -> float:
    """Nie-Tan: weights are ``f_lower + f_upper``; interval consequents use midpoints."""
    fl, fu, yl, yu = _as_arrays(firings, consequents)
    return _scalar_wavg((yl + yu) / 2.0, fl + fu, "nt")


def bmm_defuzz(firings, consequents, alpha: float = 0.5, beta: float = 0.5) -> float:
    fl, fu, yl, yu = _as_arrays(firings, consequents)
    y = (yl + yu) / 2.0
    return alpha * _scalar_wavg(y, fl, "bmm lower") + beta * _scalar_wavg(y, fu, "bmm upper")


def t1_weighted_average(levels, consequents) -> float:
    fl, fu, yl, yu = _as_arrays(levels, consequents)
    return _scalar_wavg((yl + yu) / 2.0, fl, "weighted average")


# -- pipeline ----------------------------------------------------------------

def _input_matrix(system, X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != system.n_inputs:
        raise DimensionError(f"expected inputs with {system.n_inputs} components, "
                             f"got shape {np.shape(X)}")
    if not np.all(np.isfinite(X)):
        raise ValueError("inputs must be finite")
    return X


def evaluate(system: FuzzySystem, x, reducer=None) -> ReductionResult:
    """Fire every rule at ``x`` and reduce with the system's (or the given) reducer."""
    system.check()
    red = system.reducer if reducer is None else Reducer.of(reducer)
    X = _input_matrix(system, x)
    fl, fu = fire_batch(system, X)
    yl, yu = consequent_bounds([r.consequent for r in system.rules], X)
    firings = list(zip(fl[0], fu[0]))
    cons = list(zip(yl[0], yu[0]))
    if red.name == "eiasc_cos":
        y_l, y_r, L, R = eiasc(firings, cons)
        return ReductionResult(y_l, y_r, cos_defuzz(y_l, y_r), red.name, (L, R))
    if red.name == "nt":
        y = nt_defuzz(firings, cons)
    elif red.name == "bmm":
        y = bmm_defuzz(firings, cons, red.alpha, red.beta)
    elif red.name == "t1_weighted_average":
        if system.kind != "t1":
            raise ValueError("t1_weighted_average requires a T1 system")
        y = t1_weighted_average(fl[0], cons)
    else:
        raise ValueError(f"unknown reducer {red.name!r}")
    return ReductionResult(y, y, y, red.name)


def evaluate_batch(system: FuzzySystem, X, reducer=None) -> BatchResult:
    """Vectorised :func:`evaluate`; rows with zero total firing come back as NaN."""
    system.check()
    red = system.reducer if reducer is None else Reducer.of(reducer)
    X = _input_matrix(system, X)
    fl, fu = fire_batch(system, X)
    yl, yu = consequent_bounds([r.consequent for r in system.rules], X)
    if red.name == "eiasc_cos":
        y_l, y_r = eiasc_batch(fl, fu, yl, yu)
        return BatchResult(y_l, y_r, (y_l + y_r) / 2.0)
    mid = (yl + yu) / 2.0
    if red.name == "nt":
        y = _wavg(mid, fl + fu)
    elif red.name == "bmm":
        y = red.alpha * _wavg(mid, fl) + red.beta * _wavg(mid, fu)
    elif red.name == "t1_weighted_average":
        if system.kind != "t1":
            raise ValueError("t1_weighted_average requires a T1 system")
        y = _wavg(mid, fl)
    else:
        raise ValueError(f"unknown reducer {red.name!r}")
    return BatchResult(y, y, y)
