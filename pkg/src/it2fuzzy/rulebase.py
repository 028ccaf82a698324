"""Rules, fuzzy systems and firing strengths (singleton fuzzification)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np


MAX_RECOMMENDED_MFS = 7
T_NORMS = ("product", "minimum")
REDUCERS = ("eiasc_cos", "nt", "bmm", "t1_weighted_average")


class SystemValidationError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DimensionError(ValueError):
    pass


# -- consequents -------------------------------------------------------------

@dataclass(frozen=True)
class CrispConstant:
    c0: float

    kind = "constant"
    is_interval = False

    @property
    def n_params(self):
        return 1

    def n_inputs_ok(self, p):
        return True

    def value(self, x):
        return self.c0, self.c0


@dataclass(frozen=True)
class CrispInterval:
    c0_lower: float
    c0_upper: float

    kind = "interval"
    is_interval = True

    def __post_init__(self):
        if not self.c0_lower <= self.c0_upper:
            raise ValueError(f"interval consequent needs lower <= upper, "
                             f"got [{self.c0_lower}, {self.c0_upper}]")

    @property
    def n_params(self):
        return 2

    def n_inputs_ok(self, p):
        return True

    def value(self, x):
        return self.c0_lower, self.c0_upper


@dataclass(frozen=True)
class Linear:
    """``c0 + c1*x1 + ... + cp*xp``."""

    coeffs: tuple

    kind = "linear"
    is_interval = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def n_params(self):
        return len(self.coeffs)

    def n_inputs_ok(self, p):
        return len(self.coeffs) == p + 1

    def value(self, x):
        v = self.coeffs[0] + float(np.dot(self.coeffs[1:], x))
        return v, v


@dataclass(frozen=True)
class IntervalLinear:
    lower: tuple
    upper: tuple

    kind = "interval_linear"
    is_interval = True

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(c) for c in self.lower))
        object.__setattr__(self, "upper", tuple(float(c) for c in self.upper))
        if len(self.lower) != len(self.upper):
            raise ValueError("interval linear consequent needs equal coefficient counts")

    @property
    def n_params(self):
        return 2 * len(self.lower)

    def n_inputs_ok(self, p):
        return len(self.lower) == p + 1

    def value(self, x):
        lo = self.lower[0] + float(np.dot(self.lower[1:], x))
        hi = self.upper[0] + float(np.dot(self.upper[1:], x))
        # coefficient signs are unconstrained, so the endpoints can cross
        return min(lo, hi), max(lo, hi)


Consequent = Union[CrispConstant, CrispInterval, Linear, IntervalLinear]


def consequent_value(consequent: Consequent, x) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    if not consequent.n_inputs_ok(x.size):
        raise DimensionError(f"{consequent.kind} consequent has {consequent.n_params} "
                             f"coefficients but input has {x.size} components")
    return consequent.value(x)


def consequent_bounds(consequents: Sequence[Consequent], X: np.ndarray):
    """Lower/upper consequent values for a batch ``X`` of shape (rows, p)."""
    rows = X.shape[0]
    lo = np.empty((rows, len(consequents)))
    hi = np.empty_like(lo)
    for n, c in enumerate(consequents):
        if isinstance(c, CrispConstant):
            lo[:, n] = hi[:, n] = c.c0
        elif isinstance(c, CrispInterval):
            lo[:, n], hi[:, n] = c.c0_lower, c.c0_upper
        elif isinstance(c, Linear):
            lo[:, n] = hi[:, n] = c.coeffs[0] + X @ np.asarray(c.coeffs[1:])
        else:
            a = c.lower[0] + X @ np.asarray(c.lower[1:])
            b = c.upper[0] + X @ np.asarray(c.upper[1:])
            lo[:, n], hi[:, n] = np.minimum(a, b), np.maximum(a, b)
    return lo, hi


# -- rules and systems -------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    antecedents: tuple
    consequent: Consequent

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(self.antecedents))


@dataclass(frozen=True)
class FiringInterval:
    f_lower: float
    f_upper: float

    def __post_init__(self):
        if not 0.0 <= self.f_lower <= self.f_upper <= 1.0:
            raise ValueError(f"invalid firing interval [{self.f_lower}, {self.f_upper}]")


@dataclass(frozen=True)
class Reducer:
    name: str = "eiasc_cos"
    alpha: float = 0.5
    beta: float = 0.5

    @classmethod
    def of(cls, value: Union[str, "Reducer"], alpha=0.5, beta=0.5) -> "Reducer":
        if isinstance(value, Reducer):
            return value
        return cls(value, alpha, beta)


@dataclass(frozen=True)
class InputVariable:
    name: str
    lo: float
    hi: float

    @property
    def domain(self):
        return self.lo, self.hi


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()
    warnings: tuple = ()

    @property
    def ok(self):
        return not self.violations


@dataclass(frozen=True)
class FuzzySystem:
    inputs: tuple
    rules: tuple
    kind: str = "it2"
    t_norm: str = "product"
    reducer: Reducer = field(default_factory=Reducer)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "reducer", Reducer.of(self.reducer))

    @property
    def n_inputs(self):
        return len(self.inputs)

    @property
    def n_rules(self):
        return len(self.rules)

    def input_sets(self, k: int) -> list:
        """Distinct antecedent sets used on input ``k``, in first-use order."""
        seen = {}
        for rule in self.rules:
            if k < len(rule.antecedents):
                fs = rule.antecedents[k]
                seen.setdefault(id(fs), fs)
        return list(seen.values())

    @cached_property
    def validation(self) -> ValidationReport:
        return validate_system(self)

    def check(self):
        report = self.validation
        if not report.ok:
            raise SystemValidationError(report.violations)
        return self

    def replace(self, **changes) -> "FuzzySystem":
        fields = dict(inputs=self.inputs, rules=self.rules, kind=self.kind,
                      t_norm=self.t_norm, reducer=self.reducer)
        fields.update(changes)
        return FuzzySystem(**fields)


def validate_system(system: FuzzySystem) -> ValidationReport:
    """Collect every structural invariant violation; never raises."""
    v, w = [], []
    p = len(system.inputs)
    if p < 1:
        v.append("no inputs")
    if not system.rules:
        v.append("empty rulebase")
    if system.kind not in ("t1", "it2"):
        v.append(f"unknown system kind {system.kind!r}")
    if system.t_norm not in T_NORMS:
        v.append(f"unknown t-norm {system.t_norm!r}")
    red = system.reducer
    if red.name not in REDUCERS:
        v.append(f"unknown reducer {red.name!r}")
    if red.name == "t1_weighted_average" and system.kind != "t1":
        v.append("reducer/kind mismatch: t1_weighted_average requires a T1 system")
    if not (math.isfinite(red.alpha) and math.isfinite(red.beta)):
        v.append("bmm alpha and beta must be finite")
    for var in system.inputs:
        if not (math.isfinite(var.lo) and math.isfinite(var.hi) and var.lo < var.hi):
            v.append(f"input {var.name!r}: domain must satisfy lo < hi, got [{var.lo}, {var.hi}]")
    want_it2 = system.kind == "it2"
    for n, rule in enumerate(system.rules):
        if len(rule.antecedents) != p:
            v.append(f"rule {n}: has {len(rule.antecedents)} antecedents, system has {p} inputs")
        for k, fs in enumerate(rule.antecedents):
            if getattr(fs, "is_it2", None) is None:
                v.append(f"rule {n} antecedent {k}: not a fuzzy set")
            elif fs.is_it2 != want_it2:
                v.append(f"rule {n} antecedent {k}: {fs.family} set in a {system.kind} system")
        c = rule.consequent
        if not c.n_inputs_ok(p):
            v.append(f"rule {n}: {c.kind} consequent has {c.n_params} coefficients, needs {p + 1}")
        if system.kind == "t1" and c.is_interval:
            v.append(f"rule {n}: interval consequent in a t1 system")
    for k, var in enumerate(system.inputs):
        count = len(system.input_sets(k))
        if count > MAX_RECOMMENDED_MFS:
            w.append(f"input {var.name!r} uses {count} MFs; more than "
                     f"{MAX_RECOMMENDED_MFS} is hard to interpret")
    return ValidationReport(tuple(v), tuple(w))


# -- firing ------------------------------------------------------------------

def _fold(degrees, t_norm):
    if t_norm == "product":
        out = degrees[0]
        for d in degrees[1:]:
            out = out * d
        return out
    if t_norm == "minimum":
        return np.minimum.reduce(degrees) if len(degrees) > 1 else degrees[0]
    raise ValueError(f"unknown t-norm {t_norm!r}")


def _as_input(rule, x):
    x = np.asarray(x, dtype=float).ravel()
    if x.size != len(rule.antecedents):
        raise DimensionError(f"input has {x.size} components, rule has "
                             f"{len(rule.antecedents)} antecedents")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"input must be finite, got {x!r}")
    return x


def fire_t1(rule: Rule, x, t_norm: str = "product") -> float:
    x = _as_input(rule, x)
    return float(_fold([fs.membership(xk) for fs, xk in zip(rule.antecedents, x)], t_norm))


def fire_it2(rule: Rule, x, t_norm: str = "product") -> FiringInterval:
    x = _as_input(rule, x)
    pairs = [fs.interval(xk) for fs, xk in zip(rule.antecedents, x)]
    lo = _fold([p[0] for p in pairs], t_norm)
    hi = _fold([p[1] for p in pairs], t_norm)
    return FiringInterval(float(lo), float(hi))


def fire_batch(system: FuzzySystem, X: np.ndarray):
    """Firing bounds for every rule over a batch; arrays of shape (rows, N).

    T1 systems return identical lower and upper arrays. Membership values are
    computed once per distinct set and input.
    """
    cache = {}

    def memb(k, fs):
        key = (k, id(fs))
        if key not in cache:
            cache[key] = fs.interval(X[:, k])
        return cache[key]

    rows = X.shape[0]
    lo = np.empty((rows, system.n_rules))
    hi = np.empty_like(lo)
    for n, rule in enumerate(system.rules):
        pairs = [memb(k, fs) for k, fs in enumerate(rule.antecedents)]
        lo[:, n] = _fold([q[0] for q in pairs], system.t_norm)
        hi[:, n] = _fold([q[1] for q in pairs], system.t_norm)
    return lo, hi


def warn_if_crowded(system: FuzzySystem):
    for msg in system.validation.warnings:
        warnings.warn(msg, stacklevel=2)
