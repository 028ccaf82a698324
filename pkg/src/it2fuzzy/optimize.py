"""Two-step evolutionary tuning of Gaussian fuzzy systems.

Step one tunes a type-1 system. Step two blurs its spreads into IT2
footprints and tunes those, with the unblurred baseline placed in the
initial swarm so the IT2 result can never be worse than the baseline.
The rule structure (a full grid of MF combinations) stays fixed; only
parameters move.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .reduction import evaluate_batch
from .rulebase import (MAX_RECOMMENDED_MFS, CrispConstant, CrispInterval, FuzzySystem,
                       InputVariable, IntervalLinear, Linear, Reducer, Rule)
from .sets import GaussianT1, GaussianUncertainStdIT2, TrapezoidIT2, TrapezoidT1

SIGMA_MIN_FRACTION = 0.01


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = np.asarray(self.y, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] != y.size:
            raise ValueError(f"X has shape {X.shape} but y has {y.size} rows")
        if y.size < 1:
            raise ValueError("dataset needs at least one row")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("dataset values must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_inputs(self):
        return self.X.shape[1]

    @classmethod
    def from_csv(cls, path, header: bool = False) -> "Dataset":
        from .io import read_dataset_csv
        return cls(*read_dataset_csv(path, header=header))

    def domains(self):
        out = []
        for col in self.X.T:
            lo, hi = float(col.min()), float(col.max())
            if lo == hi:
                lo, hi = lo - 0.5, hi + 0.5
            out.append((lo, hi))
        return out

    def target_range(self) -> float:
        return float(self.y.max() - self.y.min())


@dataclass(frozen=True)
class OptimizerConfig:
    population_size: int = 30
    max_generations: int = 200
    seed: int = 0
    mf_count: Union[int, tuple] = 3
    consequent_kind: str = "constant"
    reducer: str = "eiasc_cos"
    inertia: float = 0.7298
    cognitive: float = 1.4962
    social: float = 1.4962
    velocity_clamp: float = 0.2
    neighbourhood: Optional[int] = 1
    domains: Optional[tuple] = None
    penalty: Optional[float] = None

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.max_generations < 0:
            raise ValueError("max_generations must be >= 0")
        if self.consequent_kind not in ("constant", "linear"):
            raise ValueError(f"unknown consequent kind {self.consequent_kind!r}")
        counts = (self.mf_count,) if isinstance(self.mf_count, int) else tuple(self.mf_count)
        if any(c < 1 for c in counts):
            raise ValueError("mf_count must be >= 1")
        if any(c > MAX_RECOMMENDED_MFS for c in counts):
            warnings.warn(f"more than {MAX_RECOMMENDED_MFS} MFs per input", stacklevel=3)

    def mf_counts(self, p: int) -> tuple:
        if isinstance(self.mf_count, int):
            return (self.mf_count,) * p
        if len(self.mf_count) != p:
            raise ValueError(f"mf_count has {len(self.mf_count)} entries for {p} inputs")
        return tuple(self.mf_count)


@dataclass(frozen=True)
class FitnessReport:
    best_fitness: tuple
    system: FuzzySystem
    best_params: tuple
    evaluations: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def final_fitness(self) -> float:
        return self.best_fitness[-1]


# -- fitness -----------------------------------------------------------------

def rmse(system: FuzzySystem, dataset: Dataset, penalty: Optional[float] = None) -> float:
    """Root mean squared error; rows with zero total firing count as a ``penalty`` miss.

    The default penalty is ten times the target range (or 10 for a constant target).
    """
    if penalty is None:
        span = dataset.target_range()
        penalty = 10.0 * (span if span > 0 else 1.0)
    y = evaluate_batch(system, dataset.X).y
    err = np.where(np.isfinite(y), y - dataset.y, penalty)
    return float(np.sqrt(np.mean(err * err)))


# -- swarm -------------------------------------------------------------------

class ParticleSwarm:
    """Particle swarm with constriction coefficients, box constraints and elitism.

    Each particle follows the best personal position within ``neighbourhood``
    ring neighbours on either side; ``neighbourhood=None`` uses the global best.
    The ring spreads information slowly, which resists premature convergence.
    ``project`` maps clipped positions onto the feasible set when extra
    constraints apply.
    """

    def __init__(self, lower, upper, population_size=30, inertia=0.7298,
                 cognitive=1.4962, social=1.4962, rng=None,
                 project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 velocity_clamp: float = 0.2, neighbourhood: Optional[int] = 1):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        if self.lower.shape != self.upper.shape or np.any(self.lower > self.upper):
            raise ValueError("invalid bounds")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("bounds must be finite")
        self.population_size = population_size
        self.inertia, self.cognitive, self.social = inertia, cognitive, social
        self.rng = rng if rng is not None else np.random.default_rng()
        self.project = project
        self.velocity_clamp = velocity_clamp
        self.neighbourhood = neighbourhood

    def _feasible(self, X):
        X = np.clip(X, self.lower, self.upper)
        return self.project(X) if self.project is not None else X

    def _guides(self, pbest_f):
        P = pbest_f.size
        if self.neighbourhood is None or 2 * self.neighbourhood + 1 >= P:
            return np.full(P, int(np.argmin(pbest_f)))
        idx = np.arange(P)
        ring = np.stack([(idx + o) % P for o in range(-self.neighbourhood, self.neighbourhood + 1)], 1)
        return ring[idx, np.argmin(pbest_f[ring], axis=1)]

    def minimize(self, fitness, max_generations: int, seeds: Sequence = ()):
        """Return ``(best_position, best_fitness, trace, evaluations)``.

        ``seeds`` replace the first random particles. Fitness values are
        computed in particle order; NaN counts as +inf.
        """
        P, span = self.population_size, self.upper - self.lower
        X = self.rng.uniform(self.lower, self.upper, size=(P, self.lower.size))
        for j, s in enumerate(list(seeds)[:P]):
            X[j] = s
        X = self._feasible(X)
        V = self.rng.uniform(-0.1, 0.1, size=X.shape) * span
        vmax = self.velocity_clamp * span

        def score(pos):
            vals = np.array([fitness(row) for row in pos], dtype=float)
            return np.where(np.isnan(vals), np.inf, vals)

        f = score(X)
        evals = P
        pbest, pbest_f = X.copy(), f.copy()
        trace = [float(pbest_f.min())]
        for _ in range(max_generations):
            guide = pbest[self._guides(pbest_f)]
            r1 = self.rng.random(X.shape)
            r2 = self.rng.random(X.shape)
            V = (self.inertia * V + self.cognitive * r1 * (pbest - X)
                 + self.social * r2 * (guide - X))
            V = np.clip(V, -vmax, vmax)
            X = self._feasible(X + V)
            f = score(X)
            evals += P
            better = f < pbest_f
            pbest[better] = X[better]
            pbest_f[better] = f[better]
            trace.append(float(pbest_f.min()))
        g = int(np.argmin(pbest_f))
        return pbest[g].copy(), float(pbest_f[g]), trace, evals


# -- parameter layouts -------------------------------------------------------

def _unique_sets(system):
    """Distinct antecedent sets with the input index they belong to."""
    seen = {}
    for k in range(system.n_inputs):
        for fs in system.input_sets(k):
            seen.setdefault(id(fs), (k, fs))
    return list(seen.values())


def _rebuild(system, mapping, consequents, kind, reducer):
    rules = tuple(Rule(tuple(mapping[id(fs)] for fs in r.antecedents), c)
                  for r, c in zip(system.rules, consequents))
    return FuzzySystem(system.inputs, rules, kind=kind, t_norm=system.t_norm,
                       reducer=Reducer.of(reducer))


class _Layout:
    """Flat parameter vector <-> system, for a fixed rule structure."""

    def __init__(self, template: FuzzySystem, dataset: Dataset, it2: bool, reducer):
        self.template = template
        self.it2 = it2
        self.reducer = reducer
        self.sets = _unique_sets(template)
        for _, fs in self.sets:
            if not isinstance(fs, GaussianT1):
                raise ValueError(f"only Gaussian antecedents can be tuned, got {fs.family}")
        cons = [r.consequent for r in template.rules]
        if all(isinstance(c, CrispConstant) for c in cons):
            self.n_coef = 1
        elif all(isinstance(c, Linear) for c in cons):
            self.n_coef = template.n_inputs + 1
        else:
            raise ValueError("consequents must be all constant or all linear")

        lo, hi = [], []
        y_min, y_max = float(dataset.y.min()), float(dataset.y.max())
        r = y_max - y_min if y_max > y_min else 1.0
        widths = [v.hi - v.lo for v in template.inputs]
        for k, _ in self.sets:
            v, w = template.inputs[k], widths[k]
            lo += [v.lo, SIGMA_MIN_FRACTION * w]
            hi += [v.hi, w]
            if it2:
                lo += [0.0, 0.0]
                hi += [0.5 * w, 0.5 * w]
        for _ in template.rules:
            lo.append(y_min - 0.5 * r)
            hi.append(y_max + 0.5 * r)
            for w in widths[: self.n_coef - 1]:
                lo.append(-2.0 * r / w)
                hi.append(2.0 * r / w)
            if it2:
                lo += [0.0] * self.n_coef
                hi += [0.5 * r] * self.n_coef
        self.lower, self.upper = np.array(lo), np.array(hi)
        self.sigma_floor = np.array([SIGMA_MIN_FRACTION * widths[k] for k, _ in self.sets])

    @property
    def per_set(self):
        return 4 if self.it2 else 2

    @property
    def per_rule(self):
        return 2 * self.n_coef if self.it2 else self.n_coef

    def widen_to(self, vec):
        self.lower = np.minimum(self.lower, vec)
        self.upper = np.maximum(self.upper, vec)

    def project(self, X):
        if not self.it2:
            return X
        X = X.copy()
        for j in range(len(self.sets)):
            base = 4 * j
            sigma = X[:, base + 1]
            # keep the lower spread sigma - delta1 strictly positive
            limit = np.maximum(sigma - np.minimum(self.sigma_floor[j], sigma / 2.0), 0.0)
            X[:, base + 2] = np.minimum(X[:, base + 2], limit)
        return X

    def encode(self, system: FuzzySystem) -> np.ndarray:
        """Vector for ``system`` (T1, or IT2 with zero-width footprints for it2 layouts)."""
        vec = []
        for _, fs in _unique_sets(system):
            vec += [fs.m, fs.sigma] + ([0.0, 0.0] if self.it2 else [])
        for r in system.rules:
            c = r.consequent
            coefs = [c.c0] if isinstance(c, CrispConstant) else list(c.coeffs)
            vec += coefs + ([0.0] * self.n_coef if self.it2 else [])
        return np.asarray(vec, dtype=float)

    def decode(self, vec) -> FuzzySystem:
        vec = np.asarray(vec, dtype=float)
        mapping = {}
        pos = 0
        for _, fs in self.sets:
            m, s = float(vec[pos]), float(vec[pos + 1])
            if self.it2:
                d1, d2 = float(vec[pos + 2]), float(vec[pos + 3])
                mapping[id(fs)] = GaussianUncertainStdIT2(m, s - d1, s + d2, name=fs.name)
            else:
                mapping[id(fs)] = GaussianT1(m, s, name=fs.name)
            pos += self.per_set
        consequents = []
        for _ in self.template.rules:
            centre = vec[pos: pos + self.n_coef]
            if self.it2:
                half = vec[pos + self.n_coef: pos + 2 * self.n_coef]
                lo, hi = centre - half, centre + half
                if self.n_coef == 1:
                    consequents.append(CrispInterval(float(lo[0]), float(hi[0])))
                else:
                    consequents.append(IntervalLinear(tuple(lo), tuple(hi)))
            elif self.n_coef == 1:
                consequents.append(CrispConstant(float(centre[0])))
            else:
                consequents.append(Linear(tuple(centre)))
            pos += self.per_rule
        kind = "it2" if self.it2 else "t1"
        return _rebuild(self.template, mapping, consequents, kind, self.reducer)


def grid_t1_template(domains, mf_counts, consequent_kind="constant") -> FuzzySystem:
    """T1 system with evenly spaced Gaussians and one rule per MF combination."""
    p = len(domains)
    inputs = tuple(InputVariable(f"x{k + 1}", float(lo), float(hi))
                   for k, (lo, hi) in enumerate(domains))
    per_input = []
    for k, ((lo, hi), M) in enumerate(zip(domains, mf_counts)):
        centres = np.linspace(lo, hi, M) if M > 1 else [(lo + hi) / 2.0]
        sigma = (hi - lo) / (2.0 * (M - 1)) if M > 1 else (hi - lo) / 2.0
        per_input.append([GaussianT1(float(c), sigma, name=f"x{k + 1}_mf{j + 1}")
                          for j, c in enumerate(centres)])
    rules = []
    for combo in np.ndindex(*mf_counts):
        ante = tuple(per_input[k][j] for k, j in enumerate(combo))
        cons = CrispConstant(0.0) if consequent_kind == "constant" else Linear((0.0,) * (p + 1))
        rules.append(Rule(ante, cons))
    return FuzzySystem(inputs, tuple(rules), kind="t1", reducer=Reducer("t1_weighted_average"))


def _run(layout, dataset, config, seeds):
    rng = np.random.default_rng(config.seed)
    swarm = ParticleSwarm(layout.lower, layout.upper, config.population_size,
                          config.inertia, config.cognitive, config.social, rng,
                          project=layout.project, velocity_clamp=config.velocity_clamp,
                          neighbourhood=config.neighbourhood)

    def fitness(vec):
        return rmse(layout.decode(vec), dataset, config.penalty)

    t0 = time.perf_counter()
    best, _, trace, evals = swarm.minimize(fitness, config.max_generations, seeds)
    return FitnessReport(tuple(trace), layout.decode(best), tuple(float(v) for v in best),
                         evals, time.perf_counter() - t0)


def optimize_t1(dataset: Dataset, config: OptimizerConfig = OptimizerConfig()):
    """Tune a grid-structured T1 system; returns ``(system, FitnessReport)``."""
    domains = config.domains or dataset.domains()
    template = grid_t1_template(domains, config.mf_counts(dataset.n_inputs), config.consequent_kind)
    layout = _Layout(template, dataset, it2=False, reducer="t1_weighted_average")
    report = _run(layout, dataset, config, seeds=())
    return report.system, report


def blur_to_it2(t1_system: FuzzySystem, delta=0.0, reducer="eiasc_cos") -> FuzzySystem:
    """Turn a T1 system into an IT2 one by blurring every Gaussian spread.

    ``delta`` is a scalar or a ``(delta1, delta2)`` pair; each sigma becomes
    ``[sigma - delta1, sigma + delta2]``. Crisp consequents become zero-width
    intervals, so ``delta=0`` reproduces the T1 outputs.
    """
    t1_system.check()
    if t1_system.kind != "t1":
        raise ValueError("blur_to_it2 needs a T1 system")
    d1, d2 = (float(delta), float(delta)) if np.ndim(delta) == 0 else map(float, delta)
    if d1 < 0 or d2 < 0:
        raise ValueError("FOU widths must be >= 0")
    mapping = {}
    for _, fs in _unique_sets(t1_system):
        if isinstance(fs, GaussianT1):
            if fs.sigma - d1 <= 0:
                raise ValueError(f"delta1={d1} makes sigma1 = {fs.sigma - d1} <= 0 for set {fs.name!r}")
            mapping[id(fs)] = GaussianUncertainStdIT2(fs.m, fs.sigma - d1, fs.sigma + d2, name=fs.name)
        elif isinstance(fs, TrapezoidT1) and d1 == d2 == 0:
            mapping[id(fs)] = TrapezoidIT2(fs.a, fs.b, fs.c, fs.d, fs.a, fs.b, fs.c, fs.d, 1.0,
                                           name=fs.name)
        else:
            raise ValueError(f"cannot blur a {fs.family} set by {delta}")
    consequents = []
    for r in t1_system.rules:
        c = r.consequent
        if isinstance(c, CrispConstant):
            consequents.append(CrispInterval(c.c0, c.c0))
        else:
            consequents.append(IntervalLinear(c.coeffs, c.coeffs))
    return _rebuild(t1_system, mapping, consequents, "it2", reducer)


def optimize_it2(dataset: Dataset, config: OptimizerConfig, baseline: FuzzySystem):
    """Tune FOUs around ``baseline``, which is seeded into the initial swarm.

    With a reducer that collapses to the T1 weighted average on zero-width
    footprints (``eiasc_cos``, ``nt``, ``bmm`` with alpha = beta = 0.5) the
    final fitness is never above ``rmse(baseline, dataset)``.
    """
    baseline.check()
    layout = _Layout(baseline, dataset, it2=True, reducer=config.reducer)
    seed = layout.encode(baseline)
    layout.widen_to(seed)
    report = _run(layout, dataset, config, seeds=(seed,))
    return report.system, report


@dataclass(frozen=True)
class TwoStepResult:
    t1_system: FuzzySystem
    t1_report: FitnessReport
    it2_system: FuzzySystem
    it2_report: FitnessReport

    @property
    def improvement(self) -> float:
        return self.t1_report.final_fitness - self.it2_report.final_fitness


def two_step(dataset: Dataset, config: OptimizerConfig = OptimizerConfig()) -> TwoStepResult:
    t1, t1_report = optimize_t1(dataset, config)
    it2, it2_report = optimize_it2(dataset, config, t1)
    return TwoStepResult(t1, t1_report, it2, it2_report)
