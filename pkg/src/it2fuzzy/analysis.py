"""Coverage, continuity and parameter accounting for fuzzy systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .reduction import evaluate_batch
from .rulebase import CrispConstant, CrispInterval, FuzzySystem, IntervalLinear, Linear
from .sets import GaussianT1, GaussianUncertainMeanIT2, GaussianUncertainStdIT2, TrapezoidIT2, TrapezoidT1

CONTINUOUS = "continuous"
JUMPS = "jump_discontinuities_possible"
GAPS_AND_JUMPS = "gap_and_jump_possible"


@dataclass(frozen=True)
class AxisCoverage:
    name: str
    umf_covered: bool
    lmf_covered: bool
    uncovered_umf: tuple
    uncovered_lmf: tuple
    method: str


@dataclass(frozen=True)
class CoverageReport:
    axes: tuple
    predicted_continuity: str


# -- coverage ----------------------------------------------------------------

def _support(fs, lower: bool):
    """Open/closed support of a trapezoidal UMF or LMF as (l, r, l_closed, r_closed)."""
    if isinstance(fs, TrapezoidIT2) and lower:
        a, b, c, d = fs.e, fs.f, fs.g, fs.i
    else:
        a, b, c, d = fs.a, fs.b, fs.c, fs.d
    return a, d, a == b, c == d


def _analytic_uncovered(pieces, lo, hi):
    pieces = sorted(pieces, key=lambda s: (s[0], not s[2]))
    comps = []
    for l, r, lc, rc in pieces:
        if comps:
            L, R, Lc, Rc = comps[-1]
            if l < R or (l == R and (Rc or lc)):
                if r > R:
                    comps[-1] = (L, r, Lc, rc)
                elif r == R:
                    comps[-1] = (L, R, Lc, Rc or rc)
                continue
        comps.append((l, r, lc, rc))

    gaps = []
    cur, cur_covered = lo, False
    for l, r, lc, rc in comps:
        if r < lo or (r == lo and not rc) or l > hi or (l == hi and not lc):
            continue
        if l < lo:
            l, lc = lo, True
        if r > hi:
            r, rc = hi, True
        if cur < l or (cur == l and not cur_covered and not lc):
            gaps.append((cur, l))
        cur, cur_covered = r, rc
    if cur < hi or (cur == hi and not cur_covered):
        gaps.append((cur, hi))
    return tuple(gaps)


def _sampled_uncovered(grid, covered):
    runs = []
    start = None
    for j, ok in enumerate(covered):
        if not ok and start is None:
            start = j
        elif ok and start is not None:
            runs.append((float(grid[start]), float(grid[j - 1])))
            start = None
    if start is not None:
        runs.append((float(grid[start]), float(grid[-1])))
    return tuple(runs)


def coverage_report(system: FuzzySystem, resolution: int = 1001) -> CoverageReport:
    """Which parts of each input domain the UMFs and LMFs leave uncovered.

    A point is UMF-covered when some UMF is positive there and LMF-covered when
    the LMF memberships sum to more than zero. Continuity is predicted from
    that: LMF coverage everywhere means a continuous mapping, LMF holes allow
    jumps, UMF holes add undefined gaps.
    """
    system.check()
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    axes = []
    for k, var in enumerate(system.inputs):
        sets = system.input_sets(k)
        if all(isinstance(fs, (TrapezoidT1, TrapezoidIT2)) for fs in sets):
            up = _analytic_uncovered([_support(fs, False) for fs in sets], var.lo, var.hi)
            low = _analytic_uncovered([_support(fs, True) for fs in sets], var.lo, var.hi)
            method = "analytic"
        else:
            grid = np.linspace(var.lo, var.hi, resolution)
            pairs = [fs.interval(grid) for fs in sets]
            umf_max = np.max([q[1] for q in pairs], axis=0)
            lmf_sum = np.sum([q[0] for q in pairs], axis=0)
            up = _sampled_uncovered(grid, umf_max > 0)
            low = _sampled_uncovered(grid, lmf_sum > 0)
            method = "sampled"
        axes.append(AxisCoverage(var.name, not up, not low, up, low, method))
    if all(a.lmf_covered for a in axes):
        cls = CONTINUOUS
    elif all(a.umf_covered for a in axes):
        cls = JUMPS
    else:
        cls = GAPS_AND_JUMPS
    return CoverageReport(tuple(axes), cls)


# -- surfaces ----------------------------------------------------------------

@dataclass(frozen=True)
class JumpCandidate:
    cell_a: tuple
    cell_b: tuple
    delta: float


@dataclass(frozen=True)
class SurfaceSample:
    grid: tuple
    outputs: np.ndarray
    jump_candidates: tuple
    jump_threshold: float
    axes: tuple

    @property
    def gap_count(self) -> int:
        return int(np.count_nonzero(~np.isfinite(self.outputs)))


def default_jump_threshold(outputs: np.ndarray) -> float:
    """Ten times the median nonzero step between finite neighbouring cells."""
    steps = []
    for ax in range(outputs.ndim):
        d = np.abs(np.diff(outputs, axis=ax))
        steps.append(d[np.isfinite(d)].ravel())
    steps = np.concatenate(steps) if steps else np.empty(0)
    steps = steps[steps > 0]
    if steps.size == 0:
        return np.inf
    return 10.0 * float(np.median(steps))


def surface_sample(system: FuzzySystem, resolution: int = 101,
                   jump_threshold: Optional[float] = None, reducer=None,
                   axes: Optional[tuple] = None, fixed: Optional[dict] = None) -> SurfaceSample:
    """Evaluate the input-output map on a regular grid.

    Systems with more than two inputs are sliced along ``axes`` (default the
    first two) with the remaining inputs held at ``fixed`` values or their
    domain midpoints. Cells with zero total firing are NaN gap markers.
    """
    system.check()
    p = system.n_inputs
    if axes is None:
        axes = tuple(range(min(p, 2)))
    axes = tuple(axes)
    if not 1 <= len(axes) <= 2 or any(not 0 <= a < p for a in axes):
        raise ValueError(f"invalid slice axes {axes} for {p} inputs")
    fixed = dict(fixed or {})
    grid = tuple(np.linspace(system.inputs[a].lo, system.inputs[a].hi, resolution) for a in axes)
    mesh = np.meshgrid(*grid, indexing="ij")
    X = np.empty((mesh[0].size, p))
    for k, var in enumerate(system.inputs):
        X[:, k] = fixed.get(k, (var.lo + var.hi) / 2.0)
    for a, m in zip(axes, mesh):
        X[:, a] = m.ravel()
    y = evaluate_batch(system, X, reducer=reducer).y.reshape(mesh[0].shape)

    thr = default_jump_threshold(y) if jump_threshold is None else float(jump_threshold)
    jumps = []
    for ax in range(y.ndim):
        d = np.diff(y, axis=ax)
        with np.errstate(invalid="ignore"):
            hits = np.argwhere(np.isfinite(d) & (np.abs(d) > thr))
        for idx in hits:
            a = tuple(int(i) for i in idx)
            b = list(a)
            b[ax] += 1
            jumps.append(JumpCandidate(a, tuple(b), float(d[tuple(idx)])))
    return SurfaceSample(grid, y, tuple(jumps), thr, axes)


# -- parameter accounting ----------------------------------------------------

@dataclass(frozen=True)
class ParamCount:
    stored_count: int
    table_formula_count: Optional[int]
    formula_name: str
    formula: str = ""
    note: str = ""


_T1_GAUSS = (GaussianT1,)
_IT2_GAUSS = (GaussianUncertainMeanIT2, GaussianUncertainStdIT2)


def param_count(system: FuzzySystem) -> ParamCount:
    """Scalar parameter count, compared with the textbook formulas.

    Antecedents are counted per rule (as in the usual (2p+1)N style totals),
    so sets shared between rules are counted once per use.
    """
    p, N = system.n_inputs, system.n_rules
    stored = sum(sum(fs.n_params for fs in r.antecedents) + r.consequent.n_params
                 for r in system.rules)
    ante = [fs for r in system.rules for fs in r.antecedents]
    cons = [r.consequent for r in system.rules]

    def all_of(items, types):
        return all(isinstance(x, types) for x in items)

    if system.kind == "t1" and all_of(ante, _T1_GAUSS):
        if all_of(cons, CrispConstant):
            return ParamCount(stored, (2 * p + 1) * N, "t1_mamdani", "(2p+1)N")
        if all_of(cons, Linear):
            return ParamCount(stored, (3 * p + 1) * N, "t1_tsk", "(3p+1)N")
    if system.kind == "it2" and all_of(ante, _IT2_GAUSS):
        if all_of(cons, CrispInterval):
            table = (3 * p + 3) * N
            note = (f"the (3p+3)N total implies 3 consequent scalars per rule but an "
                    f"interval consequent has 2; stored count is (3p+2)N = {stored}")
            return ParamCount(stored, table, "it2_mamdani", "(3p+3)N", note)
        if all_of(cons, IntervalLinear):
            return ParamCount(stored, (5 * p + 2) * N, "it2_tsk", "(5p+2)N")
    return ParamCount(stored, None, "custom")
