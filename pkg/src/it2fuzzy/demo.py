"""The 2-input PI fuzzy controller worked example.

Inputs are the change of error and the error, both with two Gaussian MFs
centred at -1 and +1. The T1 controller uses sigma = 0.6; the IT2 controller
blurs sigma to [0.5, 0.7]. Rule consequents are -1, -0.5, 0.5 and 1.
"""

from __future__ import annotations

from .rulebase import CrispConstant, FuzzySystem, InputVariable, Reducer, Rule
from .sets import GaussianT1, GaussianUncertainStdIT2

DEMO_INPUT = (-0.2, -0.3)
DEMO_CONSEQUENTS = (-1.0, -0.5, 0.5, 1.0)
DEMO_TOL = 5e-4

# Published values for the worked example, keyed by check name.
PUBLISHED = {
    "t1.mu.N_edot": 0.4111,
    "t1.mu.P_edot": 0.1353,
    "t1.mu.N_e": 0.5063,
    "t1.mu.P_e": 0.0956,
    "t1.f1": 0.2082,
    "t1.f2": 0.0556,
    "t1.f3": 0.0685,
    "t1.f4": 0.0129,
    "t1.y": -0.5491,
    "it2.mu.N_edot": (0.2780, 0.5205),
    "it2.mu.P_edot": (0.0561, 0.2301),
    "it2.mu.N_e": (0.3753, 0.6065),
    "it2.mu.P_e": (0.0340, 0.1783),
    "it2.F1": (0.1044, 0.3157),
    "it2.F2": (0.0095, 0.0928),
    "it2.F3": (0.0211, 0.1395),
    "it2.F4": (0.0019, 0.0410),
    "it2.eiasc.y_l": -0.8846,
    "it2.eiasc.y_r": 0.0058,
    "it2.eiasc.y": -0.4394,
    "it2.nt.y": -0.4794,
    "it2.bmm.y": -0.5665,
}


def _grid_rules(edot_sets, e_sets):
    # rule order: (N,N), (N,P), (P,N), (P,P)
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    return tuple(Rule((edot_sets[i], e_sets[j]), CrispConstant(c))
                 for (i, j), c in zip(pairs, DEMO_CONSEQUENTS))


def _inputs():
    return (InputVariable("edot", -1.0, 1.0), InputVariable("e", -1.0, 1.0))


def demo_t1_system() -> FuzzySystem:
    edot = [GaussianT1(-1.0, 0.6, name="N_edot"), GaussianT1(1.0, 0.6, name="P_edot")]
    e = [GaussianT1(-1.0, 0.6, name="N_e"), GaussianT1(1.0, 0.6, name="P_e")]
    return FuzzySystem(_inputs(), _grid_rules(edot, e), kind="t1",
                       reducer=Reducer("t1_weighted_average"))


def demo_it2_system(reducer="eiasc_cos") -> FuzzySystem:
    edot = [GaussianUncertainStdIT2(-1.0, 0.5, 0.7, name="N_edot"),
            GaussianUncertainStdIT2(1.0, 0.5, 0.7, name="P_edot")]
    e = [GaussianUncertainStdIT2(-1.0, 0.5, 0.7, name="N_e"),
         GaussianUncertainStdIT2(1.0, 0.5, 0.7, name="P_e")]
    return FuzzySystem(_inputs(), _grid_rules(edot, e), kind="it2",
                       reducer=Reducer.of(reducer))


def compute_demo_values() -> dict:
    """Recompute every published quantity with this package."""
    from .reduction import evaluate
    from .rulebase import fire_it2, fire_t1

    x = DEMO_INPUT
    out = {}
    t1 = demo_t1_system()
    for k, var in enumerate(t1.inputs):
        for fs in t1.input_sets(k):
            out[f"t1.mu.{fs.name}"] = fs.membership(x[k])
    for n, rule in enumerate(t1.rules, start=1):
        out[f"t1.f{n}"] = fire_t1(rule, x, t1.t_norm)
    out["t1.y"] = evaluate(t1, x).y

    it2 = demo_it2_system()
    for k, var in enumerate(it2.inputs):
        for fs in it2.input_sets(k):
            out[f"it2.mu.{fs.name}"] = fs.interval(x[k])
    for n, rule in enumerate(it2.rules, start=1):
        f = fire_it2(rule, x, it2.t_norm)
        out[f"it2.F{n}"] = (f.f_lower, f.f_upper)
    res = evaluate(it2, x)
    out["it2.eiasc.y_l"] = res.y_l
    out["it2.eiasc.y_r"] = res.y_r
    out["it2.eiasc.y"] = res.y
    out["it2.nt.y"] = evaluate(it2, x, reducer="nt").y
    out["it2.bmm.y"] = evaluate(it2, x, reducer=Reducer("bmm", 0.5, 0.5)).y
    return out


def compare_demo(values=None, tol: float = DEMO_TOL):
    """Yield ``(name, published, computed, ok)`` for every published value."""
    values = compute_demo_values() if values is None else values
    for name, want in PUBLISHED.items():
        got = values[name]
        if isinstance(want, tuple):
            ok = all(abs(g - w) <= tol for g, w in zip(got, want))
        else:
            ok = abs(got - want) <= tol
        yield name, want, got, ok
