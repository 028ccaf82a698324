import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from it2fuzzy.optimize import blur_to_it2
from it2fuzzy.reduction import (AllZeroFiring, TooLarge, bmm_defuzz, corner_oracle, cos_defuzz,
                                eiasc, eiasc_batch, evaluate, evaluate_batch, nt_defuzz,
                                t1_weighted_average)
from it2fuzzy.rulebase import (CrispConstant, DimensionError, FiringInterval, FuzzySystem,
                               InputVariable, Reducer, Rule)
from it2fuzzy.sets import TrapezoidT1

X0 = (-0.2, -0.3)
DEMO_F = [(0.1044, 0.3157), (0.0095, 0.0928), (0.0211, 0.1395), (0.0019, 0.0410)]
DEMO_Y = [-1.0, -0.5, 0.5, 1.0]


def _instance(rng, n, interval_y=True):
    a, b = rng.random(n), rng.random(n)
    firings = list(zip(np.minimum(a, b), np.maximum(a, b)))
    c, d = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    if not interval_y:
        d = c
    return firings, list(zip(np.minimum(c, d), np.maximum(c, d)))


# -- examples ----------------------------------------------------------------

def test_eiasc_demo_endpoints(demo_it2):
    res = evaluate(demo_it2, X0)
    assert res.y_l == pytest.approx(-0.8846, abs=5e-4)
    assert res.y_r == pytest.approx(0.0058, abs=5e-4)
    assert res.y == pytest.approx(-0.4394, abs=5e-4)
    assert res.switch_points == (1, 2)


def test_eiasc_hand_worked_firings():
    yl, yr, L, R = eiasc([FiringInterval(*f) for f in DEMO_F], DEMO_Y)
    assert yl == pytest.approx(-0.8846, abs=5e-4)
    assert yr == pytest.approx(0.0058, abs=5e-4)


def test_nt_and_bmm_demo(demo_it2):
    assert evaluate(demo_it2, X0, reducer="nt").y == pytest.approx(-0.4794, abs=5e-4)
    assert evaluate(demo_it2, X0, reducer=Reducer("bmm", 0.5, 0.5)).y == pytest.approx(-0.5665, abs=5e-4)


def test_t1_demo_output(demo_t1):
    assert evaluate(demo_t1, X0).y == pytest.approx(-0.5491, abs=5e-4)


def test_nt_formula():
    f = [(0.2, 0.4), (0.1, 0.3)]
    assert nt_defuzz(f, [1.0, -1.0]) == pytest.approx((0.6 - 0.4) / 1.0)


def test_nt_interval_consequents_use_midpoints():
    assert nt_defuzz([(0.5, 0.5)], [(0.0, 2.0)]) == 1.0


def test_bmm_weights():
    f = [(0.2, 0.4), (0.2, 0.2)]
    lower = (0.2 * 1 + 0.2 * -1) / 0.4
    upper = (0.4 * 1 + 0.2 * -1) / 0.6
    assert bmm_defuzz(f, [1.0, -1.0], 0.3, 0.7) == pytest.approx(0.3 * lower + 0.7 * upper)


def test_t1_weighted_average():
    assert t1_weighted_average([0.5, 0.25], [1.0, -1.0]) == pytest.approx(0.25 / 0.75)


def test_cos_defuzz_rejects_reversed():
    assert cos_defuzz(-1, 3) == 1
    with pytest.raises(ValueError):
        cos_defuzz(1, 0)


def test_single_rule():
    yl, yr, L, R = eiasc([(0.2, 0.7)], [(-1.0, 2.0)])
    assert (yl, yr) == (-1.0, 2.0)


# -- failures ----------------------------------------------------------------

def test_all_zero_firing_raises():
    with pytest.raises(AllZeroFiring):
        eiasc([(0, 0), (0, 0)], [0, 1])
    with pytest.raises(AllZeroFiring):
        nt_defuzz([(0, 0)], [1])
    with pytest.raises(AllZeroFiring):
        corner_oracle([(0, 0)], [1])
    with pytest.raises(AllZeroFiring):
        bmm_defuzz([(0, 0.5)], [1])  # lower weights all zero


def test_zero_lower_but_positive_upper_is_defined():
    yl, yr, _, _ = eiasc([(0, 0.5), (0, 0.2)], [-1.0, 1.0])
    assert (yl, yr) == (-1.0, 1.0)


def test_oracle_too_large():
    n = 21
    with pytest.raises(TooLarge):
        corner_oracle([(0.1, 0.2)] * n, [0.0] * n)


def test_length_mismatch():
    with pytest.raises(DimensionError):
        eiasc([(0.1, 0.2)] * 3, [0.0] * 2)


@pytest.mark.parametrize("firings, cons", [
    ([(0.3, 0.2)], [0.0]),
    ([(-0.1, 0.2)], [0.0]),
    ([(0.1, 0.2)], [(1.0, 0.0)]),
])
def test_invalid_intervals(firings, cons):
    with pytest.raises(ValueError):
        eiasc(firings, cons)


def test_evaluate_dimension_error(demo_it2):
    with pytest.raises(DimensionError):
        evaluate(demo_it2, (0.1, 0.2, 0.3))


# -- oracle equivalence ------------------------------------------------------

def test_eiasc_matches_oracle_on_random_instances(rng):
    for trial in range(240):
        n = 2 + trial % 7
        firings, cons = _instance(rng, n, interval_y=bool(trial % 2))
        yl, yr, _, _ = eiasc(firings, cons)
        ol, orr = corner_oracle(firings, cons)
        assert abs(yl - ol) < 1e-9 and abs(yr - orr) < 1e-9


firing_lists = st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=n, max_size=n),
    st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 5)), min_size=n, max_size=n)))


def _normalise(raw):
    f, c = raw
    firings = [(min(a, b), max(a, b)) for a, b in f]
    cons = [(m, m + w) for m, w in c]
    return firings, cons


@settings(max_examples=300, deadline=None)
@given(firing_lists)
def test_eiasc_matches_oracle_property(raw):
    firings, cons = _normalise(raw)
    if not any(hi > 0 for _, hi in firings):
        with pytest.raises(AllZeroFiring):
            eiasc(firings, cons)
        return
    yl, yr, L, R = eiasc(firings, cons)
    ol, orr = corner_oracle(firings, cons)
    scale = 1 + max(abs(v) for c in cons for v in c)
    assert abs(yl - ol) <= 1e-9 * scale
    assert abs(yr - orr) <= 1e-9 * scale
    assert yl <= yr + 1e-12 * scale
    lo = min(c[0] for c in cons)
    hi = max(c[1] for c in cons)
    assert lo - 1e-12 * scale <= yl and yr <= hi + 1e-12 * scale
    assert 0 <= L <= len(cons) and 0 <= R <= len(cons)


def test_batch_matches_scalar(rng):
    rows, n = 300, 6
    fl, fu, yl, yu = (np.empty((rows, n)) for _ in range(4))
    for i in range(rows):
        firings, cons = _instance(rng, n)
        fl[i], fu[i] = np.array(firings).T
        yl[i], yu[i] = np.array(cons).T
    fl[0] = fu[0] = 0.0
    bl, br = eiasc_batch(fl, fu, yl, yu)
    assert np.isnan(bl[0]) and np.isnan(br[0])
    for i in range(1, rows):
        sl, sr, _, _ = eiasc(list(zip(fl[i], fu[i])), list(zip(yl[i], yu[i])))
        assert bl[i] == pytest.approx(sl, abs=1e-12)
        assert br[i] == pytest.approx(sr, abs=1e-12)


def test_widening_firing_widens_output(rng):
    for _ in range(100):
        firings, cons = _instance(rng, 5)
        yl, yr, _, _ = eiasc(firings, cons)
        wider = [(lo * 0.5, min(1.0, hi + 0.1)) for lo, hi in firings]
        wl, wr, _, _ = eiasc(wider, cons)
        assert wl <= yl + 1e-12 and wr >= yr - 1e-12


@settings(max_examples=100, deadline=None)
@given(firing_lists, st.floats(0.1, 10), st.floats(-5, 5))
def test_affine_equivariance(raw, scale, shift):
    firings, cons = _normalise(raw)
    if not any(hi > 0 for _, hi in firings):
        return
    yl, yr, _, _ = eiasc(firings, cons)
    moved = [(scale * a + shift, scale * b + shift) for a, b in cons]
    ml, mr, _, _ = eiasc(firings, moved)
    tol = 1e-9 * (1 + scale * 15 + abs(shift))
    assert ml == pytest.approx(scale * yl + shift, abs=tol)
    assert mr == pytest.approx(scale * yr + shift, abs=tol)


@settings(max_examples=100, deadline=None)
@given(firing_lists, st.floats(0.01, 1.0))
def test_scaling_firings_changes_nothing(raw, k):
    firings, cons = _normalise(raw)
    if not any(hi * k > 0 for _, hi in firings):
        return
    yl, yr, _, _ = eiasc(firings, cons)
    sl, sr, _, _ = eiasc([(k * a, k * b) for a, b in firings], cons)
    tol = 1e-9 * (1 + max(abs(v) for c in cons for v in c))
    assert sl == pytest.approx(yl, abs=tol) and sr == pytest.approx(yr, abs=tol)


def test_terminates_on_large_rulebase(rng):
    firings, cons = _instance(rng, 2000)
    yl, yr, L, R = eiasc(firings, cons)
    assert yl <= yr


def test_ties_in_consequents(rng):
    firings = [(0.1, 0.5)] * 6
    cons = [0.0, 0.0, 1.0, 1.0, 1.0, 0.0]
    yl, yr, _, _ = eiasc(firings, cons)
    ol, orr = corner_oracle(firings, cons)
    assert yl == pytest.approx(ol, abs=1e-12) and yr == pytest.approx(orr, abs=1e-12)


# -- collapse to type 1 ------------------------------------------------------

@pytest.mark.parametrize("reducer", ["eiasc_cos", "nt", Reducer("bmm", 0.5, 0.5)])
def test_zero_fou_collapse(demo_t1, reducer):
    it2 = blur_to_it2(demo_t1, 0.0, reducer=reducer)
    g = np.linspace(-1, 1, 41)
    X = np.array([(a, b) for a in g for b in g])
    t1 = evaluate_batch(demo_t1, X).y
    assert np.max(np.abs(evaluate_batch(it2, X).y - t1)) <= 1e-12


def test_evaluate_batch_matches_evaluate(demo_it2, rng):
    X = rng.uniform(-1, 1, size=(40, 2))
    for red in ["eiasc_cos", "nt", "bmm"]:
        b = evaluate_batch(demo_it2, X, reducer=red).y
        for i, x in enumerate(X):
            assert b[i] == pytest.approx(evaluate(demo_it2, x, reducer=red).y, abs=1e-12)


def test_batch_gap_marker():
    sys1 = FuzzySystem([InputVariable("x", 0, 3)],
                       [Rule([TrapezoidT1(0, 0, 1, 1)], CrispConstant(1.0))], kind="t1",
                       reducer="t1_weighted_average")
    res = evaluate_batch(sys1, [[0.5], [2.0]])
    assert res.y[0] == 1.0 and res.gaps.tolist() == [False, True]
    with pytest.raises(AllZeroFiring):
        evaluate(sys1, [2.0])
