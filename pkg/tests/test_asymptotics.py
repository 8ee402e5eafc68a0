"""Exponent fitting, decay classification and set-membership verdicts."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rapidnets import (
    EpsilonGrid,
    RegularSetSpec,
    SeminormProfile,
    SeqWindow,
    ceil_tenth,
    classify,
    classify_profile,
    fit_exponent,
    fit_profile,
)
from rapidnets.asymptotics import (
    DECAY_CLASSES,
    EXPONENT_CSV_COLUMNS,
    MIN_FIT_POINTS,
    ZERO_FLOOR,
)
from rapidnets.regular_sets import AFFINE_B_FLOOR

EPS16 = np.array(EpsilonGrid(eps0=0.5, ratio=0.75, count=16).values)


def _profile(values, scale="mixed", eps=None):
    eps = EPS16 if eps is None else np.asarray(eps)
    return SeminormProfile(
        scale_kind=scale,
        net_label="synthetic",
        eps=tuple(float(e) for e in eps),
        values=np.asarray(values, dtype=float),
        grid_meta=(),
        mask=None,
    )


# ---------------------------------------------------------------------------
# ceil_tenth


@pytest.mark.parametrize(
    "x,expected",
    [
        (0.0, 0.0),
        (2.3, 2.3),
        (2.301, 2.4),
        (2.2999999999, 2.3),
        (1e-12, 0.0),
        (-0.05, 0.0),
        (-1.34, -1.3),
    ],
)
def test_ceil_tenth(x, expected):
    assert ceil_tenth(x) == expected


# ---------------------------------------------------------------------------
# fit_exponent on synthetic series


@pytest.mark.parametrize("p", [0.0, 0.5, 1.0, 2.0, 3.7])
@pytest.mark.parametrize("c", [1e-3, 1.0, 1e3])
def test_exact_power_law_recovered(p, c):
    series = c * EPS16 ** (-p)
    fit = fit_exponent(series, EPS16)
    assert fit.decay_class == "polynomial"
    assert abs(fit.exponent - p) <= 1e-9
    assert fit.residual <= 1e-9
    assert fit.n_points == 16


def test_negative_exponent_series_needs_order_zero():
    fit = fit_exponent(3.0 * EPS16**2, EPS16)
    assert fit.exponent == pytest.approx(-2.0, abs=1e-9)
    assert fit.required_order == 0.0
    assert not fit.is_null_like


def test_required_order_rounds_up_to_tenths():
    fit = fit_exponent(EPS16 ** (-1.23), EPS16)
    assert fit.required_order == pytest.approx(1.3)


def test_flat_zero_convention():
    fit = fit_exponent(np.zeros(16), EPS16)
    assert fit.decay_class == "flat_zero"
    assert fit.exponent == 0.0 and fit.residual == 0.0
    assert fit.required_order == 0.0
    assert fit.is_null_like


def test_below_floor_counts_as_zero():
    series = np.full(16, ZERO_FLOOR / 10)
    fit = fit_exponent(series, EPS16)
    assert fit.decay_class == "flat_zero"


def test_insufficient_when_too_few_nonzero_points():
    series = np.zeros(16)
    series[:MIN_FIT_POINTS - 1] = 1.0
    fit = fit_exponent(series, EPS16)
    assert fit.decay_class == "insufficient"
    assert fit.exponent is None and fit.residual is None
    assert fit.required_order is None
    assert fit.n_points == MIN_FIT_POINTS - 1


def test_exactly_min_points_is_enough():
    series = np.zeros(16)
    series[:MIN_FIT_POINTS] = EPS16[:MIN_FIT_POINTS] ** (-2.0)
    fit = fit_exponent(series, EPS16)
    assert fit.decay_class == "polynomial"
    assert fit.exponent == pytest.approx(2.0, abs=1e-9)


def test_superpolynomial_detection():
    series = np.exp(-1.0 / EPS16)
    fit = fit_exponent(series, EPS16)
    assert fit.decay_class == "superpolynomial"
    assert fit.exponent is None
    assert fit.required_order == 0.0
    assert fit.is_null_like
    slopes = np.array(fit.window_slopes)
    assert np.all(np.diff(slopes) > 0)
    assert slopes[-1] >= 8.0


def test_superpolynomial_respects_m_max():
    series = np.exp(-1.0 / EPS16)
    # a huge threshold turns the same series back into a (bad) power fit
    fit = fit_exponent(series, EPS16, m_max=1000)
    assert fit.decay_class == "polynomial"


def test_power_decay_past_threshold_counts_as_superpolynomial():
    # constant slope 9 >= m_max with no dip: treated as beyond the order window
    fit = fit_exponent(EPS16 ** 9.0, EPS16)
    assert fit.decay_class == "superpolynomial"


def test_steep_flattening_series_stays_polynomial():
    # slope exceeds the threshold early but decreases toward 9, so the
    # superpolynomial gate does not fire and a power law is fitted
    series = EPS16 ** 9.0 * (1.0 + EPS16)
    fit = fit_exponent(series, EPS16)
    assert fit.decay_class == "polynomial"
    assert fit.exponent == pytest.approx(-9.0, abs=0.2)


def test_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        fit_exponent(np.ones(5), EPS16)
    with pytest.raises(ValueError):
        fit_exponent(-np.ones(16), EPS16)


def test_scale_invariance_of_exponent():
    base = EPS16 ** (-1.7)
    e1 = fit_exponent(base * 1e3, EPS16).exponent
    e2 = fit_exponent(base * 1e-3, EPS16).exponent
    assert abs(e1 - e2) <= 1e-9


def test_grid_robustness_for_noisy_power_law():
    rng = np.random.default_rng(5)
    other = np.array(EpsilonGrid(eps0=0.4, ratio=0.8, count=20).values)
    for grid in (EPS16, other):
        noise = np.exp(rng.normal(0.0, 1e-3, size=len(grid)))
        fit = fit_exponent(grid ** (-2.0) * noise, grid)
        assert abs(fit.exponent - 2.0) <= 0.05


@given(
    p=st.floats(min_value=-5.0, max_value=8.0),
    c=st.floats(min_value=1e-6, max_value=1e6),
)
@settings(max_examples=100, deadline=None)
def test_power_law_recovery_property(p, c):
    fit = fit_exponent(c * EPS16 ** (-p), EPS16)
    assert fit.decay_class == "polynomial"
    assert abs(fit.exponent - p) <= 1e-7


# ---------------------------------------------------------------------------
# profiles


def test_fit_profile_tables_and_rows():
    vals = np.stack(
        [np.outer([1.0, 2.0], [1.0, 0.5]) * e ** (-1.0) for e in EPS16]
    )
    vals[:, 1, 1] = 0.0  # one flat_zero cell
    prof = fit_profile(_profile(vals))
    table = prof.exponent_table()
    assert table.shape == (2, 2)
    assert table[0, 0] == pytest.approx(1.0, abs=1e-9)
    assert prof.fit(1, 1).decay_class == "flat_zero"
    assert prof.class_table()[0][0] == "polynomial"
    assert not prof.all_null_like()
    assert prof.insufficient_cells() == ()
    rows = prof.to_rows()
    assert len(rows) == 4
    assert tuple(rows[0]) == EXPONENT_CSV_COLUMNS == ("q", "l", "exponent", "residual", "decay_class")


def test_decay_class_vocabulary():
    assert DECAY_CLASSES == ("polynomial", "superpolynomial", "flat_zero", "insufficient")


# ---------------------------------------------------------------------------
# classification against sequence sets


def _power_profile(orders, scale="mixed"):
    """values[k, q, l] = eps_k^-orders[q][l]."""
    orders = np.asarray(orders, dtype=float)
    vals = np.stack([e ** (-orders) for e in EPS16])
    return _profile(vals, scale=scale)


def test_classify_arity_mismatch_raises():
    prof = fit_profile(_power_profile([[1.0]]))
    with pytest.raises(ValueError):
        classify(prof, RegularSetSpec(kind="all", arity="single"))
    dprof = fit_profile(_power_profile([[1.0], [2.0]], scale="derivative"))
    with pytest.raises(ValueError):
        classify(dprof, RegularSetSpec(kind="all", arity="double"))


def test_classify_moderate_against_all():
    prof = fit_profile(_power_profile([[1.0, 0.0], [2.0, 1.0]]))
    v = classify(prof, RegularSetSpec(kind="all", arity="double"))
    assert v.moderate is True
    assert v.negligible is False
    assert v.window[0] == 1 and v.window[1] == 1
    assert v.window[2] == (min(EPS16), max(EPS16))
    assert v.required_orders[1, 0] == pytest.approx(2.0)
    assert v.domination.feasible


def test_classify_witness_parameters_per_kind():
    # derivative orders (0, 1, 2, 3, 4); finite windows are always dominated
    # by the unrestricted, bounded and affine families, so the witness is
    # the interesting part; only custom sets can come back infeasible
    prof = fit_profile(
        _power_profile([[float(q)] for q in range(5)], scale="derivative")
    )
    v_all = classify(prof, RegularSetSpec(kind="all", arity="single"))
    assert v_all.moderate is True
    assert v_all.domination.witness_params is None
    assert v_all.domination.margin == 0.0

    v_bnd = classify(prof, RegularSetSpec(kind="bounded", arity="single"))
    assert v_bnd.moderate is True
    assert v_bnd.domination.witness_params["c"] == pytest.approx(4.0)

    v_aff = classify(prof, RegularSetSpec(kind="affine", arity="single"))
    assert v_aff.moderate is True
    assert v_aff.domination.witness_params["a"] == pytest.approx(1.0, abs=1e-9)
    assert v_aff.domination.witness_params["b"] == pytest.approx(AFFINE_B_FLOOR)

    stingy = RegularSetSpec(
        kind="custom",
        arity="single",
        generators=((1.0, 1.0, 1.0, 1.0, 1.0),),
        closure_depth=0,
    )
    v_cus = classify(prof, stingy)
    assert v_cus.moderate is False
    assert v_cus.negligible is False
    assert v_cus.domination.margin == float("-inf")


def test_classify_indeterminate_is_never_moderate():
    vals = np.zeros((16, 1, 1))
    vals[:3, 0, 0] = 1.0
    v = classify(fit_profile(_profile(vals)), RegularSetSpec(kind="all", arity="double"))
    assert v.moderate is None and v.negligible is None
    assert v.required_orders is None
    assert any("insufficient" in n for n in v.notes)


def test_negligible_verdict_independent_of_spec_kind():
    vals = np.stack([np.full((2, 2), np.exp(-1.0 / e)) for e in EPS16])
    prof = fit_profile(_profile(vals))
    specs = [
        RegularSetSpec(kind="all", arity="double"),
        RegularSetSpec(kind="bounded", arity="double"),
        RegularSetSpec(
            kind="custom", arity="double", generators=(((0.0, 0.0), (0.0, 0.0)),)
        ),
    ]
    verdicts = [classify(prof, s) for s in specs]
    assert all(v.negligible is True for v in verdicts)
    assert all(v.moderate is True for v in verdicts)


def test_classify_profile_convenience_matches_two_step():
    prof = _power_profile([[1.0, 0.0], [2.0, 1.0]])
    spec = RegularSetSpec(kind="all", arity="double")
    v1 = classify_profile(prof, spec)
    v2 = classify(fit_profile(prof), spec)
    assert v1 == v2


def test_custom_set_membership_depends_on_generators():
    prof = fit_profile(_power_profile([[1.0], [2.0], [3.0]], scale="derivative"))
    generous = RegularSetSpec(
        kind="custom", arity="single", generators=((5.0, 5.0, 5.0),), closure_depth=0
    )
    assert classify(prof, generous).moderate is True
    stingy = RegularSetSpec(
        kind="custom", arity="single", generators=((1.0, 1.0, 1.0),), closure_depth=0
    )
    assert classify(prof, stingy).moderate is False


def test_weight_scale_required_orders_use_row_zero():
    prof = fit_profile(_power_profile([[3.0, 2.0, 1.0]], scale="weight"))
    v = classify(prof, RegularSetSpec(kind="all", arity="single"))
    assert isinstance(v.required_orders, SeqWindow)
    assert v.required_orders.values == (3.0, 2.0, 1.0)
