"""Growth-index scan and the closed-form bound tables."""

import math

import numpy as np
import pytest

from growthlab.conditions import probe_gamma_relation
from growthlab.errors import ParameterError, SequenceIndexError
from growthlab.indices import (BoundReport, IndexEstimate, Interval,
                               _RatioScan, default_K_grid,
                               default_gamma_grid, estimate_gamma_M_upper,
                               estimate_gamma_omega, interval_I_omega,
                               lemma_bound)
from growthlab.sequences import (Block, BlockKind, BlockSequence, Family,
                                 build_gevrey, build_nq, build_qa_vanishing)
from growthlab.verdicts import Window
from growthlab.weights import (associated, exp_log_square, log_power,
                               power_compose, power_weight, scale)

WINDOW = Window(1.0e3, 1.0e9)


def test_default_grids():
    gg = default_gamma_grid()
    assert gg[0] == pytest.approx(0.05)
    assert gg[-1] == pytest.approx(4.0)
    assert len(gg) == 80
    kk = default_K_grid()
    assert len(kk) == 48
    assert kk[0] > 1.01
    assert kk[-1] == pytest.approx(1.0e3)
    # log-spaced: constant ratio
    ratios = kk[1:] / kk[:-1]
    assert np.allclose(ratios, ratios[0])


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_power_weight_bracket(s):
    est = estimate_gamma_omega(power_weight(s), WINDOW)
    assert not est.sentinel_infinite
    assert est.gamma_lower <= est.gamma_upper
    assert abs(est.gamma_lower - s) <= 0.05 * s
    assert abs(est.gamma_upper - s) <= 0.05 * s
    assert est.K_witnesses, "confirmed exponents must carry a witness"


def test_log_power_hits_infinite_sentinel():
    est = estimate_gamma_omega(log_power(2.0), WINDOW)
    assert est.sentinel_infinite
    assert math.isinf(est.gamma_lower)
    assert math.isinf(est.gamma_upper)
    assert est.stats["square_condition"] == "holds"


def test_exp_log_square_upper_bound():
    est = estimate_gamma_omega(exp_log_square(), WINDOW)
    assert not est.sentinel_infinite
    # window-limited confirmations cannot pass 1/(2 log t_max)
    cap = 1.0 / (2.0 * math.log(WINDOW.t_max))
    assert est.gamma_upper <= cap * 1.05
    assert est.gamma_upper <= 0.05


def test_scale_invariance_of_bracket():
    base = power_weight(2.0)
    est_a = estimate_gamma_omega(base, WINDOW)
    est_b = estimate_gamma_omega(scale(base, 2.0, 5.0), WINDOW)
    lo = max(est_a.gamma_lower, est_b.gamma_lower)
    hi = min(est_a.gamma_upper, est_b.gamma_upper)
    assert hi >= lo - 0.01, "affine rescaling must not move the bracket"


@pytest.mark.parametrize("a", [0.25, 0.4])
def test_power_compose_shifts_index(a):
    est = estimate_gamma_omega(power_compose(power_weight(2.0), a), WINDOW)
    target = 2.0 * a
    assert abs(est.gamma_lower - target) <= 0.1
    assert abs(est.gamma_upper - target) <= 0.1


def test_confirmation_is_monotone_with_shared_witness():
    omega = power_weight(1.0)
    est = estimate_gamma_omega(omega, WINDOW)
    scan = _RatioScan(omega, WINDOW, default_K_grid(), est.margin)
    grid = default_gamma_grid()
    for w in est.K_witnesses:
        gamma, K = w["gamma"], w["K"]
        for g_small in grid[grid < gamma][:3]:
            r = scan.cell_max(float(g_small), K)
            assert r is not None
            assert r < K * (1.0 - est.margin)


def test_scan_ceiling_flagged():
    est = estimate_gamma_omega(power_weight(5.0), WINDOW,
                               gamma_grid=[0.1, 0.2])
    assert est.sentinel_infinite
    assert est.gamma_lower == pytest.approx(0.2)
    assert math.isinf(est.gamma_upper)
    assert est.stats["scan_ceiling"] == pytest.approx(0.2)


def test_short_window_is_inconclusive():
    est = estimate_gamma_omega(power_weight(1.0), Window(1.0e3, 1.0e5))
    assert est.gamma_lower is None
    assert est.gamma_upper is None
    assert not est.sentinel_infinite
    assert not est.conclusive


def test_parameter_validation():
    with pytest.raises(ParameterError):
        estimate_gamma_omega(power_weight(1.0), WINDOW, margin=0.5)
    with pytest.raises(ParameterError):
        estimate_gamma_omega(power_weight(1.0), WINDOW,
                             gamma_grid=[0.2, 0.1])
    with pytest.raises(ParameterError):
        estimate_gamma_omega(power_weight(1.0), WINDOW, K_grid=[0.9, 2.0])


def test_estimate_json_shape():
    est = estimate_gamma_omega(power_weight(1.0), WINDOW)
    doc = est.to_json_dict()
    assert set(doc) == {"gamma_lower", "gamma_upper", "sentinel",
                        "K_witnesses", "window", "margin"}
    assert doc["sentinel"] is False
    assert doc["K_witnesses"][0].keys() == {"gamma", "K"}
    sent = estimate_gamma_omega(log_power(2.0), WINDOW).to_json_dict()
    assert sent["gamma_lower"] == "inf"
    assert sent["sentinel"] is True


def test_alpha_bounds_are_reciprocal():
    est = estimate_gamma_omega(power_weight(2.0), WINDOW)
    lo, hi = est.alpha_bounds
    assert lo == pytest.approx(1.0 / est.gamma_upper)
    assert hi == pytest.approx(1.0 / est.gamma_lower)
    assert estimate_gamma_omega(log_power(2.0), WINDOW).alpha_bounds == \
        (0.0, 0.0)


def test_staircase_scan_stays_below_ladder_exponent():
    seq = build_nq(3.0, 10)
    omega = associated(seq)
    window = Window.from_logs(math.log(100.0), omega.domain_log_max)
    est = estimate_gamma_omega(omega, window)
    assert not est.sentinel_infinite
    assert est.gamma_upper <= 0.9
    assert est.gamma_lower > 0.0
    # the bracket must not depend on shaving a decade off the window
    shorter = Window.from_logs(math.log(100.0),
                               omega.domain_log_max - math.log(10.0))
    est2 = estimate_gamma_omega(omega, shorter)
    assert est2.gamma_upper <= 0.9
    assert abs(est2.gamma_upper - est.gamma_upper) <= 0.1


# ---------------------------------------------------------------------------
# closed-form tables


def test_lemma_bound_table():
    assert math.isinf(lemma_bound(0.5).bound)
    assert lemma_bound(1.0).bound == pytest.approx(1.0)
    assert lemma_bound(2.0).bound == pytest.approx(0.5)
    expected = math.log(2.0) / (math.log(2.0) + math.log(1.17))
    assert lemma_bound(1.17).bound == pytest.approx(expected)
    with pytest.raises(ParameterError):
        lemma_bound(0.49)


def test_lemma_bound_json():
    assert lemma_bound(0.5).to_json_dict() == {"q0": 0.5, "bound": "inf"}
    doc = lemma_bound(2.0).to_json_dict()
    assert doc["bound"] == pytest.approx(0.5)


def test_interval_examples():
    band = interval_I_omega(2.0, 1.0)
    assert not band.empty
    assert band.upper == pytest.approx(0.5)
    assert 0.3 in band and 0.6 not in band
    assert interval_I_omega(1.0, 2.0).upper == pytest.approx(0.5)
    assert math.isinf(interval_I_omega(0.0).upper)
    assert math.isinf(interval_I_omega(3.0, 0.5).upper)
    assert interval_I_omega(math.inf).empty
    assert 0.1 not in interval_I_omega(math.inf)
    with pytest.raises(ParameterError):
        interval_I_omega(-1.0)
    with pytest.raises(ParameterError):
        interval_I_omega(1.0, 0.3)


def test_interval_json():
    assert interval_I_omega(math.inf).to_json_dict() == {"empty": True}
    doc = interval_I_omega(2.0).to_json_dict()
    assert doc["lower"] == 0.0
    assert doc["upper"] == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# sequence-side estimator


def test_gevrey_exponent_recovered_exactly():
    seq = build_gevrey(2.0, 1 << 20)
    beta = estimate_gamma_M_upper(seq, (2, 3, 4), (1, 1000))
    assert beta == pytest.approx(2.0, rel=1.0e-12)


def test_staircase_full_sweep_hits_straddle_floor():
    seq = build_nq(3.0, 8)
    beta = estimate_gamma_M_upper(seq)
    # flat ladder/ramp straddles drive the minimum ratio to one
    assert beta == pytest.approx(0.0, abs=1.0e-12)
    assert beta <= 0.5 + math.log(2.0) / (2.0 * math.log(3.0)) + 0.01


def test_ladder_end_subsequence_shows_half_exponent():
    seq = build_nq(3.0, 8)
    points = [cp.ladder_end for cp in seq.checkpoints]
    rows = probe_gamma_relation(seq, [2], points)
    assert rows[0]["min_ratio"] == pytest.approx(math.sqrt(2.0))
    assert rows[0]["exponent"] == pytest.approx(0.5)
    rows = probe_gamma_relation(seq, [2, 3, 4, 8], points)
    by_ell = {r["ell"]: r for r in rows}
    assert by_ell[4]["exponent"] == pytest.approx(0.5)
    assert by_ell[8]["exponent"] == pytest.approx(0.5)
    # an odd multiplier lands mid-octave and dips below one half
    assert by_ell[3]["exponent"] == pytest.approx(
        0.75 * math.log(2.0) / math.log(3.0))


def test_point_probe_validation():
    seq = build_nq(3.0, 4)
    with pytest.raises(SequenceIndexError):
        probe_gamma_relation(seq, [2], [seq.k_max])
    with pytest.raises(ParameterError):
        probe_gamma_relation(seq, [2], [0, 4])


def test_estimator_requires_bounded_doubling():
    # exponential quotients double without bound, so the spread cap
    # cannot transfer to the weight-function index
    runaway = BlockSequence(
        Family.GEVREY, {"synthetic": 1.0},
        [Block(BlockKind.GEOMETRIC, 1, 1025,
               log_mu_start=0.5, log_ratio=0.5)])
    with pytest.raises(ParameterError):
        estimate_gamma_M_upper(runaway, (2,), (1, 100))
    # vanishing staircases keep doubling bounded and pass the gate
    seq = build_qa_vanishing(1.5, 1.75, 6)
    assert estimate_gamma_M_upper(seq, (2,), (1, 100)) > 0.0


def test_bound_report_types():
    assert isinstance(lemma_bound(1.0), BoundReport)
    assert isinstance(interval_I_omega(1.0), Interval)
    assert isinstance(estimate_gamma_omega(power_weight(1.0), WINDOW),
                      IndexEstimate)
