import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memlogic.device import (
    PRESETS,
    InvalidDriveError,
    Pulse,
    SwitchEvent,
    TransistorModel,
    VariabilityParams,
    apply_pulse,
    binarize,
    default_boundary,
    form_by_ramp,
    preset,
    read_resistance,
    sample_fresh_cell,
)

PARAMS = VariabilityParams()
T = TransistorModel()
NOISE_FREE = VariabilityParams(
    lrs_sigma_c2c=0.0, lrs_sigma_d2d=0.0, hrs_sigma_c2c=0.0, hrs_sigma_d2d=0.0,
    v_set_th_sigma=0.0, v_reset_th_sigma=0.0, v_form_th_sigma=0.0,
    read_noise_lrs=0.0, read_noise_hrs=0.0)


def formed_cell(params=PARAMS, seed=0, state="hrs"):
    rng = np.random.default_rng(seed)
    cell = sample_fresh_cell(params, rng, "c")
    form_by_ramp(cell, T, rng)
    if state == "hrs":
        apply_pulse(cell, Pulse(0.0, 1.6, 3.0, 1e-6), T, rng)
    return cell, rng


# ------------------------------------------------------------------ sampling

def test_zero_d2d_gives_global_medians():
    params = PARAMS.replace(lrs_sigma_d2d=0.0, hrs_sigma_d2d=0.0)
    rng = np.random.default_rng(1)
    for _ in range(5):
        cell = sample_fresh_cell(params, rng)
        assert cell.lrs_median_cell == params.lrs_median
        assert cell.hrs_median_cell == params.hrs_median


def test_fresh_cell_is_pristine_and_high_ohmic():
    rng = np.random.default_rng(2)
    cell = sample_fresh_cell(PARAMS, rng)
    assert not cell.is_formed
    assert cell.resistance >= 10 * cell.hrs_median_cell


def test_population_ratio_near_anchor():
    # 10 cells x 100 cycles; the per-cycle HRS/LRS ratio averages close to
    # the 19.4 design anchor (within the 20% statistical window).
    rng = np.random.default_rng(3)
    ratios = []
    for ci in range(10):
        cell = sample_fresh_cell(PARAMS, rng, f"c{ci}")
        form_by_ramp(cell, T, rng)
        for _ in range(100):
            apply_pulse(cell, Pulse(0.0, 1.6, 3.0, 1e-6), T, rng)
            r_hrs = cell.resistance
            apply_pulse(cell, Pulse(1.3, 0.0, 1.3, 1e-6), T, rng)
            r_lrs = cell.resistance
            ratios.append(r_hrs / r_lrs)
    mean_ratio = sum(ratios) / len(ratios)
    assert 19.4 * 0.8 <= mean_ratio <= 19.4 * 1.2


def test_d2d_spread_matches_configured_sigma():
    # Statistical estimator oracle: sample std-dev of ln(per-cell median)
    # over 1000 cells must reproduce sigma_d2d within 10%.
    rng = np.random.default_rng(4)
    cells = [sample_fresh_cell(PARAMS, rng) for _ in range(1000)]
    logs = np.log([c.lrs_median_cell for c in cells])
    assert abs(np.std(logs) - PARAMS.lrs_sigma_d2d) <= 0.1 * PARAMS.lrs_sigma_d2d
    logs = np.log([c.hrs_median_cell for c in cells])
    assert abs(np.std(logs) - PARAMS.hrs_sigma_d2d) <= 0.1 * PARAMS.hrs_sigma_d2d


# ------------------------------------------------------------------- pulses

def test_set_pulse_on_hrs():
    cell, rng = formed_cell()
    assert cell.state == "hrs"
    event = apply_pulse(cell, Pulse(1.3, 0.0, 1.3, 1e-6), T, rng)
    assert event == SwitchEvent.SET
    assert cell.state == "lrs"


def test_reset_pulse_on_lrs():
    cell, rng = formed_cell(state="lrs")
    assert cell.state == "lrs"
    event = apply_pulse(cell, Pulse(0.0, 1.6, 3.0, 1e-6), T, rng)
    assert event == SwitchEvent.RESET
    assert cell.state == "hrs"
    assert cell.cycle_count == 1  # the reset completes one switching cycle


def test_set_pulse_on_lrs_is_noop():
    cell, rng = formed_cell(state="lrs")
    r_before = cell.resistance
    event = apply_pulse(cell, Pulse(1.3, 0.0, 1.3, 1e-6), T, rng)
    assert event == SwitchEvent.NONE
    assert cell.resistance == r_before


def test_closed_gate_is_identity():
    for state in ("hrs", "lrs"):
        cell, rng = formed_cell(state=state)
        r_before, s_before = cell.resistance, cell.state
        for v_te, v_be in ((1.3, 0.0), (0.0, 1.6), (4.0, 0.0)):
            event = apply_pulse(cell, Pulse(v_te, v_be, 0.0, 1e-6), T, rng)
            assert event == SwitchEvent.NONE
            assert (cell.resistance, cell.state) == (r_before, s_before)


def test_forming_threshold_and_ramp():
    rng = np.random.default_rng(7)
    cell = sample_fresh_cell(PARAMS, rng)
    ev = apply_pulse(cell, Pulse(cell.v_form_th - 0.05, 0.0, 3.0, 1e-6), T, rng)
    assert ev == SwitchEvent.NONE and not cell.is_formed
    ev = apply_pulse(cell, Pulse(cell.v_form_th + 0.01, 0.0, 3.0, 1e-6), T, rng)
    assert ev == SwitchEvent.FORMED and cell.state == "lrs"
    fresh = sample_fresh_cell(PARAMS, rng)
    pulses = form_by_ramp(fresh, T, rng)
    assert fresh.state == "lrs"
    assert pulses == math.ceil(fresh.v_form_th / 0.1)


def test_hrs_disturb_resamples_but_keeps_bit():
    boundary = default_boundary(PARAMS)
    cell, rng = formed_cell()
    values = set()
    for _ in range(20):
        event = apply_pulse(cell, Pulse(0.0, 1.6, 3.0, 1e-6), T, rng)
        assert event == SwitchEvent.HRS_DISTURB
        assert binarize(cell.resistance, boundary) == 0
        values.add(cell.resistance)
    assert len(values) == 20  # fresh draw every time


def test_too_short_pulse_does_not_switch():
    cell, rng = formed_cell()
    event = apply_pulse(cell, Pulse(1.3, 0.0, 1.3, PARAMS.min_pulse_set / 10), T, rng)
    assert event == SwitchEvent.NONE
    assert cell.state == "hrs"


def test_ambiguous_drive_rejected():
    cell, rng = formed_cell()
    with pytest.raises(InvalidDriveError):
        apply_pulse(cell, Pulse(2.3, 1.0, 3.0, 1e-6), T, rng)
    # Both electrodes high but with a sub-threshold differential is benign.
    event = apply_pulse(cell, Pulse(1.3, 1.6, 3.0, 1e-6), T, rng)
    assert event in (SwitchEvent.NONE, SwitchEvent.HRS_DISTURB)


def test_pulse_validation():
    with pytest.raises(ValueError):
        Pulse(1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        Pulse(math.inf, 0.0, 1.0, 1e-6)


# -------------------------------------------------------------------- reads

def test_noise_free_read_is_exact():
    cell, rng = formed_cell(NOISE_FREE, state="lrs")
    cell.resistance = 5000.0
    assert read_resistance(cell, 0.1, 3.0, T, rng) == 5000.0


def test_read_spans():
    cell, rng = formed_cell()
    hrs_reads = [read_resistance(cell, 0.1, 3.0, T, rng) for _ in range(100)]
    apply_pulse(cell, Pulse(1.3, 0.0, 1.3, 1e-6), T, rng)
    lrs_reads = [read_resistance(cell, 0.1, 3.0, T, rng) for _ in range(100)]
    hrs_span = max(hrs_reads) / min(hrs_reads)
    lrs_span = max(lrs_reads) / min(lrs_reads)
    assert hrs_span < 10.0
    assert hrs_span > lrs_span


def test_read_with_gate_off_is_open_circuit():
    cell, rng = formed_cell()
    assert math.isinf(read_resistance(cell, 0.1, 0.0, T, rng))


def test_read_disturb_guard():
    cell, rng = formed_cell()
    with pytest.raises(ValueError):
        read_resistance(cell, cell.v_set_th + 0.1, 3.0, T, rng)


def test_series_resistance_added():
    big_r_on = TransistorModel(r_on=100.0)
    cell, rng = formed_cell(NOISE_FREE, state="lrs")
    cell.resistance = 5000.0
    assert read_resistance(cell, 0.1, 3.0, big_r_on, rng) == 5100.0


# ----------------------------------------------------------------- binarize

def test_binarize_examples():
    boundary = math.sqrt(PARAMS.lrs_median * PARAMS.hrs_median)
    assert default_boundary(PARAMS) == boundary
    assert binarize(5e3, boundary) == 1
    assert binarize(97e3, boundary) == 0
    assert binarize(boundary, boundary) == 0  # tie maps to HRS
    assert binarize(math.inf, boundary) == 0


# ----------------------------------------------------------- invariants

def test_no_overlap_over_population():
    rng = np.random.default_rng(11)
    lrs_all, hrs_all = [], []
    for ci in range(10):
        cell = sample_fresh_cell(PARAMS, rng, f"c{ci}")
        form_by_ramp(cell, T, rng)
        for _ in range(100):
            apply_pulse(cell, Pulse(0.0, 1.6, 3.0, 1e-6), T, rng)
            hrs_all.append(cell.resistance)
            apply_pulse(cell, Pulse(1.3, 0.0, 1.3, 1e-6), T, rng)
            lrs_all.append(cell.resistance)
    assert max(lrs_all) < min(hrs_all)


def test_mean_ratio_window_1000_cycles():
    rng = np.random.default_rng(12)
    cell = sample_fresh_cell(PARAMS, rng)
    form_by_ramp(cell, T, rng)
    lrs, hrs = [], []
    for _ in range(1000):
        apply_pulse(cell, Pulse(0.0, 1.6, 3.0, 1e-6), T, rng)
        hrs.append(cell.resistance)
        apply_pulse(cell, Pulse(1.3, 0.0, 1.3, 1e-6), T, rng)
        lrs.append(cell.resistance)
    ratio = np.mean(hrs) / np.mean(lrs)
    assert 15.5 <= ratio <= 23.3


def test_determinism():
    def trajectory(seed):
        rng = np.random.default_rng(seed)
        cell = sample_fresh_cell(PARAMS, rng)
        form_by_ramp(cell, T, rng)
        out = []
        for _ in range(50):
            apply_pulse(cell, Pulse(0.0, 1.6, 3.0, 1e-6), T, rng)
            apply_pulse(cell, Pulse(1.3, 0.0, 1.3, 1e-6), T, rng)
            out.append(read_resistance(cell, 0.1, 3.0, T, rng))
        return out

    assert trajectory(99) == trajectory(99)


@settings(max_examples=60, deadline=None)
@given(v_te=st.floats(0, 5), v_be=st.floats(0, 5),
       v_g=st.floats(0, 5), state=st.sampled_from(["hrs", "lrs"]),
       seed=st.integers(0, 50))
def test_polarity_and_stability_properties(v_te, v_be, v_g, state, seed):
    cell, rng = formed_cell(seed=seed, state=state)
    before_bit = binarize(cell.resistance, default_boundary(PARAMS))
    before_r = cell.resistance
    try:
        event = apply_pulse(cell, Pulse(v_te, v_be, v_g, 1e-6), T, rng)
    except InvalidDriveError:
        return
    if event == SwitchEvent.SET:
        assert v_te - v_be > 0
    if event == SwitchEvent.RESET:
        assert v_be - v_te > 0
    if v_g < T.v_g_on_threshold:
        assert event == SwitchEvent.NONE and cell.resistance == before_r
    if event in (SwitchEvent.NONE, SwitchEvent.HRS_DISTURB):
        assert binarize(cell.resistance, default_boundary(PARAMS)) == before_bit


@settings(max_examples=60, deadline=None)
@given(v1=st.floats(0, 6), v2=st.floats(0, 6))
def test_i_sat_monotone(v1, v2):
    lo, hi = sorted((v1, v2))
    assert T.i_sat(lo) <= T.i_sat(hi)


# ------------------------------------------------------------------ presets

def test_presets():
    assert preset("table3-logic") == PARAMS
    fig = preset("fig1f-nominal")
    assert fig.v_set_th_median == 2.0
    assert fig.v_reset_th_median == 1.2
    assert fig.min_pulse_reset == 3.0e-6
    assert set(PRESETS) == {"table3-logic", "fig1f-nominal"}
    with pytest.raises(KeyError):
        preset("nope")


def test_param_validation():
    with pytest.raises(ValueError):
        VariabilityParams(hrs_median=4e3)  # ratio below 2
    with pytest.raises(ValueError):
        VariabilityParams(lrs_sigma_c2c=-0.1)
    with pytest.raises(ValueError):
        VariabilityParams(read_noise_lrs=0.2, read_noise_hrs=0.1)
    with pytest.raises(ValueError):
        VariabilityParams(lrs_median=0.0)
