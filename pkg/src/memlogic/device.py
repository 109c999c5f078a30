"""Stochastic behavioral model of a single 1T1R RRAM cell.

A cell is a bipolar resistive-switching element (VCM type) in series with an
access transistor.  A positive top-electrode voltage above the SET threshold
switches the element from the high resistance state (HRS, logical '0') to the
low resistance state (LRS, logical '1'); a positive bottom-electrode voltage
above the RESET threshold switches it back.  Fresh devices start in a
high-ohmic pristine state and must be formed once before they switch.

Switching itself is threshold-deterministic; all stochastic behavior lives in
the resistance values drawn after each switching event (lognormal, with
separate cycle-to-cycle and cell-to-cell spreads) and in a multiplicative
per-read jitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

STATE_PRISTINE = "pristine"
STATE_LRS = "lrs"
STATE_HRS = "hrs"

# Pristine devices are treated as a fixed, very large resistance.
PRISTINE_RESISTANCE_FACTOR = 10.0

_MAX_REJECTION_TRIES = 1000


class SwitchEvent(Enum):
    """Outcome of one voltage pulse applied to a cell."""

    NONE = "none"
    SET = "set"
    RESET = "reset"
    FORMED = "formed"
    HRS_DISTURB = "hrs_disturb"


class InvalidDriveError(ValueError):
    """Pulse drives both electrodes above their switching thresholds at once."""


class NotFormedError(RuntimeError):
    """Operation requires a formed cell but the cell is still pristine."""


@dataclass(frozen=True)
class VariabilityParams:
    """Distribution parameters for resistance, threshold and read-noise spread.

    Resistances are lognormal: ``value = median * exp(N(0, sigma))``, with
    ``sigma_c2c`` applied per switching event and ``sigma_d2d`` applied once
    per cell (to its median).  Thresholds are normal, truncated at zero.
    Read noise is a per-read multiplicative lognormal jitter.
    """

    lrs_median: float = 5.0e3
    lrs_sigma_c2c: float = 0.06
    lrs_sigma_d2d: float = 0.02
    hrs_median: float = 97.0e3
    hrs_sigma_c2c: float = 0.32
    hrs_sigma_d2d: float = 0.10
    v_set_th_median: float = 1.0
    v_set_th_sigma: float = 0.05
    v_reset_th_median: float = 0.9
    v_reset_th_sigma: float = 0.05
    v_form_th_median: float = 2.0
    v_form_th_sigma: float = 0.2
    read_noise_lrs: float = 0.02
    read_noise_hrs: float = 0.10
    min_pulse_set: float = 3.0e-7
    min_pulse_reset: float = 3.0e-7

    def __post_init__(self) -> None:
        for name in ("lrs_median", "hrs_median", "v_set_th_median",
                     "v_reset_th_median", "v_form_th_median"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("lrs_sigma_c2c", "lrs_sigma_d2d", "hrs_sigma_c2c",
                     "hrs_sigma_d2d", "v_set_th_sigma", "v_reset_th_sigma",
                     "v_form_th_sigma", "read_noise_lrs", "read_noise_hrs",
                     "min_pulse_set", "min_pulse_reset"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.hrs_median <= self.lrs_median:
            raise ValueError("hrs_median must exceed lrs_median")
        if self.hrs_median / self.lrs_median < 2.0:
            raise ValueError("hrs_median / lrs_median must be >= 2")
        if self.read_noise_hrs < self.read_noise_lrs:
            raise ValueError("read_noise_hrs must be >= read_noise_lrs")

    def replace(self, **changes) -> "VariabilityParams":
        from dataclasses import replace as _replace

        return _replace(self, **changes)


@dataclass(frozen=True)
class TransistorModel:
    """Behavioral access transistor: an on/off switch with a series resistance.

    The channel is open-circuit below ``v_g_on_threshold``.  The saturation
    current is modeled as linear in the gate overdrive, clamped at a maximum;
    it is reported for analysis but does not limit the resistance draws.
    """

    v_g_on_threshold: float = 0.7
    r_on: float = 0.0
    i_sat_slope: float = 1.0e-4
    i_sat_max: float = 3.0e-4

    def __post_init__(self) -> None:
        if self.r_on < 0:
            raise ValueError("r_on must be >= 0")
        if self.i_sat_slope < 0 or self.i_sat_max < 0:
            raise ValueError("i_sat parameters must be >= 0")

    def is_on(self, v_g: float) -> bool:
        return v_g >= self.v_g_on_threshold

    def i_sat(self, v_g: float) -> float:
        if not self.is_on(v_g):
            return 0.0
        return min(self.i_sat_slope * (v_g - self.v_g_on_threshold), self.i_sat_max)


@dataclass(frozen=True)
class Pulse:
    """One rectangular voltage pulse: electrode voltages, gate voltage, width."""

    v_te: float
    v_be: float
    v_g: float
    width: float

    def __post_init__(self) -> None:
        for name in ("v_te", "v_be", "v_g", "width"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.width <= 0:
            raise ValueError("width must be > 0")


@dataclass
class MemristorCell:
    """One 1T1R cell with its sampled per-cell parameters and analog state."""

    cell_id: str
    params: VariabilityParams
    lrs_median_cell: float
    hrs_median_cell: float
    v_set_th: float
    v_reset_th: float
    v_form_th: float
    state: str = STATE_PRISTINE
    resistance: float = 0.0
    cycle_count: int = 0
    # Most recent realized values; used to keep LRS strictly below HRS.
    last_lrs: float | None = field(default=None, repr=False)
    last_hrs: float | None = field(default=None, repr=False)

    @property
    def is_formed(self) -> bool:
        return self.state != STATE_PRISTINE


def _positive_normal(rng: np.random.Generator, mean: float, sigma: float) -> float:
    """Normal draw truncated at zero (resampled)."""
    value = rng.normal(mean, sigma)
    tries = 0
    while value <= 0 and tries < _MAX_REJECTION_TRIES:
        value = rng.normal(mean, sigma)
        tries += 1
    return value if value > 0 else mean


def _lognormal_around(rng: np.random.Generator, median: float, sigma: float) -> float:
    return median * math.exp(rng.normal(0.0, sigma))


def sample_fresh_cell(params: VariabilityParams, rng: np.random.Generator,
                      cell_id: str = "cell") -> MemristorCell:
    """Draw a new pristine cell: per-cell medians (lognormal around the global
    medians, device-to-device sigma) and per-cell thresholds (truncated normal).
    """
    lrs_med = _lognormal_around(rng, params.lrs_median, params.lrs_sigma_d2d)
    hrs_med = _lognormal_around(rng, params.hrs_median, params.hrs_sigma_d2d)
    tries = 0
    while hrs_med <= lrs_med and tries < _MAX_REJECTION_TRIES:
        lrs_med = _lognormal_around(rng, params.lrs_median, params.lrs_sigma_d2d)
        hrs_med = _lognormal_around(rng, params.hrs_median, params.hrs_sigma_d2d)
        tries += 1
    cell = MemristorCell(
        cell_id=cell_id,
        params=params,
        lrs_median_cell=lrs_med,
        hrs_median_cell=hrs_med,
        v_set_th=_positive_normal(rng, params.v_set_th_median, params.v_set_th_sigma),
        v_reset_th=_positive_normal(rng, params.v_reset_th_median, params.v_reset_th_sigma),
        v_form_th=_positive_normal(rng, params.v_form_th_median, params.v_form_th_sigma),
    )
    cell.resistance = PRISTINE_RESISTANCE_FACTOR * hrs_med
    return cell


def _draw_lrs(cell: MemristorCell, rng: np.random.Generator) -> float:
    """Fresh LRS value, resampled so it stays below the cell's realized HRS."""
    ceiling = cell.last_hrs if cell.last_hrs is not None else cell.hrs_median_cell
    value = _lognormal_around(rng, cell.lrs_median_cell, cell.params.lrs_sigma_c2c)
    tries = 0
    while value >= ceiling and tries < _MAX_REJECTION_TRIES:
        value = _lognormal_around(rng, cell.lrs_median_cell, cell.params.lrs_sigma_c2c)
        tries += 1
    return min(value, math.nextafter(ceiling, 0.0))


def _draw_hrs(cell: MemristorCell, rng: np.random.Generator) -> float:
    """Fresh HRS value, resampled so it stays above the cell's realized LRS."""
    floor = cell.last_lrs if cell.last_lrs is not None else cell.lrs_median_cell
    value = _lognormal_around(rng, cell.hrs_median_cell, cell.params.hrs_sigma_c2c)
    tries = 0
    while value <= floor and tries < _MAX_REJECTION_TRIES:
        value = _lognormal_around(rng, cell.hrs_median_cell, cell.params.hrs_sigma_c2c)
        tries += 1
    return max(value, math.nextafter(floor, math.inf))


def _enter_lrs(cell: MemristorCell, rng: np.random.Generator) -> None:
    cell.resistance = _draw_lrs(cell, rng)
    cell.state = STATE_LRS
    cell.last_lrs = cell.resistance


def _enter_hrs(cell: MemristorCell, rng: np.random.Generator) -> None:
    cell.resistance = _draw_hrs(cell, rng)
    cell.state = STATE_HRS
    cell.last_hrs = cell.resistance


def apply_pulse(cell: MemristorCell, pulse: Pulse, transistor: TransistorModel,
                rng: np.random.Generator) -> SwitchEvent:
    """Apply one pulse to the cell; mutate its state and return the event.

    Rules, in order:

    1. Gate below the transistor on-threshold: nothing happens.
    2. Pristine cell with a forming-level positive TE voltage: FORMED (to LRS).
    3. HRS cell with TE-BE at or above the SET threshold: SET (to LRS).
    4. LRS cell with BE-TE at or above the RESET threshold: RESET (to HRS,
       cycle count incremented).
    5. HRS cell under any positive BE-polarity stress: HRS_DISTURB -- the HRS
       value is re-drawn from the cycle distribution but the binary state is
       preserved.  An already-reset cell cannot switch again, so the stress
       only destabilizes the high-ohmic state.
    6. Anything else: no change.

    Raises ``InvalidDriveError`` for drives that hold both electrodes above
    their respective switching thresholds while also requesting a
    super-threshold differential; the single-ended calibration of this model
    cannot be trusted for such drives.
    """
    if not transistor.is_on(pulse.v_g):
        return SwitchEvent.NONE
    diff = pulse.v_te - pulse.v_be
    if (pulse.v_te >= cell.v_set_th and pulse.v_be >= cell.v_reset_th
            and (diff >= cell.v_set_th or -diff >= cell.v_reset_th)):
        raise InvalidDriveError(
            f"ambiguous drive on {cell.cell_id}: v_te={pulse.v_te}, v_be={pulse.v_be}")
    if (cell.state == STATE_PRISTINE and diff >= cell.v_form_th
            and pulse.width >= cell.params.min_pulse_set):
        _enter_lrs(cell, rng)
        return SwitchEvent.FORMED
    if (cell.state == STATE_HRS and diff >= cell.v_set_th
            and pulse.width >= cell.params.min_pulse_set):
        _enter_lrs(cell, rng)
        return SwitchEvent.SET
    if (cell.state == STATE_LRS and -diff >= cell.v_reset_th
            and pulse.width >= cell.params.min_pulse_reset):
        _enter_hrs(cell, rng)
        cell.cycle_count += 1
        return SwitchEvent.RESET
    if cell.state == STATE_HRS and -diff > 0:
        _enter_hrs(cell, rng)
        return SwitchEvent.HRS_DISTURB
    return SwitchEvent.NONE


def read_resistance(cell: MemristorCell, v_read: float, v_g: float,
                    transistor: TransistorModel, rng: np.random.Generator) -> float:
    """Non-destructive resistance read-out.

    Returns the state resistance with multiplicative read jitter, plus the
    transistor series resistance.  Reading with the transistor off returns
    ``inf`` (open circuit).  The read voltage must sit below the cell's SET
    threshold so the read cannot disturb the state.
    """
    if not transistor.is_on(v_g):
        return math.inf
    if not 0 <= v_read < cell.v_set_th:
        raise ValueError(f"v_read={v_read} is not disturb-free for {cell.cell_id}")
    if cell.state == STATE_PRISTINE:
        return cell.resistance + transistor.r_on
    sigma = (cell.params.read_noise_lrs if cell.state == STATE_LRS
             else cell.params.read_noise_hrs)
    return cell.resistance * math.exp(rng.normal(0.0, sigma)) + transistor.r_on


def binarize(resistance: float, r_boundary: float) -> int:
    """Map a resistance to a bit: below the boundary is '1', at or above is '0'."""
    return 1 if resistance < r_boundary else 0


def default_boundary(params: VariabilityParams) -> float:
    """Geometric mean of the LRS and HRS medians (symmetric log-space margin)."""
    return math.sqrt(params.lrs_median * params.hrs_median)


def form_by_ramp(cell: MemristorCell, transistor: TransistorModel,
                 rng: np.random.Generator, v_max: float = 4.8, v_step: float = 0.1,
                 width: float = 1.0e-5, v_g: float = 1.1) -> int:
    """Apply pulses of increasing TE voltage until the cell forms.

    Returns the number of pulses applied.  Raises ``NotFormedError`` if the
    ramp tops out without forming.
    """
    if cell.is_formed:
        return 0
    pulses = 0
    v = v_step
    while v <= v_max + 1e-12:
        pulses += 1
        event = apply_pulse(cell, Pulse(v, 0.0, v_g, width), transistor, rng)
        if event == SwitchEvent.FORMED:
            return pulses
        v += v_step
    raise NotFormedError(f"{cell.cell_id} did not form up to {v_max} V")


#: Named parameter presets.  "table3-logic" is the operating point used by the
#: logic experiments (defaults); "fig1f-nominal" is the nominal device
#: characterization point with slower RESET pulses.
PRESETS: dict[str, VariabilityParams] = {
    "table3-logic": VariabilityParams(),
    "fig1f-nominal": VariabilityParams(
        v_set_th_median=2.0,
        v_set_th_sigma=0.1,
        v_reset_th_median=1.2,
        v_reset_th_sigma=0.1,
        v_form_th_median=2.4,
        v_form_th_sigma=0.3,
        min_pulse_set=3.0e-7,
        min_pulse_reset=3.0e-6,
    ),
}


def preset(name: str) -> VariabilityParams:
    """Look up a named parameter preset."""
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None
