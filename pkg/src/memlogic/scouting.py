"""Scouting logic: parallel read-out of input cells against reference currents.

Inputs are stored as the resistive states of two (or more) cells sharing one
read path.  A read voltage is applied and the summed current is compared
against reference currents placed in the gaps between the per-input-pattern
current classes: above the OR reference means at least one LRS cell, above
the AND reference means all cells are LRS, and the XOR window sits between
the two.  The read is non-destructive, so the gate never switches a device.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .array import CellAddress, CellArray, validate_parallel_selection
from .logic1t1r import DEFAULT_VOLTAGES, LogicVoltages, initialize_cell

SCOUTING_OPS = ("read", "or", "and", "xor")


@dataclass(frozen=True)
class ReferenceSet:
    """Reference currents for the four scouting operations.

    The XOR window is bounded by the OR and AND references (i_xor1 = i_or,
    i_xor2 = i_and).
    """

    i_read: float
    i_or: float
    i_and: float

    def __post_init__(self) -> None:
        if self.i_read <= 0:
            raise ValueError("i_read must be > 0")
        if not self.i_or < self.i_and:
            raise ValueError("i_or must be below i_and")

    @property
    def i_xor1(self) -> float:
        return self.i_or

    @property
    def i_xor2(self) -> float:
        return self.i_and


#: Published reference-current preset for the default operating point.
PAPER_REFS = ReferenceSet(i_read=7.25e-6, i_or=11.55e-6, i_and=32.74e-6)

REFERENCE_PRESETS: dict[str, ReferenceSet] = {
    "paper-refs": PAPER_REFS,
    "paper": PAPER_REFS,
}


@dataclass(frozen=True)
class CurrentSample:
    """One measured read current for a given input bit pattern."""

    input_class: str
    current: float
    cycle: int = 0

    def __post_init__(self) -> None:
        if self.current < 0:
            raise ValueError("current must be >= 0")


class OverlapError(RuntimeError):
    """Adjacent current classes overlap; no reference can be placed reliably."""

    def __init__(self, lower_class: str, upper_class: str,
                 lower_max: float, upper_min: float):
        super().__init__(
            f"classes {lower_class!r} and {upper_class!r} overlap: "
            f"max({lower_class})={lower_max:.4g} A >= min({upper_class})={upper_min:.4g} A")
        self.lower_class = lower_class
        self.upper_class = upper_class
        self.lower_max = lower_max
        self.upper_min = upper_min


def write_inputs(array: CellArray, addrs: Sequence[CellAddress | tuple[int, int]],
                 bits: Sequence[int] | str, rng: np.random.Generator,
                 volts: LogicVoltages = DEFAULT_VOLTAGES,
                 refresh: bool = False, max_retries: int = 3,
                 verify: bool = True) -> None:
    """Store one bit per cell, with read-verify and retry.

    ``refresh=True`` forces a fresh resistance draw even when the binary state
    already matches, so repeated trials see cycle-to-cycle variability.
    ``verify=False`` skips the read-back loop (used by stress analyses that
    must not truncate the state tails).
    """
    bit_list = [int(b) for b in bits]
    if len(addrs) != len(bit_list):
        raise ValueError("need exactly one bit per address")
    for addr, bit in zip(addrs, bit_list):
        initialize_cell(array, addr, bit, rng, volts=volts, refresh=refresh,
                        max_retries=max_retries, verify=verify)


def scout_current(array: CellArray, addrs: Sequence[CellAddress | tuple[int, int]],
                  rng: np.random.Generator, v_read: float = 0.1,
                  v_wl: float = 3.0) -> float:
    """Simultaneous read of the selected cells: v_read times the summed
    conductance of the noisy per-cell resistances.  States are not disturbed.
    """
    cell_addrs = [CellAddress(*a) for a in addrs]
    validate_parallel_selection(array.topology, cell_addrs)
    conductance = 0.0
    for addr in cell_addrs:
        r = array.read_cell(addr, v_read, v_wl, rng)
        conductance += 1.0 / r
    return v_read * conductance


def _class_extremes(samples: Iterable[CurrentSample]) -> dict[str, tuple[float, float]]:
    grouped: dict[str, list[float]] = defaultdict(list)
    for s in samples:
        grouped[s.input_class].append(s.current)
    return {cls: (min(vals), max(vals)) for cls, vals in grouped.items()}


def _gap_midpoint(lower_class: str, upper_class: str,
                  lower_max: float, upper_min: float) -> float:
    if lower_max >= upper_min:
        raise OverlapError(lower_class, upper_class, lower_max, upper_min)
    return 0.5 * (lower_max + upper_min)


def place_references(samples: Sequence[CurrentSample]) -> ReferenceSet:
    """Place reference currents at the midpoints of the inter-class gaps.

    Requires samples for the pair classes 00, 01, 10 and 11; the mixed classes
    01 and 10 are pooled because both have one cell per state.  The read
    reference uses single-cell classes "0"/"1" when present, otherwise it is
    the OR reference scaled to a single cell (half).  Raises ``OverlapError``
    when a required gap is empty -- the logical-failure signal.
    """
    extremes = _class_extremes(samples)
    missing = {"00", "01", "10", "11"} - set(extremes)
    if missing:
        raise ValueError(f"missing samples for classes {sorted(missing)}")
    mixed_min = min(extremes["01"][0], extremes["10"][0])
    mixed_max = max(extremes["01"][1], extremes["10"][1])
    i_or = _gap_midpoint("00", "01|10", extremes["00"][1], mixed_min)
    i_and = _gap_midpoint("01|10", "11", mixed_max, extremes["11"][0])
    if "0" in extremes and "1" in extremes:
        i_read = _gap_midpoint("0", "1", extremes["0"][1], extremes["1"][0])
    else:
        i_read = 0.5 * i_or
    return ReferenceSet(i_read=i_read, i_or=i_or, i_and=i_and)


def classify(current: float, refs: ReferenceSet, op: str) -> int:
    """Compare one read current against the references for the given op.

    Boundary equality maps to 0 (ideal comparator, conservative tie-break).
    """
    op = op.lower()
    if op == "read":
        return int(current > refs.i_read)
    if op == "or":
        return int(current > refs.i_or)
    if op == "and":
        return int(current > refs.i_and)
    if op == "xor":
        return int(refs.i_xor1 < current < refs.i_xor2)
    raise ValueError(f"unknown scouting op {op!r}; expected one of {SCOUTING_OPS}")


def scouting_gate(array: CellArray, addrs: Sequence[CellAddress | tuple[int, int]],
                  bits: Sequence[int] | str, op: str, refs: ReferenceSet,
                  rng: np.random.Generator, v_read: float = 0.1,
                  v_wl: float = 3.0) -> int:
    """Write the input bits, scout the summed current, classify it."""
    write_inputs(array, addrs, bits, rng)
    current = scout_current(array, addrs, rng, v_read=v_read, v_wl=v_wl)
    return classify(current, refs, op)


@dataclass(frozen=True)
class NInputThresholds:
    """Reference thresholds for an n-cell read, one per popcount boundary."""

    n: int
    thresholds: tuple[float, ...]
    gaps: tuple[tuple[float, float], ...]  # (lower_max, upper_min) per boundary


def extend_n_inputs(n: int, samples: Sequence[CurrentSample]) -> NInputThresholds:
    """Place n thresholds between the n+1 popcount classes of an n-cell read.

    Samples carry n-bit input classes and are grouped by the number of LRS
    cells.  Raises ``OverlapError`` for the first (lowest) colliding popcount
    pair; collisions appear at smaller spreads as n grows, which quantifies
    the growing overlap risk of wider scouting gates.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    by_popcount: dict[int, list[float]] = defaultdict(list)
    for s in samples:
        if len(s.input_class) != n or any(c not in "01" for c in s.input_class):
            raise ValueError(f"input class {s.input_class!r} is not an {n}-bit pattern")
        by_popcount[s.input_class.count("1")].append(s.current)
    missing = [k for k in range(n + 1) if k not in by_popcount]
    if missing:
        raise ValueError(f"missing samples for popcount classes {missing}")
    thresholds = []
    gaps = []
    for k in range(n):
        lower_max = max(by_popcount[k])
        upper_min = min(by_popcount[k + 1])
        thresholds.append(_gap_midpoint(f"popcount-{k}", f"popcount-{k + 1}",
                                        lower_max, upper_min))
        gaps.append((lower_max, upper_min))
    return NInputThresholds(n=n, thresholds=tuple(thresholds), gaps=tuple(gaps))


def reference_preset(name: str) -> ReferenceSet:
    try:
        return REFERENCE_PRESETS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown reference preset {name!r}; "
                       f"available: {sorted(set(REFERENCE_PRESETS))}") from None
