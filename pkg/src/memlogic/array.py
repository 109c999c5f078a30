"""1T1R array wiring: word lines, source lines, bit lines.

Two wiring schemes are modeled.  In the standard array, SL and BL run
column-wise (one pair per column) and WL runs row-wise, so parallel-selected
cells in a column necessarily see the same electrode voltages.  In the
pseudo-crossbar variant each cell's TE keeps its own column SL while BE and
the gate share row-wise BL/WL lines, which allows different voltages on
parallel-connected cells.

Line parasitics and sneak paths are ignored: the access transistor isolates
unselected cells, and every selected cell sees the ideal line voltages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .device import (
    MemristorCell,
    Pulse,
    SwitchEvent,
    TransistorModel,
    VariabilityParams,
    apply_pulse,
    form_by_ramp,
    read_resistance,
    sample_fresh_cell,
)


class TopologyKind(str, Enum):
    STANDARD_1T1R = "standard"
    PSEUDO_CROSSBAR = "pseudo-crossbar"


class TopologyError(ValueError):
    """Requested drive or selection is impossible for the wiring scheme."""


class CellAddress(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class ArrayTopology:
    kind: TopologyKind = TopologyKind.STANDARD_1T1R
    rows: int = 8
    cols: int = 8

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")

    def contains(self, addr: CellAddress) -> bool:
        return 0 <= addr.row < self.rows and 0 <= addr.col < self.cols


@dataclass(frozen=True)
class LineDrive:
    """Voltages applied on the array lines; unlisted lines are held at 0 V."""

    wl: dict[int, float] = field(default_factory=dict)
    sl: dict[int, float] = field(default_factory=dict)
    bl: dict[int, float] = field(default_factory=dict)
    width: float = 1.0e-6

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise ValueError("width must be > 0")


def _check_line_bounds(topology: ArrayTopology, drive: LineDrive) -> None:
    for idx in drive.wl:
        if not 0 <= idx < topology.rows:
            raise ValueError(f"WL index {idx} out of range")
    row_lines = topology.rows if topology.kind == TopologyKind.PSEUDO_CROSSBAR else topology.cols
    for idx in drive.bl:
        if not 0 <= idx < row_lines:
            raise ValueError(f"BL index {idx} out of range")
    for idx in drive.sl:
        if not 0 <= idx < topology.cols:
            raise ValueError(f"SL index {idx} out of range")


def resolve_drives(topology: ArrayTopology, drive: LineDrive) -> list[tuple[CellAddress, Pulse]]:
    """Map line voltages onto per-cell pulses, one entry per cell.

    Cells on undriven word lines appear with their gate at 0 V so disturb
    exposure can be inspected; the transistor keeps them inert.
    """
    _check_line_bounds(topology, drive)
    resolved = []
    for row in range(topology.rows):
        v_g = drive.wl.get(row, 0.0)
        for col in range(topology.cols):
            v_te = drive.sl.get(col, 0.0)
            if topology.kind == TopologyKind.STANDARD_1T1R:
                v_be = drive.bl.get(col, 0.0)
            else:
                v_be = drive.bl.get(row, 0.0)
            resolved.append((CellAddress(row, col),
                             Pulse(v_te, v_be, v_g, drive.width)))
    return resolved


def check_parallel_distinct_voltages(topology: ArrayTopology,
                                     cell_a: CellAddress, cell_b: CellAddress,
                                     pulse_a: Pulse, pulse_b: Pulse) -> str | None:
    """Can these two cells be driven simultaneously with these pulses?

    Returns ``None`` when the request is wirable and a human-readable
    violation description otherwise.  In the standard array, cells sharing a
    column share one SL/BL pair, so distinct electrode voltages cannot be
    wired; the pseudo-crossbar row grouping allows them.
    """
    if cell_a == cell_b:
        raise ValueError("cell_a and cell_b must differ")
    same_te = pulse_a.v_te == pulse_b.v_te
    same_be = pulse_a.v_be == pulse_b.v_be
    if topology.kind == TopologyKind.STANDARD_1T1R:
        if cell_a.col == cell_b.col and not (same_te and same_be):
            return (f"cells {tuple(cell_a)} and {tuple(cell_b)} share the SL/BL pair of "
                    f"column {cell_a.col}; distinct electrode voltages are impossible")
        return None
    # Pseudo-crossbar: SL per column, BL shared per row.
    if cell_a.col == cell_b.col and not same_te:
        return (f"cells {tuple(cell_a)} and {tuple(cell_b)} share SL {cell_a.col}; "
                "distinct TE voltages are impossible")
    if cell_a.row == cell_b.row and not same_be:
        return (f"cells {tuple(cell_a)} and {tuple(cell_b)} share BL {cell_a.row}; "
                "distinct BE voltages are impossible")
    return None


def validate_parallel_selection(topology: ArrayTopology,
                                addrs: Sequence[CellAddress]) -> None:
    """Check that the addressed cells can be read out in parallel.

    Standard array: one shared SL/BL column, one WL per cell.  Pseudo-crossbar:
    one shared BL/WL row.  Raises ``TopologyError`` otherwise.
    """
    if not addrs:
        raise TopologyError("empty selection")
    if len(set(addrs)) != len(addrs):
        raise TopologyError("duplicate addresses in parallel selection")
    if topology.kind == TopologyKind.STANDARD_1T1R:
        cols = {a.col for a in addrs}
        if len(cols) != 1:
            raise TopologyError(
                f"standard array parallel selection requires one column, got {sorted(cols)}")
    else:
        rows = {a.row for a in addrs}
        if len(rows) != 1:
            raise TopologyError(
                f"pseudo-crossbar parallel selection requires one row, got {sorted(rows)}")


class CellArray:
    """A rectangular array of independently sampled 1T1R cells.

    Cell parameters are drawn from per-address random streams derived from the
    array seed, so the population is reproducible and independent of access
    order.  All pulse randomness comes from generators passed by the caller.
    """

    def __init__(self, topology: ArrayTopology, params: VariabilityParams,
                 transistor: TransistorModel | None = None, seed: int = 0):
        self.topology = topology
        self.params = params
        self.transistor = transistor if transistor is not None else TransistorModel()
        self.seed = seed
        self.cells: dict[CellAddress, MemristorCell] = {}
        for row in range(topology.rows):
            for col in range(topology.cols):
                addr = CellAddress(row, col)
                rng = np.random.default_rng(np.random.SeedSequence((seed, 0, row, col)))
                self.cells[addr] = sample_fresh_cell(params, rng, cell_id=f"r{row}c{col}")

    def cell(self, addr: CellAddress | tuple[int, int]) -> MemristorCell:
        addr = CellAddress(*addr)
        if not self.topology.contains(addr):
            raise ValueError(f"address {tuple(addr)} out of bounds")
        return self.cells[addr]

    def form(self, addr: CellAddress | tuple[int, int]) -> None:
        """Form one cell with the voltage-ramp routine (idempotent)."""
        addr = CellAddress(*addr)
        rng = np.random.default_rng(np.random.SeedSequence((self.seed, 1, addr.row, addr.col)))
        form_by_ramp(self.cell(addr), self.transistor, rng)

    def form_all(self) -> None:
        for addr in self.cells:
            self.form(addr)

    def apply_drive(self, drive: LineDrive,
                    rng: np.random.Generator) -> list[tuple[CellAddress, SwitchEvent]]:
        """Pulse every cell with its resolved voltages, in address order."""
        events = []
        for addr, pulse in resolve_drives(self.topology, drive):
            try:
                event = apply_pulse(self.cells[addr], pulse, self.transistor, rng)
            except Exception as exc:
                raise type(exc)(f"at cell {tuple(addr)}: {exc}") from exc
            events.append((addr, event))
        return events

    def read_cell(self, addr: CellAddress | tuple[int, int], v_read: float,
                  v_g: float, rng: np.random.Generator) -> float:
        return read_resistance(self.cell(addr), v_read, v_g, self.transistor, rng)
