"""Monte Carlo experiment harness: repeated-cycle runs, distribution summaries,
failure accounting and deterministic CSV/JSON exports.

Every trial draws its randomness from a stream derived from (seed, experiment
kind, bucket, cycle), so results are bit-reproducible and independent of
execution order; the harness can therefore run its independent blocks
concurrently and still produce results identical to a sequential run.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .array import ArrayTopology, CellAddress, CellArray, TopologyKind
from .device import (
    TransistorModel,
    VariabilityParams,
    binarize,
    default_boundary,
)
from .logic1t1r import (
    DEFAULT_VOLTAGES,
    InitFailureError,
    LogicVoltages,
    ParamMapping,
    default_gate_library,
    evaluate_mapping,
    execute_gate,
    reset_drive,
    set_drive,
)
from .scouting import (
    CurrentSample,
    NInputThresholds,
    OverlapError,
    ReferenceSet,
    classify,
    extend_n_inputs,
    place_references,
    reference_preset,
    scout_current,
    write_inputs,
)

INPUT_COMBOS = ((0, 0), (0, 1), (1, 0), (1, 1))

#: Cases that must not switch; covered by the four shipped gates.
NON_SWITCHING_CASES = (3, 6, 7, 8, 12, 13, 16)

TABLE_COLUMNS = {
    "traces": ("gate", "p", "q", "case_id", "cycle", "r_init_ohm", "r_final_ohm",
               "out_bit", "expected_bit"),
    "currents": ("op", "class", "cycle", "current_a"),
    "refs": ("i_read_a", "i_or_a", "i_and_a"),
    "summary": ("label", "count", "min", "p1", "p25", "median", "p75", "p99",
                "max", "mean"),
    "margins": ("gap", "lower_max_a", "upper_min_a", "width_a", "midpoint_a",
                "margin", "reference_a"),
    "characterize": ("cell", "cycle", "r_lrs_ohm", "r_hrs_ohm"),
    "non_switching": ("case_id", "count", "binary_changes", "log_variation"),
    "cases": ("case_id", "g", "te", "be", "i", "te_minus_be", "process", "possible"),
    "sweep": ("parameter", "value", "logic_trials", "logic_failures", "logic_errors",
              "scouting_trials", "scouting_failures", "overlap", "min_margin"),
}


# ---------------------------------------------------------------------------
# Configuration and result containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment run."""

    seed: int = 7
    cycles: int = 100
    gates: tuple[str, ...] = ("OR", "AND", "NIMP", "XOR")
    scouting_ops: tuple[str, ...] = ("read", "or", "and", "xor")
    n_inputs: int = 2
    device: VariabilityParams = field(default_factory=VariabilityParams)
    transistor: TransistorModel = field(default_factory=TransistorModel)
    topology: ArrayTopology = field(default_factory=ArrayTopology)
    refs: str = "placed"  # "placed" or a reference preset name
    split: str = "split"  # "split" (train/classify halves) or "insample"
    rotate_cells: bool = False
    parallel: bool = False

    def __post_init__(self) -> None:
        if self.cycles < 1:
            raise ValueError("cycles must be >= 1")
        if self.split not in ("split", "insample"):
            raise ValueError("split must be 'split' or 'insample'")
        if self.n_inputs < 1:
            raise ValueError("n_inputs must be >= 1")

    def replace(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class DistributionSummary:
    """Whisker-box summary of one sample set (nearest-rank quantiles)."""

    label: str
    count: int
    min: float
    p1: float
    p25: float
    median: float
    p75: float
    p99: float
    max: float
    mean: float

    @classmethod
    def from_samples(cls, label: str, samples: Sequence[float]) -> "DistributionSummary":
        if not samples:
            raise ValueError(f"no samples for {label!r}")
        ordered = sorted(samples)
        n = len(ordered)

        def rank(pct: float) -> float:
            return ordered[max(0, math.ceil(pct / 100.0 * n) - 1)]

        return cls(label=label, count=n, min=ordered[0], p1=rank(1), p25=rank(25),
                   median=rank(50), p75=rank(75), p99=rank(99), max=ordered[-1],
                   mean=sum(ordered) / n)


def log_spread(samples: Sequence[float]) -> float:
    """Standard deviation of ln(samples); the log-space width of a distribution."""
    logs = np.log(np.asarray(samples, dtype=float))
    return float(np.std(logs))


@dataclass
class BucketStats:
    """Per-(gate, input) trial accounting: failures are wrong output bits,
    errors are initialization breakdowns (experiment defects, not logic)."""

    label: str
    trials: int = 0
    failures: int = 0
    errors: int = 0

    @property
    def successes(self) -> int:
        return self.trials - self.failures - self.errors

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0


@dataclass
class FailureReport:
    buckets: list[BucketStats] = field(default_factory=list)
    first_failure: tuple | None = None  # (seed, bucket label, cycle)

    @property
    def trials(self) -> int:
        return sum(b.trials for b in self.buckets)

    @property
    def failures(self) -> int:
        return sum(b.failures for b in self.buckets)

    @property
    def errors(self) -> int:
        return sum(b.errors for b in self.buckets)

    @property
    def overall_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0


@dataclass(frozen=True)
class TraceRow:
    gate: str
    p: int
    q: int
    case_id: int
    cycle: int
    r_init_ohm: float
    r_final_ohm: float
    out_bit: int
    expected_bit: int


@dataclass(frozen=True)
class GapMargin:
    gap: str
    lower_max_a: float
    upper_min_a: float
    reference_a: float

    @property
    def width_a(self) -> float:
        return self.upper_min_a - self.lower_max_a

    @property
    def midpoint_a(self) -> float:
        return 0.5 * (self.lower_max_a + self.upper_min_a)

    @property
    def margin(self) -> float:
        return self.width_a / self.midpoint_a if self.midpoint_a else 0.0


@dataclass
class LogicExperimentResult:
    config: ExperimentConfig
    rows: list[TraceRow]
    summaries: list[DistributionSummary]
    report: FailureReport


@dataclass
class ScoutingExperimentResult:
    config: ExperimentConfig
    samples: list[CurrentSample]
    refs: ReferenceSet | None
    thresholds: NInputThresholds | None
    summaries: list[DistributionSummary]
    report: FailureReport
    margins: list[GapMargin]
    overlap: OverlapError | None


@dataclass
class CharacterizationResult:
    rows: list[tuple[int, int, float, float]]  # (cell, cycle, r_lrs, r_hrs)
    summaries: list[DistributionSummary]
    hrs_lrs_ratio: float
    lrs_log_spread: float
    hrs_log_spread: float


def _stream(*entropy: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _run_blocks(blocks: Sequence[Callable[[], object]], parallel: bool) -> list:
    """Run independent work blocks, optionally on a thread pool.

    Results come back in block order either way, so concurrent and sequential
    execution are indistinguishable.
    """
    if not parallel or len(blocks) <= 1:
        return [block() for block in blocks]
    with ThreadPoolExecutor(max_workers=min(4, len(blocks))) as pool:
        futures = [pool.submit(block) for block in blocks]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# 1T1R logic experiment
# ---------------------------------------------------------------------------

def run_1t1r_experiment(config: ExperimentConfig,
                        library: dict[str, ParamMapping] | None = None,
                        volts: LogicVoltages = DEFAULT_VOLTAGES) -> LogicExperimentResult:
    """Repeat every gate for every input pair over ``config.cycles`` cycles.

    Each gate runs cascaded on one cell (a fresh cell per input pair with
    ``rotate_cells``); a logical failure is an output bit that disagrees with
    the pure truth table, an error is an exhausted initialization retry.
    """
    if library is None:
        library = default_gate_library()
    mappings = []
    for name in config.gates:
        key = name.upper() if name.upper() in library else name
        if key not in library:
            raise KeyError(f"unknown gate {name!r}; available: {sorted(library)}")
        mappings.append((name, library[key]))
    boundary = default_boundary(config.device)

    def gate_block(gate_idx: int, name: str, mapping: ParamMapping):
        array = CellArray(config.topology, config.device, config.transistor,
                          seed=config.seed)
        rows: list[TraceRow] = []
        buckets: list[BucketStats] = []
        first_failure = None
        col = gate_idx % config.topology.cols
        for combo_idx, (p, q) in enumerate(INPUT_COMBOS):
            row_idx = combo_idx % config.topology.rows if config.rotate_cells else 0
            addr = CellAddress(row_idx, col)
            array.form(addr)
            bucket = BucketStats(label=f"{name}/{p}{q}")
            expected = evaluate_mapping(mapping, p, q).output
            for cycle in range(config.cycles):
                bucket.trials += 1
                rng = _stream(config.seed, 10, gate_idx, p, q, cycle)
                try:
                    trace = execute_gate(array, addr, mapping, p, q, rng,
                                         volts=volts, boundary=boundary)
                except InitFailureError:
                    bucket.errors += 1
                    continue
                rows.append(TraceRow(
                    gate=name, p=p, q=q, case_id=trace.case_id, cycle=cycle,
                    r_init_ohm=trace.init_resistance,
                    r_final_ohm=trace.final_resistance,
                    out_bit=trace.output_bit, expected_bit=expected))
                if trace.output_bit != expected:
                    bucket.failures += 1
                    if first_failure is None:
                        first_failure = (config.seed, bucket.label, cycle)
            buckets.append(bucket)
        return rows, buckets, first_failure

    blocks = [(lambda i=i, n=n, m=m: gate_block(i, n, m))
              for i, (n, m) in enumerate(mappings)]
    results = _run_blocks(blocks, config.parallel)

    all_rows: list[TraceRow] = []
    report = FailureReport()
    for rows, buckets, first_failure in results:
        all_rows.extend(rows)
        report.buckets.extend(buckets)
        if report.first_failure is None and first_failure is not None:
            report.first_failure = first_failure
    summaries = []
    grouped: dict[str, list[float]] = defaultdict(list)
    for row in all_rows:
        grouped[f"{row.gate}/{row.p}{row.q}"].append(row.r_final_ohm)
    for label in sorted(grouped):
        summaries.append(DistributionSummary.from_samples(label, grouped[label]))
    return LogicExperimentResult(config=config, rows=all_rows,
                                 summaries=summaries, report=report)


@dataclass(frozen=True)
class NonSwitchingCaseReport:
    case_id: int
    count: int
    binary_changes: int
    log_variation: float


def non_switching_report(rows: Sequence[TraceRow],
                         boundary: float) -> list[NonSwitchingCaseReport]:
    """Initial-versus-final resistance scatter for the non-switching cases.

    ``binary_changes`` must stay zero; ``log_variation`` is the standard
    deviation of ln(final/initial), the analog drift of the resident state.
    """
    by_case: dict[int, list[TraceRow]] = defaultdict(list)
    for row in rows:
        if row.case_id in NON_SWITCHING_CASES:
            by_case[row.case_id].append(row)
    reports = []
    for case_id in sorted(by_case):
        case_rows = by_case[case_id]
        changes = sum(1 for r in case_rows
                      if binarize(r.r_init_ohm, boundary) != binarize(r.r_final_ohm, boundary))
        ratios = [math.log(r.r_final_ohm / r.r_init_ohm) for r in case_rows]
        reports.append(NonSwitchingCaseReport(
            case_id=case_id, count=len(case_rows), binary_changes=changes,
            log_variation=float(np.std(np.asarray(ratios)))))
    return reports


# ---------------------------------------------------------------------------
# Scouting experiment
# ---------------------------------------------------------------------------

def _pair_expected(input_class: str, op: str) -> int:
    ones = input_class.count("1")
    if op == "or":
        return int(ones >= 1)
    if op == "and":
        return int(ones == len(input_class))
    if op == "xor":
        return int(ones == 1)
    if op == "read":
        return int(input_class == "1")
    raise ValueError(f"unknown op {op!r}")


def sample_scouting_currents(config: ExperimentConfig, n: int,
                             include_single: bool = False,
                             volts: LogicVoltages = DEFAULT_VOLTAGES,
                             v_read: float = 0.1, v_wl: float = 3.0,
                             verify: bool = True) -> list[CurrentSample]:
    """Measure ``config.cycles`` read currents for every n-bit input pattern.

    The input cells occupy one column (rows 0..n-1), which the standard array
    can select in parallel.  States are rewritten every cycle so each sample
    carries a fresh cycle-to-cycle draw.  With ``include_single`` the one-cell
    classes "0" and "1" are measured as well (for the read operation).
    """
    patterns = ["".join(bits) for bits in
                itertools.product("01", repeat=n)]
    classes: list[tuple[str, list[CellAddress]]] = [
        (pattern, [CellAddress(r, 0) for r in range(n)]) for pattern in patterns]
    if include_single:
        classes += [(bit, [CellAddress(0, 0)]) for bit in ("0", "1")]

    def class_block(input_class: str, addrs: list[CellAddress]):
        array = CellArray(config.topology, config.device, config.transistor,
                          seed=config.seed)
        for addr in addrs:
            array.form(addr)
        samples = []
        for cycle in range(config.cycles):
            rng = _stream(config.seed, 20, len(input_class), int(input_class, 2), cycle)
            write_inputs(array, addrs, input_class, rng, volts=volts, refresh=True,
                         verify=verify)
            current = scout_current(array, addrs, rng, v_read=v_read, v_wl=v_wl)
            samples.append(CurrentSample(input_class=input_class, current=current,
                                         cycle=cycle))
        return samples

    blocks = [(lambda c=cls, a=addrs: class_block(c, a)) for cls, addrs in classes]
    results = _run_blocks(blocks, config.parallel)
    return [s for block_samples in results for s in block_samples]


def _extremes(samples: Iterable[CurrentSample]) -> dict[str, tuple[float, float]]:
    grouped: dict[str, list[float]] = defaultdict(list)
    for s in samples:
        grouped[s.input_class].append(s.current)
    return {cls: (min(v), max(v)) for cls, v in grouped.items()}


def _pair_margins(samples: Sequence[CurrentSample],
                  refs: ReferenceSet | None) -> list[GapMargin]:
    ext = _extremes(samples)
    margins = []
    if {"00", "01", "10", "11"} <= set(ext):
        mixed_min = min(ext["01"][0], ext["10"][0])
        mixed_max = max(ext["01"][1], ext["10"][1])
        margins.append(GapMargin("00|or|01|10", ext["00"][1], mixed_min,
                                 refs.i_or if refs else float("nan")))
        margins.append(GapMargin("01|10|and|11", mixed_max, ext["11"][0],
                                 refs.i_and if refs else float("nan")))
    if {"0", "1"} <= set(ext):
        margins.append(GapMargin("0|read|1", ext["0"][1], ext["1"][0],
                                 refs.i_read if refs else float("nan")))
    return margins


def run_scouting_experiment(config: ExperimentConfig,
                            volts: LogicVoltages = DEFAULT_VOLTAGES,
                            v_read: float = 0.1,
                            v_wl: float = 3.0) -> ScoutingExperimentResult:
    """Sample the input-class currents, place references, classify.

    With ``split`` mode the references come from the first half of the cycles
    and classification runs on the second half (out-of-sample margins); with
    ``insample`` mode both use all samples.  An overlap between adjacent
    classes is recorded as a total failure of the operations that depend on
    the collapsed gap.
    """
    ops = tuple(op.lower() for op in config.scouting_ops)
    n = config.n_inputs
    if n < 2:
        raise ValueError("scouting needs at least two input cells")
    include_single = "read" in ops and n == 2
    samples = sample_scouting_currents(config, n, include_single=include_single,
                                       volts=volts, v_read=v_read, v_wl=v_wl)

    half = (config.cycles + 1) // 2 if config.split == "split" else config.cycles
    train = [s for s in samples if s.cycle < half]
    evaluate = [s for s in samples if s.cycle >= half] if config.split == "split" else samples

    refs: ReferenceSet | None = None
    thresholds: NInputThresholds | None = None
    overlap: OverlapError | None = None
    if config.refs == "placed":
        try:
            if n == 2:
                refs = place_references(train)
            else:
                thresholds = extend_n_inputs(n, train)
        except OverlapError as exc:
            overlap = exc
    else:
        refs = reference_preset(config.refs)
        if n != 2:
            try:
                thresholds = extend_n_inputs(n, train)
            except OverlapError as exc:
                overlap = exc

    report = FailureReport()
    if n == 2:
        for op in ops:
            for input_class in ("00", "01", "10", "11") if op != "read" else ("0", "1"):
                class_samples = [s for s in evaluate if s.input_class == input_class]
                if not class_samples:
                    continue
                bucket = BucketStats(label=f"{op}/{input_class}")
                expected = _pair_expected(input_class, op)
                for s in class_samples:
                    bucket.trials += 1
                    failed = (refs is None  # collapsed gap: nothing to compare against
                              or classify(s.current, refs, op) != expected)
                    if failed:
                        bucket.failures += 1
                        if report.first_failure is None:
                            report.first_failure = (config.seed, bucket.label, s.cycle)
                report.buckets.append(bucket)
    else:
        for op in ops:
            if op not in ("or", "and"):
                continue
            bucket = BucketStats(label=f"{op}/n{n}")
            for s in evaluate:
                if len(s.input_class) != n:
                    continue
                bucket.trials += 1
                ones = s.input_class.count("1")
                expected = int(ones >= 1) if op == "or" else int(ones == n)
                if thresholds is None:
                    bucket.failures += 1
                else:
                    level = thresholds.thresholds[0] if op == "or" else thresholds.thresholds[-1]
                    if int(s.current > level) != expected:
                        bucket.failures += 1
            report.buckets.append(bucket)

    margins = _pair_margins(train, refs) if n == 2 else []
    summaries = []
    grouped: dict[str, list[float]] = defaultdict(list)
    for s in samples:
        grouped[s.input_class].append(s.current)
    for label in sorted(grouped):
        summaries.append(DistributionSummary.from_samples(label, grouped[label]))
    return ScoutingExperimentResult(config=config, samples=samples, refs=refs,
                                    thresholds=thresholds, summaries=summaries,
                                    report=report, margins=margins, overlap=overlap)


# ---------------------------------------------------------------------------
# Device characterization
# ---------------------------------------------------------------------------

def run_characterization(params: VariabilityParams,
                         transistor: TransistorModel | None = None,
                         cells: int = 10, cycles: int = 100, seed: int = 0,
                         volts: LogicVoltages = DEFAULT_VOLTAGES,
                         parallel: bool = False) -> CharacterizationResult:
    """Cycle each cell through SET/RESET and record both state resistances.

    One row per (cell, cycle) holds the LRS read after the SET pulse and the
    HRS read after the RESET pulse.
    """
    transistor = transistor if transistor is not None else TransistorModel()
    topology = ArrayTopology(TopologyKind.STANDARD_1T1R, rows=1, cols=max(cells, 1))

    def cell_block(ci: int):
        array = CellArray(topology, params, transistor, seed=seed)
        addr = CellAddress(0, ci)
        array.form(addr)
        rows = []
        for cycle in range(cycles):
            rng = _stream(seed, 32, ci, cycle)
            array.apply_drive(set_drive(addr, volts), rng)
            r_lrs = array.read_cell(addr, volts.v_read, volts.v_g_read, rng)
            array.apply_drive(reset_drive(addr, volts), rng)
            r_hrs = array.read_cell(addr, volts.v_read, volts.v_g_read, rng)
            rows.append((ci, cycle, r_lrs, r_hrs))
        return rows

    blocks = [(lambda ci=ci: cell_block(ci)) for ci in range(cells)]
    rows = [row for block_rows in _run_blocks(blocks, parallel) for row in block_rows]
    lrs_values = [r[2] for r in rows]
    hrs_values = [r[3] for r in rows]
    summaries = [DistributionSummary.from_samples("lrs", lrs_values),
                 DistributionSummary.from_samples("hrs", hrs_values)]
    for ci in range(cells):
        summaries.append(DistributionSummary.from_samples(
            f"lrs/cell{ci}", [r[2] for r in rows if r[0] == ci]))
        summaries.append(DistributionSummary.from_samples(
            f"hrs/cell{ci}", [r[3] for r in rows if r[0] == ci]))
    ratio = (sum(hrs_values) / len(hrs_values)) / (sum(lrs_values) / len(lrs_values))
    return CharacterizationResult(rows=rows, summaries=summaries,
                                  hrs_lrs_ratio=ratio,
                                  lrs_log_spread=log_spread(lrs_values),
                                  hrs_log_spread=log_spread(hrs_values))


# ---------------------------------------------------------------------------
# Parameter sweep and overlap bisection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepPoint:
    parameter: str
    value: float
    logic_trials: int
    logic_failures: int
    logic_errors: int
    scouting_trials: int
    scouting_failures: int
    overlap: bool
    min_margin: float


def sweep_parameter(config: ExperimentConfig, parameter: str,
                    values: Sequence[float]) -> list[SweepPoint]:
    """Re-run the logic and scouting experiments across device parameter values."""
    if not values:
        raise ValueError("sweep range is empty")
    if not hasattr(config.device, parameter):
        fields = sorted(VariabilityParams().__dataclass_fields__)
        raise ValueError(f"unknown device parameter {parameter!r}; one of {fields}")
    points = []
    for value in values:
        cfg = config.replace(device=config.device.replace(**{parameter: value}))
        logic = run_1t1r_experiment(cfg)
        scouting = run_scouting_experiment(cfg)
        margins = [m.margin for m in scouting.margins]
        points.append(SweepPoint(
            parameter=parameter, value=float(value),
            logic_trials=logic.report.trials,
            logic_failures=logic.report.failures,
            logic_errors=logic.report.errors,
            scouting_trials=scouting.report.trials,
            scouting_failures=scouting.report.failures,
            overlap=scouting.overlap is not None,
            min_margin=min(margins) if margins else float("nan"),
        ))
    return points


def overlap_collides(config: ExperimentConfig, n: int, hrs_sigma_c2c: float) -> bool:
    """True when n-cell reference placement fails at the given HRS spread.

    The probe writes the input states without read-back verification so the
    raw state tails reach the read path (verified writes retry boundary-
    straddling draws away and would hide the collision).  Cells that cannot
    be initialized at all also count as collided: the class structure is gone
    either way.
    """
    cfg = config.replace(device=config.device.replace(hrs_sigma_c2c=hrs_sigma_c2c),
                         n_inputs=n)
    try:
        samples = sample_scouting_currents(cfg, n, verify=False)
        extend_n_inputs(n, samples)
    except (OverlapError, InitFailureError):
        return True
    return False


def find_overlap_sigma(config: ExperimentConfig, n: int, lo: float = 0.32,
                       hi: float = 3.0, iterations: int = 14) -> float:
    """Bisect for the smallest HRS cycle-to-cycle sigma that collapses a gap."""
    if overlap_collides(config, n, lo):
        return lo
    if not overlap_collides(config, n, hi):
        raise RuntimeError(f"no overlap up to sigma={hi} for n={n}")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if overlap_collides(config, n, mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(float(value))  # plain-float repr, round-trip exact
    return str(value)


def _json_value(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return float(value)
    return value


def export_table(name: str, rows: Sequence[dict], out_dir: str | Path,
                 fmt: str = "csv") -> Path:
    """Write one table with its fixed column schema; deterministic bytes."""
    columns = TABLE_COLUMNS[name]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.{fmt}"
    if fmt == "csv":
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_value(row[c]) for c in columns])
    elif fmt == "json":
        payload = [{c: _json_value(row[c]) for c in columns} for row in rows]
        with open(path, "w") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
    else:
        raise ValueError(f"unknown export format {fmt!r} (csv or json)")
    return path


def summary_rows(summaries: Sequence[DistributionSummary]) -> list[dict]:
    return [{"label": s.label, "count": s.count, "min": s.min, "p1": s.p1,
             "p25": s.p25, "median": s.median, "p75": s.p75, "p99": s.p99,
             "max": s.max, "mean": s.mean} for s in summaries]


def import_summaries(path: str | Path) -> list[DistributionSummary]:
    """Read a summary table back (CSV or JSON round-trip)."""
    path = Path(path)
    if path.suffix == ".json":
        records = json.loads(path.read_text())
    else:
        with open(path, newline="") as handle:
            records = list(csv.DictReader(handle))
    out = []
    for rec in records:
        out.append(DistributionSummary(
            label=str(rec["label"]), count=int(rec["count"]),
            min=float(rec["min"]), p1=float(rec["p1"]), p25=float(rec["p25"]),
            median=float(rec["median"]), p75=float(rec["p75"]),
            p99=float(rec["p99"]), max=float(rec["max"]), mean=float(rec["mean"])))
    return out


def _write_failure_report(report: FailureReport, out_dir: str | Path,
                          extra: dict | None = None) -> Path:
    payload = {
        "buckets": [{"label": b.label, "trials": b.trials, "failures": b.failures,
                     "errors": b.errors} for b in report.buckets],
        "trials": report.trials,
        "failures": report.failures,
        "errors": report.errors,
        "first_failure": list(report.first_failure) if report.first_failure else None,
    }
    if extra:
        payload.update(extra)
    path = Path(out_dir) / "report.json"
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def export_logic_result(result: LogicExperimentResult, out_dir: str | Path,
                        fmt: str = "csv") -> list[Path]:
    trace_rows = [{"gate": r.gate, "p": r.p, "q": r.q, "case_id": r.case_id,
                   "cycle": r.cycle, "r_init_ohm": r.r_init_ohm,
                   "r_final_ohm": r.r_final_ohm, "out_bit": r.out_bit,
                   "expected_bit": r.expected_bit} for r in result.rows]
    boundary = default_boundary(result.config.device)
    ns_rows = [{"case_id": r.case_id, "count": r.count,
                "binary_changes": r.binary_changes,
                "log_variation": r.log_variation}
               for r in non_switching_report(result.rows, boundary)]
    return [
        export_table("traces", trace_rows, out_dir, fmt),
        export_table("summary", summary_rows(result.summaries), out_dir, fmt),
        export_table("non_switching", ns_rows, out_dir, fmt),
        _write_failure_report(result.report, out_dir),
    ]


def export_scouting_result(result: ScoutingExperimentResult, out_dir: str | Path,
                           fmt: str = "csv") -> list[Path]:
    current_rows = [{"op": "scout" if len(s.input_class) > 1 else "read",
                     "class": s.input_class, "cycle": s.cycle,
                     "current_a": s.current} for s in result.samples]
    ref_rows = []
    if result.refs is not None:
        ref_rows.append({"i_read_a": result.refs.i_read, "i_or_a": result.refs.i_or,
                         "i_and_a": result.refs.i_and})
    margin_rows = [{"gap": m.gap, "lower_max_a": m.lower_max_a,
                    "upper_min_a": m.upper_min_a, "width_a": m.width_a,
                    "midpoint_a": m.midpoint_a, "margin": m.margin,
                    "reference_a": m.reference_a} for m in result.margins]
    extra = {
        "overlap": str(result.overlap) if result.overlap is not None else None,
        "thresholds": list(result.thresholds.thresholds) if result.thresholds else None,
    }
    return [
        export_table("currents", current_rows, out_dir, fmt),
        export_table("refs", ref_rows, out_dir, fmt),
        export_table("margins", margin_rows, out_dir, fmt),
        export_table("summary", summary_rows(result.summaries), out_dir, fmt),
        _write_failure_report(result.report, out_dir, extra=extra),
    ]


def export_characterization(result: CharacterizationResult, out_dir: str | Path,
                            fmt: str = "csv") -> list[Path]:
    rows = [{"cell": c, "cycle": cy, "r_lrs_ohm": rl, "r_hrs_ohm": rh}
            for c, cy, rl, rh in result.rows]
    paths = [
        export_table("characterize", rows, out_dir, fmt),
        export_table("summary", summary_rows(result.summaries), out_dir, fmt),
    ]
    report = {"hrs_lrs_ratio": result.hrs_lrs_ratio,
              "lrs_log_spread": result.lrs_log_spread,
              "hrs_log_spread": result.hrs_log_spread}
    report_path = Path(out_dir) / "characterize_report.json"
    with open(report_path, "w") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")
    paths.append(report_path)
    return paths


def export_sweep(points: Sequence[SweepPoint], out_dir: str | Path,
                 fmt: str = "csv") -> Path:
    rows = [{"parameter": p.parameter, "value": p.value,
             "logic_trials": p.logic_trials, "logic_failures": p.logic_failures,
             "logic_errors": p.logic_errors, "scouting_trials": p.scouting_trials,
             "scouting_failures": p.scouting_failures, "overlap": p.overlap,
             "min_margin": p.min_margin} for p in points]
    return export_table("sweep", rows, out_dir, fmt)
