# measure_manager.py
# ============================================================================
# Measure Manager - reports for single tables and the example suite
# ============================================================================

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import classic_measures
from config import (
    TABLE1_EXPECTED,
    TABLE1_INTERVAL_LOWER,
    TABLE1_INTERVAL_LOWER_TOLERANCE,
    TABLE1_INTERVAL_UPPER,
    TABLE1_INTERVAL_UPPER_TOLERANCE,
    TABLE1_TOLERANCE,
    TABLE_DECIMALS,
    VERBOSE,
)
from examples_corpus import ExampleId, build_example
from joint_table import JointTable
from optimizer import OptimizerConfig
from union_info import Pid2, SvkInterval, minimize_union_information, pid2, s_vk


@dataclass(frozen=True)
class MeasureReport:
    source: str
    content_hash: str
    n: int
    alphabet_sizes: Tuple[int, ...]
    i_whole: float
    i_singletons: Tuple[float, ...]
    s_max: float
    wms: float
    delta_i: float
    i_vk_upper: float
    i_vk_best: float
    s_vk: SvkInterval
    pid2: Optional[Pid2]
    restarts: int
    converged: bool
    seed: int

    def to_dict(self):
        """JSON-ready dict; key order is part of the output format"""
        return {
            "source": self.source,
            "content_hash": self.content_hash,
            "n": self.n,
            "alphabet_sizes": list(self.alphabet_sizes),
            "i_whole": self.i_whole,
            "i_singletons": list(self.i_singletons),
            "s_max": self.s_max,
            "wms": self.wms,
            "delta_i": self.delta_i,
            "i_vk": {"upper_bound": self.i_vk_upper, "best": self.i_vk_best},
            "s_vk": {"lower": self.s_vk.lower, "best": self.s_vk.best, "upper": self.s_vk.upper},
            "pid2": None if self.pid2 is None else {
                "redundancy": self.pid2.redundancy,
                "unique1": self.pid2.unique1,
                "unique2": self.pid2.unique2,
                "synergy": self.pid2.synergy,
            },
            "optimizer": {"restarts": self.restarts, "converged": self.converged, "seed": self.seed},
        }


@dataclass(frozen=True)
class ExampleOutcome:
    example_id: ExampleId
    report: Optional[MeasureReport]
    error: Optional[str] = None


class MeasureManager:
    """Runs every measure on a table and checks the example suite"""

    def __init__(self, cfg: Optional[OptimizerConfig] = None, verbose=VERBOSE):
        self.cfg = cfg or OptimizerConfig()
        self.verbose = verbose

    def _status(self, message):
        if self.verbose:
            print(message, file=sys.stderr)

    def compute(self, table: JointTable, source: str, with_pid2=False) -> MeasureReport:
        """All measures for one table; warns on stderr if the optimizer hit its cap"""
        self._status(f"🔄 Computing measures for {source}...")
        classic = classic_measures.classic_report(table)
        union = minimize_union_information(table, self.cfg)
        interval = s_vk(table, self.cfg, union=union)
        regions = None
        if with_pid2 and table.n_predictors == 2:
            regions = pid2(table, self.cfg, union=union)
        elif with_pid2:
            self._status(f"⚠️ {source}: pid2 needs exactly 2 predictors, skipped")

        if not union.converged:
            print(f"⚠️ Optimizer did not converge for {source}; reporting the best feasible point "
                  f"(raise --max-iters to search longer)", file=sys.stderr)

        report = MeasureReport(
            source=source,
            content_hash=table.content_hash(),
            n=table.n_predictors,
            alphabet_sizes=tuple(axis.size for axis in table.axes),
            i_whole=classic.i_whole,
            i_singletons=classic.i_singletons,
            s_max=classic.s_max,
            wms=classic.wms,
            delta_i=classic.delta_i,
            i_vk_upper=union.upper_bound_value,
            i_vk_best=union.best_value,
            s_vk=interval,
            pid2=regions,
            restarts=self.cfg.restarts,
            converged=union.converged,
            seed=self.cfg.seed,
        )
        self._status(f"✅ {source}: S_VK in [{interval.lower:.6f}, {interval.upper:.6f}], best {interval.best:.6f}")
        return report

    def _run_example(self, example_id, with_pid2):
        try:
            return ExampleOutcome(example_id, self.compute(build_example(example_id), example_id.value, with_pid2))
        except Exception as e:
            self._status(f"❌ {example_id.value}: {e}")
            return ExampleOutcome(example_id, None, f"{type(e).__name__}: {e}")

    def table1(self, with_pid2=False, workers=1) -> List[ExampleOutcome]:
        """Every example in canonical order, whatever order they finish in"""
        examples = list(ExampleId)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(lambda e: self._run_example(e, with_pid2), examples))
        return [self._run_example(example_id, with_pid2) for example_id in examples]


def check_outcome(outcome: ExampleOutcome) -> List[str]:
    """Mismatches against the expected suite values; empty when the example passes"""
    name = outcome.example_id.value
    if outcome.report is None:
        return [f"{name}: {outcome.error}"]

    report = outcome.report
    expected_s_max, expected_wms, expected_delta_i, expected_s_vk = TABLE1_EXPECTED[name]
    failures = []
    for label, value, expected in (("S_max", report.s_max, expected_s_max),
                                   ("WMS", report.wms, expected_wms),
                                   ("delta_I", report.delta_i, expected_delta_i),
                                   ("S_VK", report.s_vk.best, expected_s_vk)):
        if expected is not None and abs(value - expected) > TABLE1_TOLERANCE:
            failures.append(f"{name}: {label} = {value:.6f}, expected {expected:g} ± {TABLE1_TOLERANCE:g}")

    if expected_s_vk is None:
        interval = report.s_vk
        if interval.lower < TABLE1_INTERVAL_LOWER - TABLE1_INTERVAL_LOWER_TOLERANCE:
            failures.append(f"{name}: S_VK lower bound {interval.lower:.6f} below {TABLE1_INTERVAL_LOWER}")
        if abs(interval.upper - TABLE1_INTERVAL_UPPER) > TABLE1_INTERVAL_UPPER_TOLERANCE:
            failures.append(f"{name}: S_VK upper bound {interval.upper:.6f}, expected {TABLE1_INTERVAL_UPPER}")
        slack = TABLE1_INTERVAL_UPPER_TOLERANCE
        if not interval.lower - slack <= interval.best <= interval.upper + slack:
            failures.append(f"{name}: S_VK best {interval.best:.6f} outside "
                            f"[{interval.lower:.6f}, {interval.upper:.6f}]")
    return failures


def _number(value):
    return f"{value:.{TABLE_DECIMALS}f}"


def format_report(report: MeasureReport) -> str:
    """Two-column text table for one report"""
    rows = [
        ("source", report.source),
        ("content hash", report.content_hash[:16]),
        ("predictors", str(report.n)),
        ("alphabet sizes", " x ".join(str(size) for size in report.alphabet_sizes)),
        ("I(X:Y)", _number(report.i_whole)),
    ]
    rows += [(f"I(X{i + 1}:Y)", _number(value)) for i, value in enumerate(report.i_singletons)]
    rows += [
        ("S_max", _number(report.s_max)),
        ("WMS", _number(report.wms)),
        ("delta I", _number(report.delta_i)),
        ("I_VK upper bound", _number(report.i_vk_upper)),
        ("I_VK best", _number(report.i_vk_best)),
        ("S_VK interval", f"[{_number(report.s_vk.lower)}, {_number(report.s_vk.upper)}]"),
        ("S_VK best", _number(report.s_vk.best)),
    ]
    if report.pid2 is not None:
        rows += [
            ("redundancy {1,2}", _number(report.pid2.redundancy)),
            ("unique {1}", _number(report.pid2.unique1)),
            ("unique {2}", _number(report.pid2.unique2)),
            ("synergy {12}", _number(report.pid2.synergy)),
        ]
    rows.append(("optimizer", f"restarts={report.restarts} seed={report.seed} converged={report.converged}"))
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {value}" for label, value in rows) + "\n"


def format_table1(outcomes: List[ExampleOutcome]) -> str:
    """Suite table; examples with only a known bracket show S_VK as an interval"""
    header = ["Example", "S_max", "WMS", "delta_I", "S_VK"]
    lines = []
    for outcome in outcomes:
        name = outcome.example_id.value
        if outcome.report is None:
            lines.append([name, "error", "", "", outcome.error or ""])
            continue
        report = outcome.report
        if TABLE1_EXPECTED[name][3] is None:
            svk = f"[{_number(report.s_vk.lower)}, {_number(report.s_vk.upper)}] best {_number(report.s_vk.best)}"
        else:
            svk = _number(report.s_vk.best)
        lines.append([name, _number(report.s_max), _number(report.wms), _number(report.delta_i), svk])

    widths = [max(len(row[i]) for row in [header] + lines) for i in range(len(header))]
    rendered = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
                for row in [header] + lines]
    return "\n".join(rendered) + "\n"
