"""Frontier-width-space traceback for max-type semiring dynamic programs."""

from .builders import (
    GadgetSpec,
    GridSpec,
    Scoring,
    build_chain,
    build_grid,
    build_lb_gadget,
    build_random_layered,
    classical_hirschberg,
)
from .dag import DagError, DpDag, Interval, frontier_at, frontier_width, middle_frontier
from .dagfile import read_dag, write_dag
from .forward import Boundary, global_forward, local_prefix_values, suffix_value
from .oracle import ComparisonReport, compare_runs, oracle_solve, oracle_traceback, verify
from .semiring import BOTTOM, LCS, MAX_PLUS, Semiring
from .traceback import (
    NoWitnessError,
    RunMetrics,
    TracebackConfig,
    WitnessPath,
    select_midpoint,
    traceback,
)

__all__ = [
    "BOTTOM", "LCS", "MAX_PLUS", "Boundary", "ComparisonReport", "DagError",
    "DpDag", "GadgetSpec", "GridSpec", "Interval", "NoWitnessError",
    "RunMetrics", "Scoring", "Semiring", "TracebackConfig", "WitnessPath",
    "build_chain", "build_grid", "build_lb_gadget", "build_random_layered",
    "classical_hirschberg", "compare_runs", "frontier_at", "frontier_width",
    "global_forward", "local_prefix_values", "middle_frontier", "oracle_solve",
    "oracle_traceback", "read_dag", "select_midpoint", "suffix_value",
    "traceback", "verify", "write_dag",
]
