"""Divide-and-conquer traceback in frontier-width space.

The engine bisects the topological order.  When the target lies right of the
midpoint it finds the vertex where the canonical optimal path last sits at or
before the midpoint, then solves the two halves independently: the left half
with the inherited boundary, the right half seeded from that crossing vertex
alone.  Only forward passes are used, and at most one pass buffer is live at
any time.

Live-word accounting (``RunMetrics.peak_live_words``) charges

* every entry of the active pass buffer,
* base-case predecessor table entries,
* every live boundary map entry (the root boundary holds all sources),
* candidate lists and prefix/suffix value maps of the node being split,
* ``FRAME_WORDS`` per stack frame (interval ends, target, value, resume point).

The collected output path is charged to output, not to the workspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Optional, Sequence

from .dag import DpDag, Interval, frontier_width, middle_frontier
from .forward import (
    Boundary,
    FrontierBuffer,
    crossing_label,
    global_forward,
    local_prefix_values,
    suffix_value,
)
from .semiring import BOTTOM, MAX_PLUS, Semiring

FRAME_WORDS = 4
# live-word bound: OMEGA_COEF*w + SOURCE_COEF*|S| + (FRAME_WORDS+1)*(depth+2) + B_base + 1
OMEGA_COEF = 4
SOURCE_COEF = 4

ASSERTION_LEVELS = ("off", "decomposition", "full")
MIDPOINT_RULES = ("canonical", "smallest-index")


class NoWitnessError(Exception):
    """The requested sink has no optimal path (its value is bottom)."""


class InvariantError(AssertionError):
    """An internal consistency check failed; this is a bug, not a user error."""


def default_base_case(T: int) -> int:
    return max(1, math.ceil(math.log2(T) ** 2)) if T > 1 else 1


def depth_bound(T: int) -> int:
    return math.ceil(math.log2(T)) + 2 if T > 1 else 2


def space_bound(omega: int, T: int, base_case: int, n_sources: int) -> int:
    """Upper bound asserted on ``peak_live_words`` for instrumented runs."""
    return (
        OMEGA_COEF * omega
        + SOURCE_COEF * n_sources
        + (FRAME_WORDS + 1) * (depth_bound(T) + 2)
        + base_case
        + 1
    )


@dataclass
class TracebackConfig:
    base_case_threshold: Optional[int] = None
    assertion_level: str = "decomposition"
    metrics_enabled: bool = True
    midpoint_rule: str = "canonical"

    def __post_init__(self):
        if self.assertion_level not in ASSERTION_LEVELS:
            raise ValueError(f"assertion_level must be one of {ASSERTION_LEVELS}")
        if self.midpoint_rule not in MIDPOINT_RULES:
            raise ValueError(f"midpoint_rule must be one of {MIDPOINT_RULES}")
        if self.base_case_threshold is not None and self.base_case_threshold < 1:
            raise ValueError("base_case_threshold must be at least 1")

    def threshold_for(self, T: int) -> int:
        if self.base_case_threshold is None:
            return default_base_case(T)
        return self.base_case_threshold


@dataclass
class RunMetrics:
    vertex_count: int = 0
    omega: int = 0
    base_case_threshold: int = 0
    value: int = BOTTOM
    peak_live_words: int = 0
    peak_buffer_entries: int = 0
    root_boundary_words: int = 0
    max_recursion_depth: int = 0
    max_stack_frames: int = 0
    forward_pass_count: int = 0
    vertex_visit_count: int = 0
    base_case_count: int = 0
    decomposition_checks: int = 0

    def as_dict(self) -> dict:
        return dict(sorted(self.__dict__.items()))


@dataclass(frozen=True)
class WitnessPath:
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __getitem__(self, k):
        return self.vertices[k]


@dataclass
class TracebackSubproblem:
    interval: Interval
    boundary: Boundary
    target: int
    target_value: int

    def __post_init__(self):
        if self.target not in self.interval:
            raise InvariantError(f"target {self.target} outside {self.interval}")


def select_midpoint(
    candidates: Sequence[int],
    f: Mapping[int, int],
    g: Mapping[int, int],
    semiring: Semiring = MAX_PLUS,
) -> tuple[int, int, int]:
    """Smallest-index candidate maximizing ``f(v) (x) g(v)``.

    A later candidate replaces the incumbent only on strict improvement.
    """
    if not candidates:
        raise ValueError("no midpoint candidates")
    best, star = BOTTOM, None
    for v in candidates:
        c = semiring.extend(f[v], g[v])
        if c > best:
            best, star = c, v
    if star is None:
        raise NoWitnessError("no candidate admits a feasible crossing")
    return star, f[star], g[star]


class _Run:
    """Mutable state of one traceback run."""

    def __init__(self, dag: DpDag, config: TracebackConfig, emit: Callable[[int], None]):
        self.dag = dag
        self.sr = dag.semiring
        self.config = config
        self.metrics = RunMetrics(vertex_count=dag.vertex_count)
        self.emit = emit
        self.checks = config.assertion_level != "off"
        self.full = config.assertion_level == "full"
        self.base = config.threshold_for(dag.vertex_count)
        self.omega = frontier_width(dag)
        self.buffer_limit = self.omega + 1 if self.full else None
        self.frames = 0
        self.boundary_words = 0
        self.map_words = 0
        m = self.metrics
        m.omega = self.omega
        m.base_case_threshold = self.base

    # probe protocol for forward passes
    def pass_done(self, kind: str, peak: int, visits: int, table: int = 0) -> None:
        m = self.metrics
        m.forward_pass_count += 1
        m.vertex_visit_count += visits
        if peak > m.peak_buffer_entries:
            m.peak_buffer_entries = peak
        self._charge(peak + table)

    def _charge(self, transient: int) -> None:
        live = FRAME_WORDS * self.frames + self.boundary_words + self.map_words + transient
        if live > self.metrics.peak_live_words:
            self.metrics.peak_live_words = live

    def _check(self, ok: bool, msg: str) -> None:
        if self.checks and not ok:
            raise InvariantError(msg)

    def run(self, sink: int) -> RunMetrics:
        dag, m = self.dag, self.metrics
        root = Boundary(dict(dag.sources))
        m.root_boundary_words = len(root)
        self.boundary_words = len(root)
        val = global_forward(dag, sink, probe=self)
        m.value = val
        if val == BOTTOM:
            raise NoWitnessError(f"sink {sink} is unreachable from every source")
        self.solve(1, dag.vertex_count, root, sink, val, 0)
        if self.full:
            self._check(
                m.max_recursion_depth <= depth_bound(dag.vertex_count),
                f"recursion depth {m.max_recursion_depth} exceeds bound",
            )
        if self.config.metrics_enabled and self.checks:
            bound = space_bound(self.omega, dag.vertex_count, self.base, len(root))
            self._check(
                m.peak_live_words <= bound,
                f"peak live words {m.peak_live_words} exceed bound {bound}",
            )
        return m

    def solve(
        self, lo: int, hi: int, boundary: Boundary, s: int, val: int, depth: int,
        owns_boundary: bool = False,
    ) -> None:
        self.frames += 1
        # left children share the parent's boundary map; right children own a singleton
        owned = len(boundary) if owns_boundary else 0
        self.boundary_words += owned
        m = self.metrics
        m.max_stack_frames = max(m.max_stack_frames, self.frames)
        try:
            self._solve(lo, hi, boundary, s, val, depth)
        finally:
            self.frames -= 1
            self.boundary_words -= owned

    def _solve(self, lo: int, hi: int, boundary: Boundary, s: int, val: int, depth: int) -> None:
        dag, sr, m = self.dag, self.sr, self.metrics
        # the target-left-of-midpoint case only narrows the interval
        while True:
            m.max_recursion_depth = max(m.max_recursion_depth, depth)
            if s in boundary:
                self._check(boundary.values[s] == val, f"boundary target {s} value mismatch")
                self.emit(s)
                return
            if hi - lo + 1 <= self.base:
                self._base_case(TracebackSubproblem(Interval(lo, hi), boundary, s, val))
                return
            mid = (lo + hi) // 2
            if s > mid:
                break
            hi = mid
            depth += 1

        cands = middle_frontier(dag, Interval(lo, hi))
        # boundary vertices can cross the cut without touching the interval:
        # those before lo with an edge past mid, and sources right of mid
        extra = [
            b for b in boundary.values
            if (b < lo and dag.last_use(b, s) > mid) or mid < b <= s
        ]
        self.map_words = 2 * (len(cands) + len(extra))
        f = local_prefix_values(dag, lo, mid, boundary, cands, probe=self)
        for b in extra:
            f[b] = boundary.values[b]
        cands = sorted(cands + extra)
        g: dict[int, int] = {}
        for v in cands:
            self.map_words = 2 * len(cands) + len(g)
            g[v] = suffix_value(dag, v, hi, s, scope_lo=mid + 1, probe=self)
        self.map_words = 3 * len(cands)

        if self.checks:
            best = BOTTOM
            for v in cands:
                c = sr.extend(f[v], g[v])
                if c > best:
                    best = c
            m.decomposition_checks += 1
            self._check(best == val, f"decomposition identity failed on [{lo},{hi}]: {best} != {val}")

        if self.config.midpoint_rule == "canonical":
            seeds = {v: f[v] for v in cands if v <= mid}
            fixed = {v: f[v] for v in cands if v > mid}
            x, star = crossing_label(dag, mid + 1, s, seeds, fixed, probe=self)
            self._check(x == val, f"crossing pass value {x} != {val}")
            if star is None:
                raise NoWitnessError(f"no crossing found on [{lo},{hi}]")
        else:
            star, _, _ = select_midpoint(cands, f, g, sr)
        f_star, g_star = f[star], g[star]
        self._check(
            sr.extend(f_star, g_star) == val,
            f"midpoint {star} does not attain the subproblem value",
        )
        self.map_words = 0

        if star < lo:
            self.emit(star)
        elif star <= mid:
            self.solve(lo, mid, boundary, star, f_star, depth + 1)
        self.solve(mid + 1, hi, Boundary.single(star, sr.one), s, g_star, depth + 1, True)

    def _base_case(self, sub: TracebackSubproblem) -> None:
        m = self.metrics
        m.base_case_count += 1
        seg_start, table = _base_case_table(self.dag, sub, self)
        self._check(
            seg_start[1] == sub.target_value,
            f"base case value {seg_start[1]} != {sub.target_value} at target {sub.target}",
        )
        for v in _walk(table, sub, seg_start[0]):
            self.emit(v)


def _base_case_table(dag: DpDag, sub: TracebackSubproblem, run: Optional[_Run] = None):
    """Forward pass over ``[lo, target]`` recording canonical predecessors.

    Values live in a rolling buffer; only predecessors are tabulated.  Returns
    ``((start, value_at_target), table)`` where ``table`` is already reversed
    into successor pointers starting from ``start``.
    """
    lo, s = sub.interval.lo, sub.target
    bvals = sub.boundary.values
    ext = dag.semiring.extend
    in_adj = dag.in_adj
    last_use = dag.last_use
    buf = FrontierBuffer(run.buffer_limit if run is not None else None)
    live = buf.entries
    for b in sorted(bvals):
        if b < lo:
            last = last_use(b, s)
            if last >= lo:
                buf.insert(b, bvals[b], last)
    table: dict[int, Optional[int]] = {}
    table_peak = 0
    xv = BOTTOM
    for v in range(lo, s + 1):
        if v in bvals:
            xv = bvals[v]
        else:
            xv, pred = BOTTOM, None
            for u, w in in_adj[v]:
                xu = live.get(u)
                if xu is not None:
                    c = ext(xu, w)
                    if c > xv:
                        xv, pred = c, u
            table[v] = pred
            table_peak += 1
        last = last_use(v, s)
        if last > v:
            buf.insert(v, xv, last)
        buf.release(v)
    if run is not None:
        run.pass_done("base", buf.peak, s - lo + 1, table=table_peak)
    # reverse the predecessor chain from the target into successor pointers
    nxt, cur = None, s
    while cur not in bvals:
        if cur is None or cur not in table:
            return (None, xv), table
        p = table[cur]
        table[cur] = nxt
        nxt, cur = cur, p
    table[cur] = nxt
    return (cur, xv), table


def _walk(table, sub: TracebackSubproblem, start) -> Iterator[int]:
    if start is None:
        raise NoWitnessError(f"target {sub.target} not reachable from the boundary")
    v = start
    while v is not None:
        yield v
        v = table[v]


def base_case(dag: DpDag, sub: TracebackSubproblem) -> list[int]:
    """Direct traceback on a short interval via a local predecessor table.

    The returned segment starts at the boundary vertex it reaches and ends at
    the target.
    """
    (start, x), table = _base_case_table(dag, sub)
    if x != sub.target_value:
        raise InvariantError(f"base case value {x} != {sub.target_value}")
    return list(_walk(table, sub, start))


class _Collector:
    """Output tape: appends vertices, dropping the repeated seam vertex."""

    def __init__(self):
        self.path: list[int] = []

    def __call__(self, v: int) -> None:
        if not self.path or self.path[-1] != v:
            self.path.append(v)


def traceback(
    dag: DpDag, sink: int, config: Optional[TracebackConfig] = None
) -> tuple[WitnessPath, RunMetrics]:
    """Reconstruct the canonical optimal path from a source to ``sink``.

    Raises :class:`NoWitnessError` if ``sink`` is unreachable, ``IndexError``
    for an out-of-range vertex, and ``ValueError`` if ``sink`` is not a
    declared sink.
    """
    config = config or TracebackConfig()
    if not 1 <= sink <= dag.vertex_count:
        raise IndexError(f"sink {sink} outside 1..{dag.vertex_count}")
    if sink not in dag.sinks:
        raise ValueError(f"vertex {sink} is not a declared sink")
    out = _Collector()
    metrics = _Run(dag, config, out).run(sink)
    return WitnessPath(tuple(out.path)), metrics


def recursive_step(
    dag: DpDag,
    sub: TracebackSubproblem,
    config: Optional[TracebackConfig] = None,
    out: Optional[Callable[[int], None]] = None,
    metrics: Optional[RunMetrics] = None,
) -> list[int]:
    """Solve one subproblem, streaming its segment to ``out``.

    Returns the segment as well, for callers that did not pass a sink.
    """
    collector = _Collector()

    def emit(v: int) -> None:
        collector(v)
        if out is not None:
            out(v)

    run = _Run(dag, config or TracebackConfig(), emit)
    if metrics is not None:
        run.metrics = metrics
    run.boundary_words = len(sub.boundary)
    run.solve(sub.interval.lo, sub.interval.hi, sub.boundary, sub.target, sub.target_value, 0)
    return collector.path
