"""Full-table reference solver and run comparison.

The oracle stores a value and a back-pointer for every vertex, which is the
Theta(T)-space baseline the traceback engine is measured against.  It shares
only the DAG representation and semiring arithmetic with the engine.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from .dag import DpDag, path_value
from .semiring import BOTTOM
from .traceback import NoWitnessError, RunMetrics, TracebackConfig, WitnessPath, traceback


@dataclass
class FullTable:
    values: list[int]
    preds: list[Optional[int]]

    @property
    def live_words(self) -> int:
        return 2 * (len(self.values) - 1)


def oracle_solve(dag: DpDag) -> FullTable:
    T = dag.vertex_count
    ext = dag.semiring.extend
    values = [BOTTOM] * (T + 1)
    preds: list[Optional[int]] = [None] * (T + 1)
    for v in range(1, T + 1):
        if v in dag.sources:
            values[v] = dag.sources[v]
            continue
        best, arg = BOTTOM, None
        for u, w in dag.in_adj[v]:  # lexicographic edge order
            c = ext(values[u], w)
            if c > best:
                best, arg = c, u
        values[v], preds[v] = best, arg
    return FullTable(values, preds)


def oracle_traceback(table: FullTable, sink: int) -> WitnessPath:
    if not 1 <= sink < len(table.values):
        raise IndexError(f"sink {sink} outside 1..{len(table.values) - 1}")
    if table.values[sink] == BOTTOM:
        raise NoWitnessError(f"sink {sink} is unreachable")
    path = [sink]
    while table.preds[path[-1]] is not None:
        path.append(table.preds[path[-1]])
    path.reverse()
    return WitnessPath(tuple(path))


def enumerate_best_path(dag: DpDag, sink: int) -> Optional[tuple[int, tuple[int, ...]]]:
    """Exhaustive search over all source-to-sink paths.

    Maximizes the path value, breaking ties by comparing paths from the sink
    backwards, smaller vertex first; at equal head vertex a smaller tail means
    an earlier edge in lexicographic order.  Returns ``None`` when no path
    reaches ``sink`` with a value above bottom.  Exponential; tiny DAGs only.
    """
    sr = dag.semiring
    best: Optional[tuple[int, tuple[int, ...]]] = None

    def walk(v: int, rev: list[int], acc_weights: list[int]):
        nonlocal best
        if v in dag.sources:
            val = sr.extend(dag.sources[v], sr.fold(reversed(acc_weights)))
            if val == BOTTOM:
                return
            key = tuple(rev)
            if best is None or val > best[0] or (val == best[0] and key < best[1]):
                best = (val, key)
            return
        for u, w in dag.in_adj[v]:
            rev.append(u)
            acc_weights.append(w)
            walk(u, rev, acc_weights)
            rev.pop()
            acc_weights.pop()

    walk(sink, [sink], [])
    if best is None:
        return None
    return best[0], tuple(reversed(best[1]))


@dataclass
class ComparisonReport:
    equal: bool
    paths_equal: bool
    values_equal: bool
    first_divergence: Optional[int]
    value_a: Optional[int]
    value_b: Optional[int]
    length_a: int
    length_b: int
    ratios: dict = field(default_factory=dict)
    status: str = "ok"
    wall_time: Optional[float] = None

    def as_dict(self) -> dict:
        return dict(sorted(asdict(self).items()))


def _first_divergence(a, b) -> Optional[int]:
    for k, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return k
    if len(a) != len(b):
        return min(len(a), len(b))
    return None


def _ratio(x, y) -> Optional[float]:
    if x is None or y is None or not y:
        return None
    return round(x / y, 6)


def compare_runs(
    a: Optional[WitnessPath],
    b: Optional[WitnessPath],
    ma: Optional[RunMetrics] = None,
    mb: Optional[RunMetrics] = None,
) -> ComparisonReport:
    """Path and value equality plus metric ratios ``a / b``.

    A missing path stands for "no witness"; two missing paths compare equal.
    """
    pa = tuple(a) if a is not None else None
    pb = tuple(b) if b is not None else None
    va = ma.value if ma is not None else None
    vb = mb.value if mb is not None else None
    if pa is None or pb is None:
        paths_equal = pa == pb
        div = None if paths_equal else 0
    else:
        div = _first_divergence(pa, pb)
        paths_equal = div is None
    values_equal = va == vb
    ratios = {}
    if ma is not None and mb is not None:
        for key in ("peak_live_words", "vertex_visit_count", "forward_pass_count"):
            ratios[key] = _ratio(getattr(ma, key), getattr(mb, key))
    return ComparisonReport(
        equal=paths_equal and values_equal,
        paths_equal=paths_equal,
        values_equal=values_equal,
        first_divergence=div,
        value_a=va,
        value_b=vb,
        length_a=len(pa) if pa else 0,
        length_b=len(pb) if pb else 0,
        ratios=ratios,
    )


def oracle_metrics(dag: DpDag, table: FullTable, sink: int) -> RunMetrics:
    T = dag.vertex_count
    return RunMetrics(
        vertex_count=T,
        value=table.values[sink],
        peak_live_words=table.live_words,
        peak_buffer_entries=T,
        forward_pass_count=1,
        vertex_visit_count=T,
    )


def verify(
    dag: DpDag,
    sink: int,
    config: Optional[TracebackConfig] = None,
    engine_dag: Optional[DpDag] = None,
) -> tuple[ComparisonReport, Optional[RunMetrics]]:
    """Run the traceback engine and the oracle on ``sink`` and compare.

    ``engine_dag`` lets a caller feed the engine a perturbed copy (negative
    control); the oracle always sees ``dag``.
    """
    t0 = time.perf_counter()
    try:
        path, metrics = traceback(engine_dag or dag, sink, config)
    except NoWitnessError:
        path, metrics = None, None
    t1 = time.perf_counter()
    table = oracle_solve(dag)
    try:
        opath = oracle_traceback(table, sink)
    except NoWitnessError:
        opath = None
    omet = oracle_metrics(dag, table, sink)
    if metrics is None:
        omet_value = None if opath is None else omet.value
        report = compare_runs(None, opath)
        report.value_b = omet_value
        report.values_equal = opath is None
        report.equal = report.paths_equal and report.values_equal
        report.status = "no-witness" if report.equal else "mismatch"
        return report, None
    report = compare_runs(path, opath, metrics, omet if opath is not None else None)
    if opath is not None and report.paths_equal:
        # the path must also evaluate to the reported optimum
        report.values_equal = report.values_equal and path_value(dag, path) == omet.value
        report.equal = report.paths_equal and report.values_equal
    report.status = "ok" if report.equal else "mismatch"
    report.wall_time = round(t1 - t0, 6)
    return report, metrics
