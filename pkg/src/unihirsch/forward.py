"""Forward DP passes over contiguous stretches of the topological order.

Every pass keeps a :class:`FrontierBuffer` of the values that are still
needed later in the pass.  A vertex is evicted right after its last in-scope
successor has been processed, so at any step the buffer holds a subset of the
global frontier plus the vertex just inserted.

Passes accept an optional *probe* (see :class:`PassProbe`) used by the
traceback engine to collect instrumentation and enforce the buffer bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Protocol

from .dag import DpDag
from .semiring import BOTTOM


class BufferBoundError(AssertionError):
    """A forward pass held more live values than the width bound allows."""


class PassProbe(Protocol):
    #: maximum permitted buffer size, or None to skip the per-step check
    buffer_limit: Optional[int]

    def pass_done(self, kind: str, peak: int, visits: int) -> None: ...


@dataclass(frozen=True)
class Boundary:
    """Known values on a small vertex set that seeds a local pass."""

    values: Mapping[int, int]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.values)

    def __contains__(self, v: int) -> bool:
        return v in self.values

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def single(cls, v: int, value: int) -> Boundary:
        return cls({v: value})


class FrontierBuffer:
    """Live ``vertex -> value`` entries of one forward pass.

    Entries are filed under the step after which they become dead, which makes
    garbage collection O(1) amortized per vertex.
    """

    __slots__ = ("entries", "_expiry", "peak", "limit")

    def __init__(self, limit: Optional[int] = None):
        self.entries: dict[int, object] = {}
        self._expiry: dict[int, list[int]] = {}
        self.peak = 0
        self.limit = limit

    def insert(self, v: int, value, last_use: int) -> None:
        self.entries[v] = value
        self._expiry.setdefault(last_use, []).append(v)
        n = len(self.entries)
        if n > self.peak:
            self.peak = n
            if self.limit is not None and n > self.limit:
                raise BufferBoundError(
                    f"frontier buffer reached {n} entries, limit {self.limit}"
                )

    def release(self, k: int) -> None:
        dead = self._expiry.pop(k, None)
        if dead:
            for u in dead:
                del self.entries[u]

    def __len__(self) -> int:
        return len(self.entries)


def _sweep(
    dag: DpDag,
    lo: int,
    stop: int,
    seeds: Mapping[int, int],
    fixed: Mapping[int, int],
    targets: Iterable[int] = (),
    probe: Optional[PassProbe] = None,
    kind: str = "forward",
) -> tuple[dict[int, int], int]:
    """Evaluate the recurrence on ``lo..stop``.

    ``seeds`` are vertices before ``lo`` with known values; ``fixed`` are
    vertices inside the range whose value is given rather than computed.
    Predecessors that are neither seeds nor in range contribute nothing.
    Returns the values of ``targets`` and the value at ``stop``.
    """
    ext = dag.semiring.extend
    in_adj = dag.in_adj
    last_use = dag.last_use
    buf = FrontierBuffer(probe.buffer_limit if probe is not None else None)
    live = buf.entries
    for u in sorted(seeds):
        last = last_use(u, stop)
        if last >= lo:
            buf.insert(u, seeds[u], last)
    want = set(targets)
    out: dict[int, int] = {}
    last_fixed = max((v for v in fixed if lo <= v <= stop), default=0)
    xv = BOTTOM
    v = lo - 1
    for v in range(lo, stop + 1):
        if v in fixed:
            xv = fixed[v]
        else:
            xv = BOTTOM
            for u, w in in_adj[v]:
                xu = live.get(u)
                if xu is not None:
                    c = ext(xu, w)
                    if c > xv:
                        xv = c
        if v in want:
            out[v] = xv
        last = last_use(v, stop)
        if last > v:
            buf.insert(v, xv, last)
        buf.release(v)
        if not live and v >= last_fixed and v < stop:
            # nothing left to propagate: every later value is bottom
            xv = BOTTOM
            break
    visits = v - lo + 1
    if probe is not None:
        probe.pass_done(kind, buf.peak, visits)
    for t in want:
        out.setdefault(t, BOTTOM)
    return out, xv if stop >= lo else BOTTOM


def global_forward(dag: DpDag, target: int, probe: Optional[PassProbe] = None) -> int:
    """Optimal value of ``target`` under the global recurrence.

    Unreachable targets evaluate to bottom.  The sweep stops at ``target``.
    """
    if not 1 <= target <= dag.vertex_count:
        raise IndexError(f"target {target} outside 1..{dag.vertex_count}")
    _, x = _sweep(dag, 1, target, {}, dag.sources, probe=probe, kind="global")
    return x


def local_prefix_values(
    dag: DpDag,
    interval_lo: int,
    interval_mid: int,
    boundary: Boundary,
    targets: Iterable[int],
    probe: Optional[PassProbe] = None,
) -> dict[int, int]:
    """Values on ``targets`` of paths from ``boundary`` staying inside ``[lo, mid]``.

    Boundary vertices inside the range keep their boundary value and are not
    recomputed.
    """
    targets = list(targets)
    for t in targets:
        if not interval_lo <= t <= interval_mid:
            raise IndexError(f"target {t} outside [{interval_lo}, {interval_mid}]")
    seeds = {b: x for b, x in boundary.values.items() if b < interval_lo}
    fixed = {b: x for b, x in boundary.values.items() if interval_lo <= b <= interval_mid}
    out, _ = _sweep(
        dag, interval_lo, interval_mid, seeds, fixed, targets, probe, kind="prefix"
    )
    return out


def suffix_value(
    dag: DpDag,
    source: int,
    interval_hi: int,
    sink: int,
    scope_lo: Optional[int] = None,
    probe: Optional[PassProbe] = None,
) -> int:
    """Best value of a path ``source -> sink`` seeded with the identity at ``source``.

    Internal vertices must lie in ``[scope_lo, interval_hi]``; ``scope_lo``
    defaults to ``source + 1``.  Everything outside that window is absent.
    """
    T = dag.vertex_count
    if not (1 <= source <= T and 1 <= sink <= T):
        raise IndexError(f"source/sink outside 1..{T}")
    if sink > interval_hi:
        raise IndexError(f"sink {sink} beyond interval end {interval_hi}")
    one = dag.semiring.one
    if source == sink:
        return one
    if source > sink:
        raise IndexError(f"source {source} after sink {sink}")
    lo = source + 1 if scope_lo is None else max(scope_lo, source + 1)
    if lo > sink:
        return BOTTOM
    _, x = _sweep(dag, lo, sink, {source: one}, {}, probe=probe, kind="suffix")
    return x


def crossing_label(
    dag: DpDag,
    lo: int,
    stop: int,
    seeds: Mapping[int, int],
    fixed: Mapping[int, int],
    probe: Optional[PassProbe] = None,
) -> tuple[int, Optional[int]]:
    """Value at ``stop`` and the seed its canonical optimal path starts from.

    Like :func:`_sweep`, but every live entry also carries a label: the seed
    (or fixed vertex) at the start of its canonical optimal path.  Each vertex
    takes the label of its canonical predecessor, which is the first incoming
    edge in edge order that strictly improves on the running best.  Returns
    ``(BOTTOM, None)`` when ``stop`` is unreachable.
    """
    ext = dag.semiring.extend
    in_adj = dag.in_adj
    last_use = dag.last_use
    buf = FrontierBuffer(probe.buffer_limit if probe is not None else None)
    live = buf.entries
    for u in sorted(seeds):
        last = last_use(u, stop)
        if last >= lo:
            buf.insert(u, (seeds[u], u), last)
    entry = (BOTTOM, None)
    v = lo - 1
    for v in range(lo, stop + 1):
        if v in fixed:
            entry = (fixed[v], v)
        else:
            best, label = BOTTOM, None
            for u, w in in_adj[v]:
                e = live.get(u)
                if e is not None:
                    c = ext(e[0], w)
                    if c > best:
                        best, label = c, e[1]
            entry = (best, label)
        last = last_use(v, stop)
        if last > v:
            buf.insert(v, entry, last)
        buf.release(v)
    if probe is not None:
        probe.pass_done("crossing", buf.peak, v - lo + 1)
    if stop < lo:
        return BOTTOM, None
    return entry
