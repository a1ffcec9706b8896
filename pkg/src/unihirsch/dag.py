"""Immutable DP DAGs in a fixed topological order, and frontier analysis.

Vertices are the integers ``1..T`` and every edge ``(u, v)`` has ``u < v``.
Per-vertex tables are plain lists of length ``T + 1`` with slot 0 unused, so
a vertex index can be used directly as a list index.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .semiring import Semiring, get_semiring

DEFAULT_DELTA_MAX = 8


class DagError(ValueError):
    """The DAG description violates a structural invariant."""


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise DagError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def midpoint(self) -> int:
        return (self.lo + self.hi) // 2

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, v: int) -> bool:
        return self.lo <= v <= self.hi

    def halves(self) -> tuple[Interval, Interval]:
        m = self.midpoint
        return Interval(self.lo, m), Interval(m + 1, self.hi)


@dataclass(frozen=True, eq=False)
class DpDag:
    """A computational DP DAG.

    Build instances with :meth:`from_edges`, which validates the edge list and
    precomputes adjacency.  ``in_adj[v]`` holds ``(u, w)`` pairs sorted by
    ``u``: iterating it visits incoming edges in the canonical lexicographic
    edge order, so tie-breaking by "first strict improvement" selects the
    order-minimal edge.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    sources: Mapping[int, int]
    sinks: tuple[int, ...]
    semiring_tag: str = "max-plus"
    delta_max: int = DEFAULT_DELTA_MAX
    in_adj: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False, default=())
    out_adj: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    max_successor: tuple[int, ...] = field(repr=False, default=())

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int, int]],
        sources: Mapping[int, int],
        sinks: Iterable[int],
        semiring_tag: str = "max-plus",
        delta_max: int = DEFAULT_DELTA_MAX,
    ) -> DpDag:
        T = vertex_count
        if not isinstance(T, int) or T < 1:
            raise DagError(f"vertex count must be a positive integer, got {T!r}")
        sr = get_semiring(semiring_tag)
        edge_list = sorted((int(u), int(v), int(w)) for u, v, w in edges)
        preds: list[list[tuple[int, int]]] = [[] for _ in range(T + 1)]
        succs: list[list[int]] = [[] for _ in range(T + 1)]
        last = None
        for u, v, w in edge_list:
            if not (1 <= u <= T and 1 <= v <= T):
                raise DagError(f"edge ({u}, {v}) has an endpoint outside 1..{T}")
            if u >= v:
                raise DagError(f"edge ({u}, {v}) violates the topological order")
            if (u, v) == last:
                raise DagError(f"duplicate edge ({u}, {v})")
            last = (u, v)
            sr.validate(w)
            preds[v].append((u, w))
            succs[u].append(v)
        for v in range(1, T + 1):
            if len(preds[v]) > delta_max:
                raise DagError(
                    f"vertex {v} has in-degree {len(preds[v])} > delta_max={delta_max}"
                )
        src = {}
        for v, a in sorted(dict(sources).items()):
            if not 1 <= v <= T:
                raise DagError(f"source {v} outside 1..{T}")
            if preds[v]:
                raise DagError(f"source {v} has incoming edges")
            src[int(v)] = sr.validate(int(a))
        if not src:
            raise DagError("a DP DAG needs at least one source")
        sink_list = sorted(set(int(t) for t in sinks))
        if not sink_list:
            raise DagError("a DP DAG needs at least one sink")
        for t in sink_list:
            if not 1 <= t <= T:
                raise DagError(f"sink {t} outside 1..{T}")
        max_succ = tuple(s[-1] if s else 0 for s in succs)
        return cls(
            vertex_count=T,
            edges=tuple(edge_list),
            sources=src,
            sinks=tuple(sink_list),
            semiring_tag=semiring_tag,
            delta_max=delta_max,
            in_adj=tuple(tuple(p) for p in preds),
            out_adj=tuple(tuple(s) for s in succs),
            max_successor=max_succ,
        )

    @property
    def semiring(self) -> Semiring:
        return get_semiring(self.semiring_tag)

    def last_use(self, u: int, hi: int) -> int:
        """Largest successor of ``u`` that is ``<= hi``, or 0 if there is none."""
        succ = self.out_adj[u]
        if succ and succ[-1] <= hi:
            return succ[-1]
        k = bisect_right(succ, hi)
        return succ[k - 1] if k else 0

    def has_edge(self, u: int, v: int) -> bool:
        succ = self.out_adj[u]
        k = bisect_right(succ, v)
        return k > 0 and succ[k - 1] == v

    def weight(self, u: int, v: int) -> int:
        for p, w in self.in_adj[v]:
            if p == u:
                return w
        raise KeyError((u, v))

    def with_weights(self, weights: Mapping[tuple[int, int], int]) -> DpDag:
        """Copy of this DAG with some edge weights replaced."""
        edges = [(u, v, weights.get((u, v), w)) for u, v, w in self.edges]
        return DpDag.from_edges(
            self.vertex_count, edges, self.sources, self.sinks,
            self.semiring_tag, self.delta_max,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, DpDag):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and dict(self.sources) == dict(other.sources)
            and self.sinks == other.sinks
            and self.semiring_tag == other.semiring_tag
            and self.delta_max == other.delta_max
        )

    __hash__ = None  # type: ignore[assignment]


def frontier_at(dag: DpDag, ell: int) -> set[int]:
    """Vertices ``v <= ell`` that still have a successor after ``ell``."""
    if not 0 <= ell <= dag.vertex_count:
        raise IndexError(f"cut position {ell} outside 0..{dag.vertex_count}")
    ms = dag.max_successor
    return {v for v in range(1, ell + 1) if ms[v] > ell}


def frontier_sizes(dag: DpDag) -> list[int]:
    """``|frontier_at(dag, ell)|`` for every ``ell`` in ``0..T``."""
    T = dag.vertex_count
    delta = [0] * (T + 2)
    for v in range(1, T + 1):
        s = dag.max_successor[v]
        if s > v:
            # v is live at every cut ell in [v, s - 1]
            delta[v] += 1
            delta[s] -= 1
    sizes, run = [], 0
    for ell in range(T + 1):
        run += delta[ell]
        sizes.append(run)
    return sizes


def frontier_width(dag: DpDag) -> int:
    """Maximum frontier size over all cuts.

    Reported as at least 1 so that width-proportional bounds stay meaningful
    on edgeless instances.
    """
    return max(1, max(frontier_sizes(dag)))


def middle_frontier(dag: DpDag, interval: Interval) -> list[int]:
    """Vertices of ``interval`` at or before its midpoint with an edge past it."""
    m = interval.midpoint
    ms = dag.max_successor
    return [v for v in range(interval.lo, min(m, interval.hi) + 1) if ms[v] > m]


def degree_stats(dag: DpDag) -> dict:
    indeg = [len(p) for p in dag.in_adj[1:]]
    outdeg = [len(s) for s in dag.out_adj[1:]]
    return {
        "max_in_degree": max(indeg),
        "max_out_degree": max(outdeg),
        "mean_in_degree": round(sum(indeg) / len(indeg), 4),
    }


def path_is_valid(dag: DpDag, path: Sequence[int], sink: int) -> bool:
    """Edges exist, indices increase, starts at a source, ends at ``sink``."""
    if not path or path[-1] != sink or path[0] not in dag.sources:
        return False
    return all(dag.has_edge(u, v) for u, v in zip(path, path[1:]))


def path_value(dag: DpDag, path: Sequence[int]) -> int:
    sr = dag.semiring
    acc = dag.sources[path[0]]
    for u, v in zip(path, path[1:]):
        acc = sr.extend(acc, dag.weight(u, v))
    return acc
