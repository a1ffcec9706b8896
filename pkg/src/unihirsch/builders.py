"""Instance families: alignment grids, chains, random layered DAGs, and the
frontier lower-bound gadget.

All builders are pure functions of their arguments; randomized ones take an
explicit seed and use a private ``random.Random``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .dag import DEFAULT_DELTA_MAX, DagError, DpDag

Text = Union[str, bytes]

GADGET_PENALTY = -(10**6)


@dataclass(frozen=True)
class Scoring:
    match: int
    mismatch: int
    gap: int


SCORINGS = {
    "lcs": Scoring(1, 0, 0),
    "edit": Scoring(0, -1, -1),
    "nw": Scoring(2, -1, -2),
}


def parse_scoring(text: str) -> Scoring:
    """``lcs``, ``edit``, ``nw``, or an explicit ``match,mismatch,gap`` triple."""
    if text in SCORINGS:
        return SCORINGS[text]
    try:
        match, mismatch, gap = (int(t) for t in text.split(","))
    except ValueError:
        raise ValueError(
            f"scoring must be one of {sorted(SCORINGS)} or 'match,mismatch,gap'"
        ) from None
    return Scoring(match, mismatch, gap)


@dataclass(frozen=True)
class GridSpec:
    string_a: Text
    string_b: Text
    scoring: Scoring = SCORINGS["lcs"]
    order: str = "column-major"
    band: Optional[int] = None  # half-width: keep cells with |i - j| <= band

    def __post_init__(self):
        if self.order not in ("column-major", "row-major"):
            raise ValueError(f"unknown grid order {self.order!r}")
        if self.band is not None:
            if self.band < 0:
                raise ValueError("band half-width must be non-negative")
            if abs(len(self.string_a) - len(self.string_b)) > self.band:
                raise DagError(
                    f"band half-width {self.band} cannot connect (0,0) to "
                    f"({len(self.string_a)},{len(self.string_b)})"
                )

    @property
    def semiring_tag(self) -> str:
        return "lcs" if self.scoring == SCORINGS["lcs"] else "max-plus"

    def cells(self) -> list[tuple[int, int]]:
        """Grid cells ``(i, j)`` in vertex order; vertex ``k`` is ``cells()[k-1]``."""
        m, n = len(self.string_a), len(self.string_b)
        keep = (lambda i, j: True) if self.band is None else (lambda i, j: abs(i - j) <= self.band)
        if self.order == "column-major":
            return [(i, j) for j in range(n + 1) for i in range(m + 1) if keep(i, j)]
        return [(i, j) for i in range(m + 1) for j in range(n + 1) if keep(i, j)]


def build_grid(spec: GridSpec) -> DpDag:
    """Alignment grid: ``(i, j)`` is reached from ``(i-1, j)``, ``(i, j-1)``
    and ``(i-1, j-1)``.

    Vertical and horizontal moves cost ``gap``; the diagonal scores ``match``
    or ``mismatch``.  With a band, edges leaving the band are dropped.  Source
    ``(0, 0)`` starts at 0 and the single sink is ``(m, n)``.
    """
    a, b, sc = spec.string_a, spec.string_b, spec.scoring
    cells = spec.cells()
    index = {c: k for k, c in enumerate(cells, start=1)}
    edges = []
    for (i, j), v in index.items():
        if (i - 1, j) in index:
            edges.append((index[i - 1, j], v, sc.gap))
        if (i, j - 1) in index:
            edges.append((index[i, j - 1], v, sc.gap))
        if (i - 1, j - 1) in index:
            w = sc.match if a[i - 1] == b[j - 1] else sc.mismatch
            edges.append((index[i - 1, j - 1], v, w))
    sink = index[len(a), len(b)]
    return DpDag.from_edges(
        len(cells), edges, {index[0, 0]: 0}, [sink], spec.semiring_tag, delta_max=3
    )


def grid_score_two_row(a: Text, b: Text, scoring: Scoring, band: Optional[int] = None) -> int:
    """Textbook alignment score with two rolling rows (no graph involved)."""
    m, n = len(a), len(b)
    NEG = None
    prev = [NEG] * (n + 1)
    for i in range(m + 1):
        cur = [NEG] * (n + 1)
        for j in range(n + 1):
            if band is not None and abs(i - j) > band:
                continue
            if i == 0 and j == 0:
                cur[j] = 0
                continue
            opts = []
            if i > 0 and prev[j] is not NEG:
                opts.append(prev[j] + scoring.gap)
            if j > 0 and cur[j - 1] is not NEG:
                opts.append(cur[j - 1] + scoring.gap)
            if i > 0 and j > 0 and prev[j - 1] is not NEG:
                s = scoring.match if a[i - 1] == b[j - 1] else scoring.mismatch
                opts.append(prev[j - 1] + s)
            cur[j] = max(opts) if opts else NEG
        prev = cur
    return prev[n]


def _last_column(a: Text, b: Text, sc: Scoring) -> list[int]:
    """Scores of aligning every prefix of ``a`` with all of ``b``."""
    col = [i * sc.gap for i in range(len(a) + 1)]
    for j in range(1, len(b) + 1):
        nxt = [col[0] + sc.gap]
        for i in range(1, len(a) + 1):
            s = sc.match if a[i - 1] == b[j - 1] else sc.mismatch
            nxt.append(max(col[i - 1] + s, col[i] + sc.gap, nxt[i - 1] + sc.gap))
        col = nxt
    return col


def _small_alignment(a: Text, b: Text, sc: Scoring) -> list[tuple[int, int]]:
    m, n = len(a), len(b)
    val = [[0] * (n + 1) for _ in range(m + 1)]
    ptr = [[None] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            best = None
            for di, dj in ((1, 1), (1, 0), (0, 1)):
                pi, pj = i - di, j - dj
                if pi < 0 or pj < 0:
                    continue
                if (di, dj) == (1, 1):
                    w = sc.match if a[i - 1] == b[j - 1] else sc.mismatch
                else:
                    w = sc.gap
                c = val[pi][pj] + w
                if best is None or c > best:
                    best, ptr[i][j] = c, (pi, pj)
            val[i][j] = best
    path = [(m, n)]
    while ptr[path[-1][0]][path[-1][1]] is not None:
        path.append(ptr[path[-1][0]][path[-1][1]])
    return path[::-1]


def classical_hirschberg(spec: GridSpec) -> tuple[list[int], int, int]:
    """Two-sided Hirschberg on a full grid, for comparison runs.

    Uses a backward pass on the reversed strings instead of per-candidate
    forward passes.  Returns ``(path vertices, score, peak live words)``.  The
    path is optimal but follows its own tie-breaking, so it need not be the
    canonical one.
    """
    if spec.band is not None:
        raise ValueError("classical Hirschberg comparison needs a full grid")
    a, b, sc = spec.string_a, spec.string_b, spec.scoring
    peak = 0
    cells: list[tuple[int, int]] = []

    def rec(i0: int, i1: int, j0: int, j1: int, depth: int) -> None:
        nonlocal peak
        sa, sb = a[i0:i1], b[j0:j1]
        if len(sb) <= 1 or len(sa) == 0:
            peak = max(peak, 4 * depth + 2 * (len(sa) + 1) * (len(sb) + 1))
            for i, j in _small_alignment(sa, sb, sc):
                cell = (i0 + i, j0 + j)
                if not cells or cells[-1] != cell:
                    cells.append(cell)
            return
        k = len(sb) // 2
        fwd = _last_column(sa, sb[:k], sc)
        bwd = _last_column(sa[::-1], sb[k:][::-1], sc)[::-1]
        peak = max(peak, 4 * depth + 2 * (len(sa) + 1))
        best, split = None, 0
        for i in range(len(sa) + 1):
            c = fwd[i] + bwd[i]
            if best is None or c > best:
                best, split = c, i
        rec(i0, i0 + split, j0, j0 + k, depth + 1)
        rec(i0 + split, i1, j0 + k, j1, depth + 1)

    rec(0, len(a), 0, len(b), 1)
    index = {c: k for k, c in enumerate(spec.cells(), start=1)}
    score = _last_column(a, b, sc)[len(a)]
    return [index[c] for c in cells], score, peak


def random_string(length: int, alphabet: str, rng: random.Random) -> str:
    return "".join(rng.choice(alphabet) for _ in range(length))


def build_chain(
    length: int,
    weights: Union[None, int, Sequence[int]] = None,
    step: int = 1,
) -> DpDag:
    """Chain ``1..T`` where vertex ``i`` reads the previous ``step`` vertices.

    ``weights`` is ``None`` (all edges weigh 1), an integer seed (weights drawn
    from ``-3..3``), or an explicit list in lexicographic edge order.
    """
    T = length
    if T < 1:
        raise ValueError("chain length must be at least 1")
    if T > 1 and not 1 <= step < T:
        raise ValueError(f"step must lie in 1..{T - 1}")
    pairs = sorted((v - d, v) for v in range(2, T + 1) for d in range(1, step + 1) if v - d >= 1)
    if weights is None:
        ws = [1] * len(pairs)
    elif isinstance(weights, int):
        rng = random.Random(weights)
        ws = [rng.randint(-3, 3) for _ in pairs]
    else:
        ws = list(weights)
        if len(ws) != len(pairs):
            raise ValueError(f"expected {len(pairs)} weights, got {len(ws)}")
    edges = [(u, v, w) for (u, v), w in zip(pairs, ws)]
    return DpDag.from_edges(T, edges, {1: 0}, [T], delta_max=max(DEFAULT_DELTA_MAX, step))


def build_random_layered(
    layers: int,
    layer_width: int,
    edge_density: float,
    seed: int,
    weight_range: tuple[int, int] = (0, 3),
) -> DpDag:
    """Layered DAG with independent edges between consecutive layers.

    Every vertex past the first layer gets at least one predecessor.  The
    first layer holds the sources (initial values in ``0..2``), the last layer
    the sinks.  Vertices are numbered layer by layer.
    """
    if layers < 1 or layer_width < 1:
        raise ValueError("layers and layer_width must be at least 1")
    if not 0 < edge_density <= 1:
        raise ValueError("edge_density must lie in (0, 1]")
    rng = random.Random(seed)
    W = layer_width

    def vid(k: int, x: int) -> int:
        return k * W + x + 1

    edges = []
    for k in range(1, layers):
        for y in range(W):
            preds = [x for x in range(W) if rng.random() < edge_density]
            if not preds:
                preds = [rng.randrange(W)]
            for x in preds:
                edges.append((vid(k - 1, x), vid(k, y), rng.randint(*weight_range)))
    sources = {vid(0, x): rng.randint(0, 2) for x in range(W)}
    sinks = [vid(layers - 1, x) for x in range(W)]
    return DpDag.from_edges(
        layers * W, edges, sources, sinks, delta_max=max(DEFAULT_DELTA_MAX, W)
    )


def random_layered_params(seed: int, max_layers: int = 64, max_width: int = 16):
    """Deterministic (layers, width, density) triple for corpus seed ``seed``."""
    rng = random.Random(10_007 * seed + 1)
    return rng.randint(1, max_layers), rng.randint(1, max_width), rng.choice((0.25, 0.5, 0.75, 1.0))


@dataclass(frozen=True)
class GadgetSpec:
    omega: int
    pattern: tuple[int, ...]
    layer_count: Optional[int] = None
    encode: bool = False

    def __post_init__(self):
        if self.omega < 1:
            raise ValueError("omega must be at least 1")
        if len(self.pattern) != self.omega or any(p not in (0, 1) for p in self.pattern):
            raise ValueError(f"pattern must be {self.omega} bits")
        if not any(self.pattern):
            raise ValueError("pattern needs at least one active lane")
        if self.layer_count is not None:
            if self.layer_count < 1:
                raise ValueError("layer_count must be at least 1")
            if self.encode and self.layer_count < self.omega:
                raise ValueError("bit encoding needs layer_count >= omega")

    @property
    def layers(self) -> int:
        return self.layer_count if self.layer_count is not None else self.omega + 1

    @classmethod
    def from_bits(cls, omega: int, bits: str, **kw) -> GadgetSpec:
        return cls(omega, tuple(int(c) for c in bits), **kw)


def build_lb_gadget(spec: GadgetSpec) -> DpDag:
    """Lower-bound gadget: ``omega`` lanes over layers ``L0..Lm`` and one sink.

    Lanes of ``L0`` are sources.  Edges leaving an inactive ``L0`` vertex carry
    a large penalty, edges leaving an active one carry 0.  Without encoding,
    lanes run disjointly to the sink, so all active lanes tie and the
    canonical path takes the first active lane.  With encoding, layers past
    ``L1`` are fully connected and layer ``k`` pays a bonus of 1 for entering
    lane ``k`` when bit ``k`` is set (otherwise the first active lane), so the
    optimal path spells out the whole pattern.
    """
    w, m = spec.omega, spec.layers
    bits = spec.pattern
    first = bits.index(1) + 1

    def vid(k: int, lane: int) -> int:
        return k * w + lane

    sink = (m + 1) * w + 1
    edges = []
    for lane in range(1, w + 1):
        edges.append((vid(0, lane), vid(1, lane), 0 if bits[lane - 1] else GADGET_PENALTY))
    for k in range(1, m):
        if not spec.encode:
            edges.extend((vid(k, lane), vid(k + 1, lane), 0) for lane in range(1, w + 1))
            continue
        layer = k + 1
        bonus_lane = None
        if 2 <= layer <= w:
            bonus_lane = layer if bits[layer - 1] else first
        for x, y in itertools.product(range(1, w + 1), repeat=2):
            edges.append((vid(k, x), vid(k + 1, y), 1 if y == bonus_lane else 0))
    edges.extend((vid(m, lane), sink, 0) for lane in range(1, w + 1))
    sources = {vid(0, lane): 0 for lane in range(1, w + 1)}
    return DpDag.from_edges(sink, edges, sources, [sink], delta_max=max(DEFAULT_DELTA_MAX, w))


def gadget_lane(path: Sequence[int]) -> int:
    """The ``L0`` lane a gadget path starts from (lane ``k`` is vertex ``k``)."""
    return path[0]


def small_dag_family(budget: int = 48, seed: int = 0) -> Iterator[DpDag]:
    """Exhaustive-ish family of tiny layered DAGs (at most 3 layers of width 3).

    Edges may join any earlier layer to any later one.  Shapes with at most
    ``log2(budget)`` possible edges get every edge subset; larger shapes get
    ``budget`` sampled subsets.  Weights and source values are drawn from
    ``{0, 1}`` to force ties.  In-degree-0 vertices past the first layer are
    sources half of the time and dead vertices otherwise.  Every vertex is a
    sink.
    """
    rng = random.Random(seed)
    shapes = [s for r in (1, 2, 3) for s in itertools.product((1, 2, 3), repeat=r)]
    for shape in shapes:
        layer_of = [k for k, width in enumerate(shape) for _ in range(width)]
        T = len(layer_of)
        possible = [
            (u, v) for u in range(1, T + 1) for v in range(u + 1, T + 1)
            if layer_of[u - 1] < layer_of[v - 1]
        ]
        E = len(possible)
        if 2**E <= budget:
            masks = range(2**E)
        else:
            masks = sorted({rng.getrandbits(E) for _ in range(budget)})
        for mask in masks:
            chosen = [p for k, p in enumerate(possible) if mask >> k & 1]
            edges = [(u, v, rng.randint(0, 1)) for u, v in chosen]
            has_in = {v for _, v in chosen}
            sources = {}
            for v in range(1, T + 1):
                if v in has_in:
                    continue
                if layer_of[v - 1] == 0 or rng.random() < 0.5:
                    sources[v] = rng.randint(0, 1)
            yield DpDag.from_edges(T, edges, sources, range(1, T + 1))
