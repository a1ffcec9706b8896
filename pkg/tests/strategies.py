from hypothesis import strategies as st

from unihirsch.dag import DpDag


@st.composite
def random_dags(draw, max_t=24, all_sinks=False):
    """Arbitrary DAGs with in-degree <= 8, small weights and ties."""
    T = draw(st.integers(1, max_t))
    pairs = draw(st.sets(st.tuples(st.integers(1, T), st.integers(1, T)), max_size=4 * T))
    indeg, edges = {}, []
    for u, v in sorted(pairs):
        if u < v and indeg.get(v, 0) < 8:
            indeg[v] = indeg.get(v, 0) + 1
            edges.append((u, v, draw(st.integers(-2, 2))))
    free = [v for v in range(1, T + 1) if v not in indeg]
    chosen = draw(st.lists(st.sampled_from(free), min_size=1, unique=True))
    sources = {v: draw(st.integers(-1, 1)) for v in chosen}
    sinks = range(1, T + 1) if all_sinks else [T]
    return DpDag.from_edges(T, edges, sources, sinks)
