import pytest
from hypothesis import given, strategies as st

from strategies import random_dags

from unihirsch.builders import GridSpec, build_chain, build_grid, build_random_layered
from unihirsch.dag import (
    DagError,
    DpDag,
    Interval,
    frontier_at,
    frontier_sizes,
    frontier_width,
    middle_frontier,
    path_is_valid,
    path_value,
)


def brute_frontier(dag, ell):
    return {u for u, v, _ in dag.edges if u <= ell < v}


def test_construction_rejects_bad_edges():
    with pytest.raises(DagError):
        DpDag.from_edges(3, [(2, 1, 0)], {2: 0}, [1])
    with pytest.raises(DagError):
        DpDag.from_edges(3, [(1, 1, 0)], {1: 0}, [3])
    with pytest.raises(DagError):
        DpDag.from_edges(3, [(1, 2, 0), (1, 2, 1)], {1: 0}, [2])
    with pytest.raises(DagError):
        DpDag.from_edges(3, [(1, 4, 0)], {1: 0}, [3])
    with pytest.raises(DagError):
        DpDag.from_edges(3, [(1, 2, 0)], {2: 0}, [2])  # source with an in-edge
    with pytest.raises(DagError):
        DpDag.from_edges(3, [(1, 2, 0)], {}, [2])
    with pytest.raises(DagError):
        DpDag.from_edges(4, [(1, 4, 0), (2, 4, 0), (3, 4, 0)], {1: 0, 2: 0, 3: 0}, [4], delta_max=2)


def test_in_adj_sorted_lexicographically():
    dag = DpDag.from_edges(4, [(3, 4, 0), (1, 4, 0), (2, 4, 0), (1, 2, 0), (1, 3, 0)], {1: 0}, [4])
    assert [u for u, _ in dag.in_adj[4]] == [1, 2, 3]
    assert dag.max_successor[1] == 4
    assert dag.last_use(1, 3) == 3
    assert dag.last_use(1, 1) == 0


def test_frontier_examples():
    chain = build_chain(5)
    assert frontier_at(chain, 3) == {3}
    assert frontier_at(chain, 5) == set()
    assert frontier_width(build_chain(100)) == 1
    assert frontier_width(build_chain(10, weights=3, step=3)) == 3
    with pytest.raises(IndexError):
        frontier_at(chain, 6)


def test_grid_frontier_at_column_boundary():
    dag = build_grid(GridSpec("AB", "ABC"))  # m=2, three rows per column
    ell = 3  # end of column j=0
    assert frontier_at(dag, ell) == brute_frontier(dag, ell)
    assert len(frontier_at(dag, ell)) == 3


def test_middle_frontier_examples():
    chain = build_chain(8)
    assert middle_frontier(chain, Interval(1, 8)) == [4]
    two = build_chain(6)
    assert middle_frontier(two, Interval(5, 6)) == [5]
    dag = build_random_layered(16, 4, 0.5, seed=7)
    assert dag.vertex_count == 64
    iv = Interval(1, 64)
    m = iv.midpoint
    assert middle_frontier(dag, iv) == sorted(u for u in range(1, m + 1) if any(v > m for v in dag.out_adj[u]))


@given(random_dags())
def test_frontier_matches_brute_force(dag):
    sizes = frontier_sizes(dag)
    for ell in range(dag.vertex_count + 1):
        f = frontier_at(dag, ell)
        assert f == brute_frontier(dag, ell)
        assert sizes[ell] == len(f)
        if ell >= 1:
            assert f <= frontier_at(dag, ell - 1) | {ell}


@given(random_dags(), st.data())
def test_middle_frontier_within_bound(dag, data):
    lo = data.draw(st.integers(1, dag.vertex_count))
    hi = data.draw(st.integers(lo, dag.vertex_count))
    iv = Interval(lo, hi)
    mf = middle_frontier(dag, iv)
    assert set(mf) <= frontier_at(dag, iv.midpoint)
    assert len(mf) <= frontier_width(dag)


def test_path_checks():
    chain = build_chain(4)
    assert path_is_valid(chain, [1, 2, 3, 4], 4)
    assert not path_is_valid(chain, [1, 3, 4], 4)
    assert not path_is_valid(chain, [2, 3, 4], 4)
    assert path_value(chain, [1, 2, 3, 4]) == 3


def test_equality_and_reweighting():
    a = build_chain(5)
    b = build_chain(5)
    assert a == b
    c = a.with_weights({(1, 2): 7})
    assert c != a
    assert c.weight(1, 2) == 7


def test_interval():
    iv = Interval(3, 10)
    assert iv.midpoint == 6
    assert len(iv) == 8
    assert iv.halves() == (Interval(3, 6), Interval(7, 10))
    with pytest.raises(DagError):
        Interval(5, 4)
