from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphprod.graph import (
    GraphError,
    SimplicialGraph,
    complement,
    components,
    find_noncut_vertex,
    from_mask,
    full_subgraph,
    is_irreducible,
    link,
    split_reducible,
    to_mask,
)

PATH = SimplicialGraph.path(3)  # a=0 - b=1 - c=2
SQUARE = SimplicialGraph.cycle(4)


def all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for bits in product((0, 1), repeat=len(pairs)):
        yield SimplicialGraph.from_edges(n, [e for e, b in zip(pairs, bits) if b])


SMALL = [g for n in range(6) for g in all_graphs(n)]


def test_link_examples():
    assert link(PATH, {1}) == {0, 2}
    assert link(PATH, {0, 2}) == {1}
    assert link(PATH, set()) == {0, 1, 2}


def test_link_rejects_out_of_range():
    with pytest.raises(GraphError):
        link(PATH, {3})


def test_graph_validation():
    with pytest.raises(GraphError):
        SimplicialGraph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        SimplicialGraph((0b10, 0b00))


def test_full_subgraph_examples():
    sub, remap = full_subgraph(PATH, {0, 2})
    assert sub == SimplicialGraph.edgeless(2) and remap == {0: 0, 2: 1}
    same, ident = full_subgraph(PATH, {0, 1, 2})
    assert same == PATH and ident == {0: 0, 1: 1, 2: 2}
    sub, _ = full_subgraph(SQUARE, {0, 1, 2})
    assert sub == SimplicialGraph.path(3)


def test_complement_examples():
    assert complement(SimplicialGraph.edgeless(3)) == SimplicialGraph.complete(3)
    assert complement(SimplicialGraph.complete(3)) == SimplicialGraph.edgeless(3)
    assert complement(PATH) == SimplicialGraph.from_edges(3, [(0, 2)])


def test_irreducibility_examples():
    assert not is_irreducible(PATH)
    assert is_irreducible(SimplicialGraph.edgeless(2))
    assert not is_irreducible(SimplicialGraph.complete(2))
    assert is_irreducible(SimplicialGraph.edgeless(0))
    assert is_irreducible(SimplicialGraph.edgeless(1))


def test_split_examples():
    assert split_reducible(PATH) == (frozenset({0, 2}), frozenset({1}))
    assert split_reducible(SimplicialGraph.edgeless(2)) is None
    assert split_reducible(SQUARE) == (frozenset({0, 2}), frozenset({1, 3}))


def test_noncut_examples():
    assert find_noncut_vertex(SimplicialGraph.edgeless(1)) == 0
    assert find_noncut_vertex(SimplicialGraph.edgeless(3)) in {0, 1, 2}
    with pytest.raises(GraphError):
        find_noncut_vertex(PATH)
    with pytest.raises(GraphError):
        find_noncut_vertex(SimplicialGraph.edgeless(0))


def _irreducible_by_search(g):
    """No partition V = A ⊔ link(A) with both sides nonempty (direct definition)."""
    n = g.vertex_count
    for m in range(1, (1 << n) - 1):
        a = from_mask(m)
        rest = frozenset(range(n)) - a
        if rest <= link(g, a):
            return False
    return True


def test_exhaustive_small_graphs():
    for g in SMALL:
        _check_graph(g)


def _check_graph(g):
    assert complement(complement(g)) == g
    irr = is_irreducible(g)
    assert irr == (split_reducible(g) is None) == _irreducible_by_search(g)
    if not irr:
        a, b = split_reducible(g)
        assert a and b and a | b == frozenset(range(g.vertex_count))
        assert link(g, a) >= b
    elif g.vertex_count >= 1:
        v = find_noncut_vertex(g)
        sub, _ = full_subgraph(g, set(range(g.vertex_count)) - {v})
        assert is_irreducible(sub)


@given(st.sampled_from(SMALL), st.data())
def test_link_is_intersection(g, data):
    a = data.draw(st.frozensets(st.integers(0, max(g.vertex_count - 1, 0)), max_size=g.vertex_count))
    if g.vertex_count == 0:
        return
    want = frozenset(range(g.vertex_count))
    for v in a:
        want &= link(g, {v})
    assert link(g, a) == want


def test_components_partition():
    g = SimplicialGraph.from_edges(5, [(0, 1), (3, 4)])
    assert sorted(components(g)) == sorted([to_mask({0, 1}), to_mask({2}), to_mask({3, 4})])
