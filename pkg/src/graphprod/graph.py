"""Finite simplicial graphs stored as adjacency bitmasks.

Vertices are the dense integers ``0..n-1``.  Vertex sets are passed in as
any iterable of ids and returned as ``frozenset``; internally every set is
an ``int`` bitmask, so the hot paths in :mod:`graphprod.words` can test
adjacency with a shift and a mask.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations

MAX_VERTICES = 64


class GraphError(ValueError):
    pass


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


@dataclass(frozen=True)
class SimplicialGraph:
    """Graph without loops or multiple edges.

    ``adjacency[v]`` is the bitmask of the neighbours of ``v``.
    """

    adjacency: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.adjacency)
        if n > MAX_VERTICES:
            raise GraphError(f"at most {MAX_VERTICES} vertices supported, got {n}")
        full = (1 << n) - 1
        for v, nb in enumerate(self.adjacency):
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbour out of range")
            if nb >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            for u in from_mask(nb):
                if not self.adjacency[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric on {{{u}, {v}}}")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> SimplicialGraph:
        adj = [0] * vertex_count
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(f"edge {{{u}, {v}}} out of range")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(tuple(adj))

    @classmethod
    def edgeless(cls, vertex_count: int) -> SimplicialGraph:
        return cls((0,) * vertex_count)

    @classmethod
    def complete(cls, vertex_count: int) -> SimplicialGraph:
        full = (1 << vertex_count) - 1
        return cls(tuple(full & ~(1 << v) for v in range(vertex_count)))

    @classmethod
    def path(cls, vertex_count: int) -> SimplicialGraph:
        return cls.from_edges(vertex_count, [(i, i + 1) for i in range(vertex_count - 1)])

    @classmethod
    def cycle(cls, vertex_count: int) -> SimplicialGraph:
        return cls.from_edges(vertex_count, [(i, (i + 1) % vertex_count) for i in range(vertex_count)])

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.adjacency)) - 1

    def vertices(self) -> frozenset[int]:
        return frozenset(range(self.vertex_count))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(range(self.vertex_count), 2) if self.adjacency[u] >> v & 1]

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def check_mask(self, mask: int) -> int:
        if mask < 0 or mask & ~self.full_mask:
            raise GraphError("vertex id out of range")
        return mask

    def link_mask(self, mask: int) -> int:
        # empty intersection is the whole vertex set
        out = self.full_mask
        v = 0
        m = mask
        while m:
            if m & 1:
                out &= self.adjacency[v]
            m >>= 1
            v += 1
        return out


def link(graph: SimplicialGraph, vertices: Iterable[int]) -> frozenset[int]:
    """Vertices adjacent to every vertex of ``vertices``; ``link(∅) = V``."""
    return from_mask(graph.link_mask(graph.check_mask(to_mask(vertices))))


def full_subgraph(graph: SimplicialGraph, vertices: Iterable[int]) -> tuple[SimplicialGraph, dict[int, int]]:
    """Induced subgraph on ``vertices`` together with the old-id -> new-id map.

    New ids follow the increasing order of the old ones.
    """
    keep = sorted(from_mask(graph.check_mask(to_mask(vertices))))
    remap = {old: new for new, old in enumerate(keep)}
    adj = []
    for old in keep:
        nb = 0
        for other in from_mask(graph.adjacency[old]):
            if other in remap:
                nb |= 1 << remap[other]
        adj.append(nb)
    return SimplicialGraph(tuple(adj)), remap


def complement(graph: SimplicialGraph) -> SimplicialGraph:
    full = graph.full_mask
    return SimplicialGraph(tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(graph.adjacency)))


def _component_mask(adjacency: tuple[int, ...], start: int, within: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        v = 0
        f = frontier
        while f:
            if f & 1:
                nxt |= adjacency[v]
            f >>= 1
            v += 1
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def components(graph: SimplicialGraph, within: int | None = None) -> list[int]:
    """Connected components (as bitmasks) of the subgraph induced on ``within``."""
    remaining = graph.full_mask if within is None else within
    out = []
    while remaining:
        start = (remaining & -remaining).bit_length() - 1
        comp = _component_mask(graph.adjacency, start, remaining)
        out.append(comp)
        remaining &= ~comp
    return out


def coconnected_components(graph: SimplicialGraph, within: int) -> list[int]:
    """Components of the complement graph restricted to ``within``.

    These are the irreducible direct factors of the full subgroup on ``within``.
    """
    return components(complement(graph), within)


def is_irreducible(graph: SimplicialGraph) -> bool:
    """True iff the complement is connected.  Empty and one-vertex graphs count as irreducible."""
    return len(components(complement(graph))) <= 1


def split_reducible(graph: SimplicialGraph) -> tuple[frozenset[int], frozenset[int]] | None:
    """A partition ``(A, B)`` with ``B = link(A)``, or ``None`` if irreducible.

    ``A`` is the complement component containing the smallest vertex id.
    """
    comps = components(complement(graph))
    if len(comps) <= 1:
        return None
    a = comps[0]
    return from_mask(a), from_mask(graph.full_mask & ~a)


def find_noncut_vertex(graph: SimplicialGraph) -> int:
    """A vertex whose removal leaves the graph irreducible.

    Any leaf of a BFS tree of the (connected) complement works; we return the
    last vertex reached by BFS from vertex 0, which is always such a leaf.
    """
    n = graph.vertex_count
    if n == 0:
        raise GraphError("graph is empty")
    if not is_irreducible(graph):
        raise GraphError("graph is reducible")
    co = complement(graph)
    order = [0]
    seen = 1
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for u in sorted(from_mask(co.adjacency[v] & ~seen)):
            seen |= 1 << u
            order.append(u)
    return order[-1]
