"""Graph products of cyclic groups: words, reduction and normal forms.

A syllable is a pair ``(vertex, exponent)`` standing for ``g_v ** exponent``
where ``g_v`` generates the cyclic vertex group.  Reduction appends one
syllable at a time to an already reduced word: the new syllable can only
join with the last syllable of its vertex that every later syllable commutes
with, so a single backwards scan either merges it (dropping it if the exponent dies)
or leaves it in place.  The result is then put in canonical order by the
greedy rule "emit the smallest movable vertex first", which picks the
lexicographically least member of the shuffle class.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple

from graphprod.graph import SimplicialGraph, coconnected_components, from_mask, to_mask


class WordError(ValueError):
    pass


class Syllable(NamedTuple):
    vertex: int
    exponent: int


Word = Sequence[tuple[int, int]]


@dataclass(frozen=True)
class CyclicGroupSpec:
    """``order=None`` is the infinite cyclic group, otherwise ``Z/order``."""

    order: int | None = None

    def __post_init__(self) -> None:
        if self.order is not None and self.order < 2:
            raise WordError(f"cyclic vertex group order must be >= 2, got {self.order}")

    @property
    def infinite(self) -> bool:
        return self.order is None

    def __str__(self) -> str:
        return "Z" if self.order is None else f"Z/{self.order}"


Z = CyclicGroupSpec()


@dataclass(frozen=True)
class NormalForm:
    """Canonical reduced word.  Build these with :func:`reduce`, not directly."""

    syllables: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __lt__(self, other: NormalForm) -> bool:
        return (len(self.syllables), self.syllables) < (len(other.syllables), other.syllables)


IDENTITY = NormalForm()


@dataclass(frozen=True)
class Presentation:
    """A finite simplicial graph with a cyclic group at every vertex."""

    graph: SimplicialGraph
    orders: tuple[int | None, ...]
    labels: tuple[str, ...] = ()
    _nonadj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.graph.vertex_count
        if len(self.orders) != n:
            raise WordError(f"need one vertex group per vertex: {n} vertices, {len(self.orders)} groups")
        for o in self.orders:
            CyclicGroupSpec(o)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(_default_label(i) for i in range(n)))
        if len(self.labels) != n:
            raise WordError("need one label per vertex")
        if len(set(self.labels)) != n or not all(self.labels):
            raise WordError("labels must be nonempty and unique")
        full = self.graph.full_mask
        # vertices that do NOT commute with v, v itself included
        object.__setattr__(self, "_nonadj", tuple(full & ~nb for nb in self.graph.adjacency))

    @classmethod
    def build(
        cls,
        vertices: Sequence[tuple[str, int | None]],
        edges: Iterable[tuple[str, str]] = (),
    ) -> Presentation:
        labels = tuple(name for name, _ in vertices)
        index = {name: i for i, name in enumerate(labels)}
        graph = SimplicialGraph.from_edges(len(labels), [(index[u], index[v]) for u, v in edges])
        return cls(graph, tuple(order for _, order in vertices), labels)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    def group(self, v: int) -> CyclicGroupSpec:
        return CyclicGroupSpec(self.orders[v])

    def vertex(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise WordError(f"unknown vertex {label!r}") from None

    def vertex_set(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.vertex(lab) for lab in labels)

    def commute(self, u: int, v: int) -> bool:
        return bool(self.graph.adjacency[u] >> v & 1)

    def normalize_exponent(self, v: int, e: int) -> int:
        n = self.orders[v]
        return e if n is None else e % n

    def generator(self, v: int, exponent: int = 1) -> NormalForm:
        return reduce(self, [(v, exponent)])

    def full_subpresentation(self, vertices: Iterable[int]) -> tuple[Presentation, dict[int, int]]:
        from graphprod.graph import full_subgraph

        sub, remap = full_subgraph(self.graph, vertices)
        keep = sorted(remap)
        return Presentation(sub, tuple(self.orders[v] for v in keep), tuple(self.labels[v] for v in keep)), remap

    def torsion_free_on(self, mask: int) -> bool:
        return all(self.orders[v] is None for v in from_mask(mask))


def _default_label(i: int) -> str:
    return f"v{i}"


def _check_vertex(p: Presentation, v: int) -> None:
    if not (0 <= v < p.vertex_count):
        raise WordError(f"vertex id {v} out of range for {p.vertex_count} vertices")


def _append(p: Presentation, out: list[tuple[int, int]], v: int, e: int) -> None:
    """Multiply the reduced word ``out`` on the right by ``g_v ** e`` in place."""
    n = p.orders[v]
    if n is not None:
        e %= n
    if e == 0:
        return
    adj = p.graph.adjacency[v]
    for j in range(len(out) - 1, -1, -1):
        u, f = out[j]
        if u == v:
            s = f + e
            if n is not None:
                s %= n
            if s == 0:
                del out[j]
            else:
                out[j] = (v, s)
            return
        if not adj >> u & 1:
            break
    out.append((v, e))


def _canonical(p: Presentation, word: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Greedy lexicographically least shuffle: repeatedly take the smallest movable vertex."""
    n = len(word)
    if n < 2:
        return tuple(word)
    nonadj = p._nonadj
    full = p.graph.full_mask
    used = [False] * n
    out = []
    for _ in range(n):
        blocked = 0
        best = -1
        best_v = 0
        for i in range(n):
            if used[i]:
                continue
            v = word[i][0]
            if not blocked >> v & 1 and (best < 0 or v < best_v):
                best, best_v = i, v
            blocked |= nonadj[v]
            if blocked == full:
                break
        used[best] = True
        out.append(word[best])
    return tuple(out)


def _reduced_list(p: Presentation, w: Iterable[tuple[int, int]], start: Iterable[tuple[int, int]] = ()) -> list:
    out = list(start)
    for v, e in w:
        _append(p, out, v, e)
    return out


def reduce(p: Presentation, w: Iterable[tuple[int, int]]) -> NormalForm:
    """Canonical reduced representative of the element spelled by ``w``."""
    syllables = list(w)
    for v, e in syllables:
        _check_vertex(p, v)
        if not isinstance(e, int):
            raise WordError(f"exponent {e!r} is not an integer")
    return NormalForm(_canonical(p, _reduced_list(p, syllables)))


def multiply(p: Presentation, *factors: NormalForm) -> NormalForm:
    out: list[tuple[int, int]] = []
    for x in factors:
        for v, e in x.syllables:
            _append(p, out, v, e)
    return NormalForm(_canonical(p, out))


def invert(p: Presentation, x: NormalForm) -> NormalForm:
    return NormalForm(_canonical(p, [(v, p.normalize_exponent(v, -e)) for v, e in reversed(x.syllables)]))


def conjugate(p: Presentation, x: NormalForm, g: NormalForm) -> NormalForm:
    """``g^-1 * x * g``."""
    return multiply(p, invert(p, g), x, g)


def power(p: Presentation, x: NormalForm, k: int) -> NormalForm:
    if k < 0:
        x, k = invert(p, x), -k
    result = IDENTITY
    base = x
    while k:
        if k & 1:
            result = multiply(p, result, base)
        base = multiply(p, base, base)
        k >>= 1
    return result


def commutator(p: Presentation, x: NormalForm, y: NormalForm) -> NormalForm:
    """``x^-1 y^-1 x y``."""
    return multiply(p, invert(p, x), invert(p, y), x, y)


def commute(p: Presentation, x: NormalForm, y: NormalForm) -> bool:
    return multiply(p, x, y) == multiply(p, y, x)


def length(x: NormalForm) -> int:
    return len(x.syllables)


def support_mask(x: NormalForm) -> int:
    mask = 0
    for v, _ in x.syllables:
        mask |= 1 << v
    return mask


def support(x: NormalForm) -> frozenset[int]:
    return from_mask(support_mask(x))


def _front_positions(p: Presentation, syllables: Sequence[tuple[int, int]]) -> list[int]:
    nonadj = p._nonadj
    blocked = 0
    out = []
    for i, (v, _) in enumerate(syllables):
        if not blocked >> v & 1:
            out.append(i)
        blocked |= nonadj[v]
    return out


def _back_positions(p: Presentation, syllables: Sequence[tuple[int, int]]) -> list[int]:
    nonadj = p._nonadj
    blocked = 0
    out = []
    for i in range(len(syllables) - 1, -1, -1):
        v = syllables[i][0]
        if not blocked >> v & 1:
            out.append(i)
        blocked |= nonadj[v]
    return out


def front_syllables(p: Presentation, x: NormalForm) -> list[tuple[int, int]]:
    """Syllables that some shuffle of ``x`` puts first (at most one per vertex)."""
    return [x.syllables[i] for i in _front_positions(p, x.syllables)]


def back_syllables(p: Presentation, x: NormalForm) -> list[tuple[int, int]]:
    return [x.syllables[i] for i in _back_positions(p, x.syllables)]


def first_vertices(p: Presentation, x: NormalForm) -> frozenset[int]:
    return frozenset(x.syllables[i][0] for i in _front_positions(p, x.syllables))


def last_vertices(p: Presentation, x: NormalForm) -> frozenset[int]:
    return frozenset(x.syllables[i][0] for i in _back_positions(p, x.syllables))


def drop_back(p: Presentation, x: NormalForm, allowed: int) -> tuple[NormalForm, NormalForm]:
    """Split ``x = head * tail`` with ``tail`` the largest suffix supported in ``allowed``.

    Repeatedly strips last syllables whose vertex lies in the bitmask ``allowed``.
    """
    word = list(x.syllables)
    tail: list[tuple[int, int]] = []
    while True:
        for i in _back_positions(p, word):
            if allowed >> word[i][0] & 1:
                tail.append(word.pop(i))
                break
        else:
            break
    tail.reverse()
    return NormalForm(_canonical(p, word)), NormalForm(_canonical(p, tail))


def drop_front(p: Presentation, x: NormalForm, allowed: int) -> tuple[NormalForm, NormalForm]:
    """Split ``x = head * rest`` with ``head`` the largest prefix supported in ``allowed``."""
    word = list(x.syllables)
    head: list[tuple[int, int]] = []
    while True:
        for i in _front_positions(p, word):
            if allowed >> word[i][0] & 1:
                head.append(word.pop(i))
                break
        else:
            break
    return NormalForm(_canonical(p, head)), NormalForm(_canonical(p, word))


def _strippable(p: Presentation, x: NormalForm) -> tuple[int, int] | None:
    """Smallest-vertex first syllable whose vertex also has a *different* last syllable."""
    syl = x.syllables
    fronts = {syl[i][0]: i for i in _front_positions(p, syl)}
    backs = {syl[i][0]: i for i in _back_positions(p, syl)}
    for v in sorted(fronts):
        if v in backs and backs[v] != fronts[v]:
            return syl[fronts[v]]
    return None


def cyclically_reduce(p: Presentation, x: NormalForm) -> tuple[NormalForm, NormalForm]:
    """Return ``(h, core)`` with ``x = h * core * h^-1``.

    Strips a first syllable ``s`` whenever the last syllable of the same
    vertex can absorb it, replacing ``x`` by ``s^-1 x s``.  Each strip
    shortens the word, so this terminates; the output core is a fixed point.
    """
    h = IDENTITY
    core = x
    while True:
        s = _strippable(p, core)
        if s is None:
            return h, core
        sf = NormalForm((s,))
        core = conjugate(p, core, sf)
        h = multiply(p, h, sf)


def element_order(p: Presentation, v: int, e: int) -> int | None:
    n = p.orders[v]
    if n is None:
        return None
    return n // gcd(n, e)


def order(p: Presentation, x: NormalForm) -> int | None:
    """Order of ``x``; ``None`` when infinite.

    The cyclically reduced core splits as a commuting product of pieces, one
    per coconnected component of its support.  A piece on two or more
    vertices has infinite order, so the element is torsion only when every
    piece is a single syllable from a finite vertex group.
    """
    _, core = cyclically_reduce(p, x)
    if not core:
        return 1
    mask = support_mask(core)
    result = 1
    for comp in coconnected_components(p.graph, mask):
        if comp & (comp - 1):
            return None
        v = comp.bit_length() - 1
        (e,) = [f for u, f in core.syllables if u == v]
        k = element_order(p, v, e)
        if k is None:
            return None
        result = result * k // gcd(result, k)
    return result


def word_text(p: Presentation, x: Iterable[tuple[int, int]]) -> str:
    """``a*b^-2*c``; the identity prints as ``1``."""
    parts = []
    for v, e in x:
        lab = p.labels[v]
        parts.append(lab if e == 1 else f"{lab}^{e}")
    return "*".join(parts) if parts else "1"


def set_text(p: Presentation, vertices: Iterable[int]) -> str:
    return "{" + ",".join(p.labels[v] for v in sorted(vertices)) + "}"


def mask_of(vertices: Iterable[int]) -> int:
    return to_mask(vertices)
