"""The kernel of the retraction onto one vertex group, as a graph product.

For a vertex ``a`` with ``B = link(a)`` and ``C = V - {a} - B`` the kernel of
``ρ_{a}`` is the graph product over a graph Δ with one vertex per ``u ∈ B``
and one vertex per pair ``(g, u)``, ``g ∈ G_a``, ``u ∈ C``.  Δ is infinite
when ``G_a`` is, so vertices are realized on first use and given fresh ids
in that order.
"""

from __future__ import annotations

import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from graphprod.graph import SimplicialGraph, from_mask, is_irreducible, full_subgraph, to_mask
from graphprod.parabolic import closure, retract_mask
from graphprod.words import (
    NormalForm,
    Presentation,
    length,
    reduce,
    support_mask,
)


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class BVertex:
    """``[(·, u)]`` for ``u`` in the link of ``a``; shared by every copy."""

    u: int


@dataclass(frozen=True)
class CVertex:
    """``[(g, u)]`` for ``u`` outside ``{a} ∪ link(a)``; ``g`` is an exponent of ``G_a``."""

    g: int
    u: int


DeltaVertex = BVertex | CVertex


@dataclass
class KernelPresentation:
    base: Presentation
    a: int
    realized: list[DeltaVertex] = field(default_factory=list)
    _ids: dict[DeltaVertex, int] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _cache: Presentation | None = field(default=None, repr=False)

    @property
    def link(self) -> int:
        return self.base.graph.adjacency[self.a]

    @property
    def rest(self) -> int:
        return self.base.graph.full_mask & ~self.link & ~(1 << self.a)

    @property
    def finite(self) -> bool:
        return self.base.orders[self.a] is not None or self.rest == 0

    def expected_size(self) -> int | None:
        n = self.base.orders[self.a]
        b = bin(self.link).count("1")
        c = bin(self.rest).count("1")
        if c == 0:
            return b
        return None if n is None else b + n * c

    def vertex_id(self, t: DeltaVertex) -> int:
        got = self._ids.get(t)
        if got is not None:
            return got
        with self._lock:
            if t not in self._ids:
                self._ids[t] = len(self.realized)
                self.realized.append(t)
                self._cache = None
            return self._ids[t]

    def realize_all(self) -> None:
        n = self.base.orders[self.a]
        if n is None and self.rest:
            raise KernelError("Δ is infinite when G_a is infinite and C is nonempty")
        for u in sorted(from_mask(self.link)):
            self.vertex_id(BVertex(u))
        for g in range(n or 1):
            for u in sorted(from_mask(self.rest)):
                self.vertex_id(CVertex(g, u))

    def _adjacent(self, s: DeltaVertex, t: DeltaVertex) -> bool:
        adj = self.base.graph.adjacency
        if isinstance(s, CVertex) and isinstance(t, CVertex) and s.g != t.g:
            return False
        return bool(adj[s.u] >> t.u & 1)

    def label(self, t: DeltaVertex) -> str:
        lab = self.base.labels[t.u]
        return lab if isinstance(t, BVertex) else f"{lab}@{t.g}"

    def presentation(self) -> Presentation:
        """Graph product over the realized part of Δ (a full subgraph of Δ)."""
        with self._lock:
            if self._cache is not None and self._cache.vertex_count == len(self.realized):
                return self._cache
            verts = list(self.realized)
        edges = [
            (i, j)
            for i in range(len(verts))
            for j in range(i + 1, len(verts))
            if self._adjacent(verts[i], verts[j])
        ]
        pres = Presentation(
            SimplicialGraph.from_edges(len(verts), edges),
            tuple(self.base.orders[t.u] for t in verts),
            tuple(self.label(t) for t in verts),
        )
        with self._lock:
            self._cache = pres
        return pres

    def census(self) -> tuple[int, int]:
        pres = self.presentation()
        return pres.vertex_count, len(pres.graph.edges())


def kernel_presentation(p: Presentation, a: int, eager: bool | None = None) -> KernelPresentation:
    if not 0 <= a < p.vertex_count:
        raise KernelError(f"vertex id {a} out of range")
    k = KernelPresentation(p, a)
    if eager or (eager is None and k.finite):
        k.realize_all()
    return k


def psi(k: KernelPresentation, w: NormalForm) -> NormalForm:
    """Rewrite ``w ∈ ker ρ_a`` as an element of the graph product over Δ."""
    p, a = k.base, k.a
    n = p.orders[a]
    link = k.link
    prefix = 0
    out = []
    for v, e in w.syllables:
        if v == a:
            prefix += e
            if n is not None:
                prefix %= n
        elif link >> v & 1:
            out.append((k.vertex_id(BVertex(v)), e))
        else:
            out.append((k.vertex_id(CVertex(prefix, v)), e))
    if prefix != 0:
        raise KernelError("element is not in the kernel of the retraction onto G_a")
    return reduce(k.presentation(), out)


def phi(k: KernelPresentation, w: NormalForm) -> NormalForm:
    """The homomorphism Δ-product -> base with ``k ↦ g k̄ g^-1`` on ``K_[(g,u)]``."""
    a = k.a
    word = []
    for t, e in w.syllables:
        dv = k.realized[t]
        if isinstance(dv, BVertex):
            word.append((dv.u, e))
        else:
            word.extend([(a, dv.g), (dv.u, e), (a, -dv.g)])
    return reduce(k.base, word)


@dataclass(frozen=True)
class ProjectStep:
    """Retraction onto the essential support, then renumbering of its vertices."""

    source: Presentation
    target: Presentation
    kept: tuple[int, ...]
    exact: bool

    def apply(self, x: NormalForm) -> NormalForm:
        remap = {old: new for new, old in enumerate(self.kept)}
        y = retract_mask(self.source, to_mask(self.kept), x)
        return reduce(self.target, [(remap[v], e) for v, e in y.syllables])


@dataclass(frozen=True)
class KernelStep:
    source: Presentation
    kernel: KernelPresentation
    target: Presentation
    vertex: int

    def apply(self, x: NormalForm) -> NormalForm:
        y = psi(self.kernel, x)
        if self.kernel.presentation().vertex_count != self.target.vertex_count:
            raise KernelError("element leaves the realized part of Δ")
        return y


Step = ProjectStep | KernelStep


@dataclass
class Compression:
    presentation: Presentation
    images: list[NormalForm]
    steps: list[Step]
    exact: bool = True

    def apply(self, x: NormalForm) -> NormalForm:
        """Image of any element of the subgroup the input generated."""
        for step in self.steps:
            x = step.apply(x)
        return x

    def log(self) -> list[str]:
        lines = []
        for step in self.steps:
            if isinstance(step, ProjectStep):
                kept = ",".join(step.source.labels[v] for v in step.kept)
                lines.append(f"project onto esupp {{{kept}}}: {step.target.vertex_count} vertices")
            else:
                lab = step.source.labels[step.vertex]
                census = census_text(step.target.vertex_count, len(step.target.graph.edges()))
                lines.append(f"kernel at {lab}: Δ realized {census}")
        return lines


def census_text(vertices: int, edges: int) -> str:
    """``4 vertices, 3 edges`` with singular forms where they apply."""
    v = "vertex" if vertices == 1 else "vertices"
    e = "edge" if edges == 1 else "edges"
    return f"{vertices} {v}, {edges} {e}"


def _total(xs: Sequence[NormalForm]) -> int:
    return sum(length(x) for x in xs)


def compress(p: Presentation, xs: Iterable[NormalForm], budget: int | None = None) -> Compression:
    """Shrink the ambient graph product without losing injectivity on ``⟨X⟩``.

    Alternates projection onto the essential support with passing to the
    kernel of a vertex retraction that kills every generator.  The second
    move strictly lowers the total syllable count, so the loop ends.
    """
    xs = list(xs)
    steps: list[Step] = []
    exact = True
    pres = p
    while True:
        cl = closure(pres, xs, budget)
        exact = exact and cl.exact
        kept = tuple(sorted(cl.parabolic.base))
        if len(kept) != pres.vertex_count:
            target, _ = pres.full_subpresentation(kept)
            step = ProjectStep(pres, target, kept, cl.exact)
            xs = [step.apply(x) for x in xs]
            steps.append(step)
            pres = target
        dead = None
        for t in range(pres.vertex_count):
            if all(not (support_mask(retract_mask(pres, 1 << t, x))) for x in xs):
                dead = t
                break
        if dead is None:
            return Compression(pres, xs, steps, exact)
        kp = kernel_presentation(pres, dead, eager=False)
        new = [psi(kp, x) for x in xs]
        target = kp.presentation()
        new = [reduce(target, x.syllables) for x in new]
        steps.append(KernelStep(pres, kp, target, dead))
        xs = new
        pres = target


def esupp_is_irreducible(pres: Presentation, kept: Iterable[int]) -> bool:
    sub, _ = full_subgraph(pres.graph, kept)
    return is_irreducible(sub)


__all__ = [
    "BVertex",
    "CVertex",
    "Compression",
    "KernelError",
    "KernelPresentation",
    "KernelStep",
    "ProjectStep",
    "compress",
    "kernel_presentation",
    "phi",
    "psi",
]
