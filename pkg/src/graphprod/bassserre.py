"""The splitting ``G = G_A *_{G_C} G_B`` at a vertex and the action on its tree.

``A = V - {v}``, ``C = link(v)``, ``B = C ∪ {v}``.  Elements are written in
amalgam normal form by greedily peeling off maximal ``G_A`` and ``G_B``
prefixes; translation lengths come from the alternation count of the
cyclically reduced form.
"""

from __future__ import annotations

from dataclasses import dataclass

from graphprod.graph import from_mask
from graphprod.words import (
    IDENTITY,
    NormalForm,
    Presentation,
    drop_front,
    invert,
    multiply,
    support_mask,
)


class SplittingError(ValueError):
    pass


@dataclass(frozen=True)
class Splitting:
    presentation: Presentation
    v: int
    a_mask: int
    b_mask: int
    c_mask: int

    @property
    def A(self) -> frozenset[int]:
        return from_mask(self.a_mask)

    @property
    def B(self) -> frozenset[int]:
        return from_mask(self.b_mask)

    @property
    def C(self) -> frozenset[int]:
        return from_mask(self.c_mask)

    @property
    def degenerate(self) -> bool:
        """``v`` is adjacent to everything, so ``G = G_A × G_v`` and the tree is trivial."""
        return self.c_mask == self.a_mask

    def side(self, x: NormalForm) -> str | None:
        """``"A"``/``"B"`` for the factor containing ``x``, ``"C"`` if both, None if neither."""
        sup = support_mask(x)
        in_a = sup & ~self.a_mask == 0
        in_b = sup & ~self.b_mask == 0
        if in_a and in_b:
            return "C"
        return "A" if in_a else "B" if in_b else None


def split_at(p: Presentation, v: int) -> Splitting:
    n = p.vertex_count
    if n < 2:
        raise SplittingError("splitting needs at least two vertices")
    if not 0 <= v < n:
        raise SplittingError(f"vertex id {v} out of range")
    c = p.graph.adjacency[v]
    return Splitting(p, v, p.graph.full_mask & ~(1 << v), c | (1 << v), c)


def _require(s: Splitting) -> None:
    if s.degenerate:
        raise SplittingError(
            f"degenerate splitting: {s.presentation.labels[s.v]} is adjacent to every other vertex"
        )


@dataclass(frozen=True)
class AlternatingForm:
    """``x = prefix * factors[0] * factors[1] * ...`` with factors alternating sides, none in ``G_C``."""

    prefix: NormalForm
    factors: tuple[tuple[str, NormalForm], ...]

    def __len__(self) -> int:
        return len(self.factors)


def alternating_form(s: Splitting, x: NormalForm) -> AlternatingForm:
    _require(s)
    p = s.presentation
    rest = x
    pieces: list[tuple[str, NormalForm]] = []
    side = "A"
    while rest:
        head, rest = drop_front(p, rest, s.a_mask if side == "A" else s.b_mask)
        if head:
            pieces.append((side, head))
        side = "B" if side == "A" else "A"
    prefix = IDENTITY
    if pieces and s.side(pieces[0][1]) == "C":
        prefix = pieces.pop(0)[1]
    return AlternatingForm(prefix, tuple(pieces))


@dataclass(frozen=True)
class Elliptic:
    def __str__(self) -> str:
        return "elliptic"


@dataclass(frozen=True)
class Hyperbolic:
    translation_length: int

    def __str__(self) -> str:
        return f"hyperbolic {self.translation_length}"


def amalgam_cyclic_reduce(s: Splitting, x: NormalForm) -> tuple[NormalForm, AlternatingForm]:
    """Conjugate until the alternating form has ≤ 1 factor or an even number of them.

    Returns ``(h, form)`` with ``x = h * core * h^-1``.
    """
    p = s.presentation
    h = IDENTITY
    core = x
    while True:
        form = alternating_form(s, core)
        n = len(form)
        if n <= 1 or n % 2 == 0:
            return h, form
        last = form.factors[-1][1]
        core = multiply(p, last, core, invert(p, last))
        h = multiply(p, h, invert(p, last))


def classify_action(s: Splitting, x: NormalForm) -> Elliptic | Hyperbolic:
    _require(s)
    _, form = amalgam_cyclic_reduce(s, x)
    if len(form) <= 1:
        return Elliptic()
    return Hyperbolic(len(form))
