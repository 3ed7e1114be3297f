"""Parabolic subgroups ``g G_S g^-1`` as values.

A parabolic is stored as ``(conjugator, base)``.  The conjugator is reduced
to the shortest element of its coset modulo the normalizer
``G_{S ∪ link(S)}``: two such pairs give the same subgroup exactly when the
bases agree and the conjugators agree in that coset, so equality of the
canonical pairs is equality of subgroups.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

from graphprod.graph import from_mask, to_mask
from graphprod.words import (
    IDENTITY,
    NormalForm,
    Presentation,
    back_syllables,
    conjugate,
    drop_back,
    drop_front,
    front_syllables,
    invert,
    multiply,
    support_mask,
)


class ParabolicError(ValueError):
    pass


@dataclass(frozen=True)
class ParabolicSubgroup:
    conjugator: NormalForm
    base: frozenset[int]

    @property
    def base_mask(self) -> int:
        return to_mask(self.base)

    @property
    def trivial(self) -> bool:
        return not self.base


TRIVIAL = ParabolicSubgroup(IDENTITY, frozenset())


def retraction(p: Presentation, vertices: Iterable[int], x: NormalForm) -> NormalForm:
    """The canonical retraction onto ``G_A``: delete syllables outside ``A``."""
    mask = p.graph.check_mask(to_mask(vertices))
    return retract_mask(p, mask, x)


def retract_mask(p: Presentation, mask: int, x: NormalForm) -> NormalForm:
    # deleting letters from a reduced word can create joinable pairs, so re-reduce
    from graphprod.words import reduce

    return reduce(p, [s for s in x.syllables if mask >> s[0] & 1])


def canonicalize(p: Presentation, g: NormalForm, base: Iterable[int]) -> ParabolicSubgroup:
    mask = p.graph.check_mask(to_mask(base))
    normalizer = mask | p.graph.link_mask(mask)
    head, _ = drop_back(p, g, normalizer)
    return ParabolicSubgroup(head, from_mask(mask))


def full(p: Presentation, base: Iterable[int]) -> ParabolicSubgroup:
    return canonicalize(p, IDENTITY, base)


def element_in_parabolic(p: Presentation, x: NormalForm, P: ParabolicSubgroup) -> bool:
    y = conjugate(p, x, P.conjugator)
    return support_mask(y) & ~P.base_mask == 0


def parabolic_equal(P1: ParabolicSubgroup, P2: ParabolicSubgroup) -> bool:
    return P1 == P2


def parabolic_contains(p: Presentation, P1: ParabolicSubgroup, P2: ParabolicSubgroup) -> bool:
    """True iff ``P2 ⊆ P1``."""
    if not P2.base <= P1.base:
        return False
    g2 = P2.conjugator
    for t in sorted(P2.base):
        gen = multiply(p, g2, NormalForm(((t, 1),)), invert(p, g2))
        if not element_in_parabolic(p, gen, P1):
            return False
    return True


def intersect(p: Presentation, P1: ParabolicSubgroup, P2: ParabolicSubgroup) -> ParabolicSubgroup:
    """``P1 ∩ P2`` as a canonical parabolic.

    Conjugate so that ``P2 = G_T``; write the conjugator of ``P1`` as
    ``h * g'`` with ``h ∈ G_T`` maximal, trim ``G_S``-suffixes off ``g'``,
    and keep the part of ``S`` commuting with all of ``g'``.
    """
    S, T = P1.base_mask, P2.base_mask
    g = multiply(p, invert(p, P2.conjugator), P1.conjugator)
    h, rest = drop_front(p, g, T)
    rest, _ = drop_back(p, rest, S)
    q = S & p.graph.link_mask(support_mask(rest))
    return canonicalize(p, multiply(p, P2.conjugator, h), from_mask(q & T))


def normalizer(p: Presentation, P: ParabolicSubgroup) -> ParabolicSubgroup:
    if not P.base:
        raise ParabolicError("the normalizer of the trivial parabolic is the whole group")
    mask = P.base_mask
    return canonicalize(p, P.conjugator, from_mask(mask | p.graph.link_mask(mask)))


class SearchStatus(Enum):
    FOUND = "found"
    IMPOSSIBLE = "impossible"
    BUDGET = "budget"


@dataclass(frozen=True)
class ConjugationSearch:
    """Outcome of :func:`conjugate_into_full`.

    ``conjugator`` is set only with status FOUND and is always verified.
    IMPOSSIBLE means the search space was exhausted; BUDGET means the
    conjugator-length budget cut the search short.
    """

    status: SearchStatus
    conjugator: NormalForm | None = None


def _total(xs: Sequence[NormalForm]) -> int:
    return sum(len(x) for x in xs)


def _support_of(xs: Sequence[NormalForm]) -> int:
    mask = 0
    for x in xs:
        mask |= support_mask(x)
    return mask


def _moves(p: Presentation, xs: Sequence[NormalForm]) -> list[NormalForm]:
    """Single syllables ``s`` worth conjugating by (``X -> s^-1 X s``): rotations of some element."""
    seen = set()
    out = []
    for x in xs:
        for v, e in front_syllables(p, x):
            cand = (v, e)
            if cand not in seen:
                seen.add(cand)
                out.append(NormalForm((cand,)))
        for v, e in back_syllables(p, x):
            cand = (v, p.normalize_exponent(v, -e))
            if cand not in seen:
                seen.add(cand)
                out.append(NormalForm((cand,)))
    out.sort(key=lambda s: s.syllables)
    return out


@dataclass
class _Exploration:
    conjugators: list[NormalForm]
    images: list[tuple[NormalForm, ...]]
    exhausted: bool


def _explore(p: Presentation, xs: Sequence[NormalForm], budget: int) -> _Exploration:
    """Greedy descent on total length, then bounded search over non-increasing rotations.

    Returns every visited state in visiting order (deterministic) together
    with whether the search closed without touching the budget.
    """
    current = tuple(xs)
    g = IDENTITY
    while True:
        best = None
        for s in _moves(p, current):
            cand = tuple(conjugate(p, x, s) for x in current)
            if _total(cand) < _total(current) and (best is None or _total(cand) < _total(best[1])):
                best = (s, cand)
        if best is None:
            break
        g = multiply(p, g, best[0])
        current = best[1]

    key = tuple(sorted(current))
    seen = {key}
    conjugators = [g]
    images = [current]
    frontier = [(g, current)]
    exhausted = True
    floor = _total(current)
    for depth in range(budget):
        nxt = []
        for g0, state in frontier:
            for s in _moves(p, state):
                cand = tuple(conjugate(p, x, s) for x in state)
                if _total(cand) > floor:
                    continue
                k = tuple(sorted(cand))
                if k in seen:
                    continue
                seen.add(k)
                g1 = multiply(p, g0, s)
                conjugators.append(g1)
                images.append(cand)
                nxt.append((g1, cand))
        if not nxt:
            break
        frontier = nxt
    else:
        exhausted = not frontier
    return _Exploration(conjugators, images, exhausted)


def default_budget(xs: Sequence[NormalForm]) -> int:
    return _total(xs) + 4


def conjugate_into_full(
    p: Presentation, xs: Iterable[NormalForm], base: Iterable[int], budget: int | None = None
) -> ConjugationSearch:
    """Find ``g`` with ``g^-1 x g ∈ G_S`` for every ``x``."""
    xs = list(xs)
    mask = p.graph.check_mask(to_mask(base))
    if budget is None:
        budget = default_budget(xs)
    ex = _explore(p, xs, budget)
    for g, imgs in zip(ex.conjugators, ex.images):
        if _support_of(imgs) & ~mask == 0:
            assert all(support_mask(conjugate(p, x, g)) & ~mask == 0 for x in xs)
            return ConjugationSearch(SearchStatus.FOUND, g)
    return ConjugationSearch(SearchStatus.IMPOSSIBLE if ex.exhausted else SearchStatus.BUDGET)


@dataclass(frozen=True)
class Closure:
    parabolic: ParabolicSubgroup
    exact: bool


def closure(p: Presentation, xs: Iterable[NormalForm], budget: int | None = None) -> Closure:
    """Parabolic closure with an ``exact`` flag (False when the budget was hit)."""
    xs = [x for x in xs if x]
    if not xs:
        return Closure(TRIVIAL, True)
    if budget is None:
        budget = default_budget(xs)
    ex = _explore(p, xs, budget)
    def rank(item: tuple[NormalForm, tuple[NormalForm, ...]]) -> tuple[int, list[int]]:
        sup = _support_of(item[1])
        return bin(sup).count("1"), sorted(from_mask(sup))

    g, imgs = min(zip(ex.conjugators, ex.images), key=rank)
    return Closure(canonicalize(p, g, from_mask(_support_of(imgs))), ex.exhausted)


def parabolic_closure(p: Presentation, xs: Iterable[NormalForm], budget: int | None = None) -> ParabolicSubgroup:
    return closure(p, xs, budget).parabolic


def essential_support(p: Presentation, xs: Iterable[NormalForm], budget: int | None = None) -> frozenset[int]:
    return parabolic_closure(p, xs, budget).base
