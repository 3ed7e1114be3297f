"""Tits-alternative verdicts for finitely generated subgroups.

The pipeline first compresses the generators into a graph product where
they are not contained in any proper parabolic subgroup and project
nontrivially onto every vertex group, then decides between abelian,
dihedral and free-subgroup outcomes.  Nothing here constructs a map onto a
free group; a free verdict carries a non-commuting witness pair instead.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from graphprod.kernel import Compression, compress
from graphprod.words import (
    IDENTITY,
    NormalForm,
    Presentation,
    commute,
    invert,
    multiply,
    order,
    support_mask,
)


@dataclass(frozen=True)
class Trivial:
    name = "Trivial"


@dataclass(frozen=True)
class FiniteCyclic:
    order: int
    name = "FiniteCyclic"


@dataclass(frozen=True)
class InfiniteCyclic:
    name = "InfiniteCyclic"


@dataclass(frozen=True)
class FreeAbelian:
    rank: int
    bound_limited: bool = False
    name = "FreeAbelian"


@dataclass(frozen=True)
class InfiniteDihedral:
    involutions: tuple[NormalForm, NormalForm]
    name = "InfiniteDihedral"


@dataclass(frozen=True)
class ContainsNonabelianFree:
    witness: tuple[NormalForm, NormalForm]
    free_certified: bool
    name = "ContainsNonabelianFree"


@dataclass(frozen=True)
class Unknown:
    reason: str
    bounds: dict = field(default_factory=dict, compare=False)
    name = "Unknown"


Verdict = Trivial | FiniteCyclic | InfiniteCyclic | FreeAbelian | InfiniteDihedral | ContainsNonabelianFree | Unknown


def is_abelian(p: Presentation, xs: Sequence[NormalForm]) -> bool:
    return all(commute(p, x, y) for x, y in combinations(xs, 2))


@dataclass(frozen=True)
class AbelianRank:
    rank: int
    bound: int
    bound_limited: bool
    torsion: bool


def _powers(p: Presentation, x: NormalForm, bound: int) -> dict[int, NormalForm]:
    out = {0: IDENTITY}
    up, down = IDENTITY, IDENTITY
    inv = invert(p, x)
    for k in range(1, bound + 1):
        up = multiply(p, up, x)
        down = multiply(p, down, inv)
        out[k], out[-k] = up, down
    return out


def _relations(p: Presentation, xs: Sequence[NormalForm], bound: int) -> list[tuple[int, ...]]:
    """Integer vectors ``n`` with ``|n_i| <= bound`` and ``∏ x_i^{n_i} = 1`` (meet in the middle)."""
    k = len(xs)
    pw = [_powers(p, x, bound) for x in xs]
    half = k // 2
    rng = range(-bound, bound + 1)
    left: dict[NormalForm, list[tuple[int, ...]]] = {}
    for ns in product(rng, repeat=half):
        y = multiply(p, *(pw[i][n] for i, n in enumerate(ns))) if ns else IDENTITY
        left.setdefault(y, []).append(ns)
    rels = []
    for ms in product(rng, repeat=k - half):
        z = multiply(p, *(pw[half + i][m] for i, m in enumerate(ms))) if ms else IDENTITY
        for ns in left.get(invert(p, z), ()):
            vec = ns + ms
            if any(vec):
                rels.append(vec)
    return rels


def _lattice_rank(vectors: list[tuple[int, ...]]) -> int:
    if not vectors:
        return 0
    return int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))


def abelian_rank(
    p: Presentation, xs: Sequence[NormalForm], bound: int = 8, max_doublings: int = 3
) -> AbelianRank:
    """Torsion-free rank of the abelian group ``⟨X⟩`` from its bounded relation lattice.

    The coefficient bound doubles until one doubling leaves the lattice rank
    unchanged; ``bound_limited`` records that the last doubling still moved it.
    """
    xs = [x for x in xs if x]
    torsion = any(order(p, x) is not None for x in xs)
    if not xs:
        return AbelianRank(0, bound, False, torsion)
    b = bound
    r = _lattice_rank(_relations(p, xs, b))
    limited = False
    for _ in range(max_doublings):
        r2 = _lattice_rank(_relations(p, xs, 2 * b))
        b *= 2
        limited = r2 != r
        r = r2
        if not limited:
            break
    return AbelianRank(len(xs) - r, b, limited, torsion)


def _free_reduce(letters: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in letters:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def find_relation(
    p: Presentation, u: NormalForm, v: NormalForm, max_length: int = 6
) -> tuple[int, ...] | None:
    """A nontrivial freely reduced ``{u, v}``-word of length ≤ ``max_length`` equal to 1, if any.

    Letters: 0 = u, 1 = u^-1, 2 = v, 3 = v^-1.  Meet in the middle: a
    relation of length ``L`` splits as ``a * b^-1`` with ``|a| = ceil(L/2)``
    and ``|b| = floor(L/2)``, and ``a != b`` as free words, so it suffices to
    find two distinct reduced words of length ≤ ``ceil(R/2)`` with the same
    value.  The shortest relation (then lexicographically least) is returned.
    """
    gens = (u, invert(p, u), v, invert(p, v))
    half = (max_length + 1) // 2
    by_value: dict[NormalForm, list[tuple[int, ...]]] = {IDENTITY: [()]}
    layer = [((), IDENTITY)]
    for _ in range(half):
        nxt = []
        for word, value in layer:
            for letter in range(4):
                if word and word[-1] == letter ^ 1:
                    continue
                w2, v2 = word + (letter,), multiply(p, value, gens[letter])
                by_value.setdefault(v2, []).append(w2)
                nxt.append((w2, v2))
        layer = nxt
    best = None
    for words in by_value.values():
        for a, b in combinations(words, 2):
            rel = _free_reduce(a + tuple(c ^ 1 for c in reversed(b)))
            if rel and len(rel) <= max_length and (best is None or (len(rel), rel) < (len(best), best)):
                best = rel
    return best


def relation_text(rel: Sequence[int]) -> str:
    names = ("x", "x^-1", "y", "y^-1")
    return "*".join(names[i] for i in rel)


@dataclass(frozen=True)
class ClassifyOptions:
    exponent_bound: int = 8
    pair_length: int = 6
    relation_length: int = 6
    budget: int | None = None


def _candidates(p: Presentation, xs: Sequence[NormalForm], max_len: int) -> list[NormalForm]:
    gens = []
    for x in xs:
        gens.extend([x, invert(p, x)])
    out = []
    seen = set()
    for g in gens:
        if g not in seen:
            seen.add(g)
            out.append(g)
    for g, h in product(gens, repeat=2):
        y = multiply(p, g, h)
        if y and y not in seen:
            seen.add(y)
            out.append(y)
    return [y for y in out if len(y) <= max_len]


def classify(p: Presentation, xs: Iterable[NormalForm], options: ClassifyOptions | None = None) -> Verdict:
    opts = options or ClassifyOptions()
    original = [x for x in xs if x]
    if not original:
        return Trivial()
    comp: Compression = compress(p, original, opts.budget)
    q = comp.presentation
    ys = comp.images
    # keep generator positions aligned with the originals, drop duplicates
    pairs = []
    seen = set()
    for x, y in zip(original, ys):
        if y and y not in seen:
            seen.add(y)
            pairs.append((x, y))
    if not pairs:
        return Trivial()
    ys = [y for _, y in pairs]
    support = 0
    for y in ys:
        support |= support_mask(y)
    torsion_free = q.torsion_free_on(support)

    if is_abelian(q, ys):
        if torsion_free:
            if len(ys) == 1:
                return FreeAbelian(1)
            ar = abelian_rank(q, ys, opts.exponent_bound)
            return FreeAbelian(ar.rank, ar.bound_limited)
        if len(ys) == 1:
            n = order(q, ys[0])
            return InfiniteCyclic() if n is None else FiniteCyclic(n)
        ar = abelian_rank(q, ys, opts.exponent_bound)
        return Unknown(
            "abelian, torsion on the support",
            {"free_rank": ar.rank, "exponent_bound": ar.bound, "bound_limited": ar.bound_limited},
        )

    witness = None
    for (x1, y1), (x2, y2) in combinations(pairs, 2):
        if not commute(q, y1, y2):
            witness = (x1, x2)
            break
    assert witness is not None

    if torsion_free:
        return ContainsNonabelianFree(witness, True)

    if len(ys) == 2 and all(order(q, y) == 2 for y in ys):
        n = order(q, multiply(q, ys[0], ys[1]))
        if n is None:
            return InfiniteDihedral((pairs[0][0], pairs[1][0]))
        return Unknown(f"finite dihedral of order {2 * n}, not classified further", {"order": 2 * n})

    cands = _candidates(q, ys, opts.pair_length)
    for u, v in combinations(cands, 2):
        if commute(q, u, v):
            continue
        if find_relation(q, u, v, opts.relation_length) is None:
            return ContainsNonabelianFree((_pull_back(p, comp, original, u), _pull_back(p, comp, original, v)), False)
    return Unknown(
        "no relation-free pair found",
        {"pair_length": opts.pair_length, "relation_length": opts.relation_length},
    )


def _pull_back(p: Presentation, comp: Compression, original: Sequence[NormalForm], y: NormalForm) -> NormalForm:
    """An element of ``⟨X⟩`` in the original group mapping to ``y`` (searched among ≤ 2-letter products)."""
    gens = []
    for x in original:
        gens.extend([x, invert(p, x)])
    for g in gens:
        if comp.apply(g) == y:
            return g
    for g, h in product(gens, repeat=2):
        z = multiply(p, g, h)
        if comp.apply(z) == y:
            return z
    raise AssertionError("candidate is not a short product of generators")
