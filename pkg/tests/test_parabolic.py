from itertools import combinations

import pytest
from hypothesis import given

from graphprod.graph import from_mask
from graphprod.oracle import enumerate_ball
from graphprod.parabolic import (
    TRIVIAL,
    ParabolicError,
    SearchStatus,
    canonicalize,
    closure,
    conjugate_into_full,
    element_in_parabolic,
    essential_support,
    full,
    intersect,
    normalizer,
    parabolic_closure,
    parabolic_contains,
    parabolic_equal,
    retraction,
)
from graphprod.words import IDENTITY, conjugate, invert, multiply, reduce, support, support_mask

from conftest import presentation_and_elements

A, B, C = 0, 1, 2  # path a - b - c


def test_retraction_examples(path_raag, two_gen):
    p = path_raag.p
    assert retraction(p, set(), path_raag("a*b*c")) == IDENTITY
    assert retraction(two_gen.p, {0}, two_gen("a*c*a*c*a*c")) == IDENTITY
    assert retraction(p, {A, C}, path_raag("a*b*c*b^-1")) == path_raag("a*c")


def test_retraction_is_a_homomorphism_on_a_ball(path_z3):
    p = path_z3.p
    ball = list(enumerate_ball(p, 2, 1))
    for S in ({0}, {0, 2}, {1}):
        for x in ball:
            for y in ball:
                assert retraction(p, S, multiply(p, x, y)) == multiply(p, retraction(p, S, x), retraction(p, S, y))


def test_canonicalize_examples(path_raag):
    p = path_raag.p
    assert canonicalize(p, path_raag("a"), {A}) == full(p, {A})
    assert canonicalize(p, path_raag("c"), {A}).conjugator == path_raag("c")
    assert canonicalize(p, path_raag("c*b"), {A}) == canonicalize(p, path_raag("c"), {A})


def test_equality_and_containment(path_raag):
    p = path_raag.p
    Ga, Gab = full(p, {A}), full(p, {A, B})
    cGa = canonicalize(p, path_raag("c"), {A})
    assert parabolic_equal(Ga, Ga)
    assert parabolic_contains(p, Gab, Ga) and not parabolic_contains(p, Ga, Gab)
    assert not parabolic_contains(p, Ga, cGa) and not parabolic_contains(p, cGa, Ga)


def test_membership_examples(path_raag):
    p = path_raag.p
    Ga = full(p, {A})
    assert element_in_parabolic(p, IDENTITY, Ga)
    assert element_in_parabolic(p, path_raag("a^2"), Ga)
    assert not element_in_parabolic(p, path_raag("c"), Ga)
    assert element_in_parabolic(p, path_raag("c*a*c^-1"), canonicalize(p, path_raag("c"), {A}))


def test_intersection_examples(path_raag, square):
    p = path_raag.p
    assert intersect(p, full(p, {A, B}), full(p, {B, C})) == full(p, {B})
    cGa = canonicalize(p, path_raag("c"), {A})
    assert intersect(p, cGa, full(p, {A, B})) == TRIVIAL
    assert intersect(p, cGa, cGa) == cGa
    q = square.p
    P = canonicalize(q, square("c*a"), {1, 2})
    assert intersect(q, P, P) == P


def test_normalizer_examples(path_raag):
    p = path_raag.p
    assert normalizer(p, full(p, {B})) == full(p, {A, B, C})
    assert normalizer(p, full(p, {A})) == full(p, {A, B})
    assert normalizer(p, canonicalize(p, path_raag("c"), {A})) == canonicalize(p, path_raag("c"), {A, B})
    with pytest.raises(ParabolicError):
        normalizer(p, TRIVIAL)


def test_conjugate_into_full_examples(path_raag):
    p = path_raag.p
    got = conjugate_into_full(p, [path_raag("a")], {A})
    assert got.status is SearchStatus.FOUND and got.conjugator == IDENTITY
    got = conjugate_into_full(p, [path_raag("c*a^2*c^-1")], {A})
    assert got.status is SearchStatus.FOUND and got.conjugator == path_raag("c")
    got = conjugate_into_full(p, [path_raag("a"), path_raag("c")], {A})
    assert got.status is SearchStatus.IMPOSSIBLE and got.conjugator is None


def test_closure_examples(path_raag, square):
    p = path_raag.p
    assert parabolic_closure(p, [IDENTITY]) == TRIVIAL
    assert parabolic_closure(p, [path_raag("c*a*c^-1")]) == canonicalize(p, path_raag("c"), {A})
    assert parabolic_closure(square.p, [square("a*b")]) == full(square.p, {0, 1})
    assert essential_support(p, [path_raag("c*a*c^-1")]) == {A}
    assert essential_support(p, [path_raag("a"), path_raag("c")]) == {A, C}
    assert essential_support(p, []) == frozenset()


@given(presentation_and_elements(count=3, max_length=4))
def test_closure_properties(pe):
    p, xs = pe
    cl = closure(p, xs)
    P = cl.parabolic
    assert all(element_in_parabolic(p, x, P) for x in xs)
    sup = 0
    for x in xs:
        sup |= support_mask(x)
    assert P.base <= from_mask(sup)
    # idempotence on the generators of P
    gens = [conjugate(p, reduce(p, [(s, 1)]), invert(p, P.conjugator)) for s in sorted(P.base)]
    assert parabolic_closure(p, gens) == P
    # monotonicity
    assert parabolic_contains(p, P, parabolic_closure(p, xs[:1]))
    # minimality: no smaller vertex set admits a conjugator
    for k in range(len(P.base)):
        for S in combinations(range(p.vertex_count), k):
            assert conjugate_into_full(p, xs, S).status is not SearchStatus.FOUND


@given(presentation_and_elements(count=2, max_length=4))
def test_canonical_conjugator_is_the_shortest_coset_member(pe):
    p, (g, _) = pe
    for S in ({0}, set(range(p.vertex_count))):
        P = canonicalize(p, g, S)
        N = P.base_mask | p.graph.link_mask(P.base_mask)
        coset_ball = [h for h in enumerate_ball(p, 2, 1) if support_mask(h) & ~N == 0]
        lengths = {multiply(p, P.conjugator, h): len(multiply(p, P.conjugator, h)) for h in coset_ball}
        shortest = min(lengths.values())
        assert len(P.conjugator) == shortest
        assert [x for x, n in lengths.items() if n == shortest] == [P.conjugator]
        assert canonicalize(p, multiply(p, g, coset_ball[-1]), S) == P


@given(presentation_and_elements(count=3, max_length=3))
def test_esupp_projection_is_injective_on_small_balls(pe):
    p, xs = pe
    xs = [x for x in xs if x]
    E = essential_support(p, xs)
    letters = [y for x in xs for y in (x, invert(p, x))]
    seen = {}
    frontier = [IDENTITY]
    for _ in range(2):
        frontier = [multiply(p, u, s) for u in frontier for s in letters]
        for z in frontier:
            img = retraction(p, E, z)
            assert seen.setdefault(img, z) == z
    assert E <= frozenset().union(*(support(x) for x in xs)) if xs else E == frozenset()
