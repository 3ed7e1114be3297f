import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphprod.fixtures import fixture
from graphprod.graph import SimplicialGraph
from graphprod.oracle import oracle_normal_form
from graphprod.words import (
    IDENTITY,
    CyclicGroupSpec,
    NormalForm,
    Presentation,
    WordError,
    commute,
    conjugate,
    cyclically_reduce,
    first_vertices,
    invert,
    last_vertices,
    length,
    multiply,
    order,
    power,
    reduce,
    support,
    word_text,
)

from conftest import presentation_and_elements, presentation_and_words


def test_reduce_examples(two_gen, path_raag):
    assert reduce(two_gen.p, []) == IDENTITY
    assert two_gen("a*c*a*c*a*c") == two_gen("c^3")
    a, b, c = 0, 1, 2
    assert reduce(path_raag.p, [(b, 1), (a, 1), (b, -1), (c, 1)]).syllables == ((a, 1), (c, 1))


def test_reduce_rejects_bad_input(path_raag):
    with pytest.raises(WordError):
        reduce(path_raag.p, [(7, 1)])
    with pytest.raises(WordError):
        CyclicGroupSpec(1)


def test_multiply_examples(path_z3, path_raag):
    x = path_raag("a*c*b^2")
    assert multiply(path_raag.p, x, invert(path_raag.p, x)) == IDENTITY
    assert multiply(path_raag.p, x, IDENTITY) == x
    a2 = path_z3("v1^2")
    assert multiply(path_z3.p, a2, a2) == path_z3("v1")


def test_invert_examples(path_z3, path_raag):
    assert invert(path_raag.p, IDENTITY) == IDENTITY
    assert invert(path_raag.p, path_raag("a*c")) == path_raag("c^-1*a^-1")
    assert invert(path_z3.p, path_z3("v1^2")) == path_z3("v1")


def test_vertex_sets(path_raag, square):
    p = path_raag.p
    assert length(IDENTITY) == 0 and support(IDENTITY) == first_vertices(p, IDENTITY) == frozenset()
    ac = path_raag("a*c")
    assert first_vertices(p, ac) == {0} and last_vertices(p, ac) == {2}
    ab = square("a*b")
    assert first_vertices(square.p, ab) == last_vertices(square.p, ab) == {0, 1}


def test_cyclic_reduction_examples(path_raag):
    p = path_raag.p
    h, core = cyclically_reduce(p, path_raag("c*a*c^-1"))
    assert h == path_raag("c") and core == path_raag("a")
    h, core = cyclically_reduce(p, path_raag("a*c"))
    assert h == IDENTITY and core == path_raag("a*c")


def test_order_examples(path_z3, dihedral):
    p = path_z3.p
    assert order(p, IDENTITY) == 1
    assert order(p, path_z3("v1")) == 3
    assert order(p, path_z3("v3*v1*v3^-1")) == 3
    assert order(dihedral.p, dihedral("u*w")) is None


def test_word_text(path_z3):
    assert word_text(path_z3.p, path_z3("v1^-1*v3^2").syllables) == "v1^2*v3^2"
    assert word_text(path_z3.p, ()) == "1"


# frozen outputs of the exhaustive rewriting oracle
@pytest.mark.parametrize(
    "spec, text, expected",
    [
        ("square-raag", "c*a*d*b^-1*a^-1", "c*d*b^-1"),
        ("square-racg", "a*c*b*d*c*a*b", "b*d*b"),
        ("path-z3", "v3*v1*v2^2*v1*v3^-1", "v2^2*v3*v1^2*v3^-1"),
        ("two-generator", "b*a*c^-1*a^2*b^2", "c^-1"),
    ],
)
def test_frozen_oracle_normal_forms(spec, text, expected):
    from graphprod.frontend import parse_word

    p = fixture(spec)
    w = parse_word(p, text)
    got = reduce(p, w)
    assert word_text(p, got.syllables) == expected
    assert got.syllables == oracle_normal_form(p, w)


@given(presentation_and_words(count=1))
def test_matches_rewriting_oracle(pw):
    p, (w,) = pw
    assert reduce(p, w).syllables == oracle_normal_form(p, w)


@given(presentation_and_words(count=3))
def test_congruence_and_idempotence(pw):
    p, (w1, w2, u) = pw
    x = reduce(p, w1)
    assert reduce(p, x.syllables) == x
    assert reduce(p, w1 + u) == multiply(p, x, reduce(p, u))
    if reduce(p, w1) == reduce(p, w2):
        assert reduce(p, w1 + u) == reduce(p, w2 + u)


@given(presentation_and_elements(count=1), st.randoms(use_true_random=False))
def test_shuffles_canonicalize_identically(pe, rnd):
    p, (x,) = pe
    syl = list(x.syllables)
    for _ in range(20):
        if len(syl) < 2:
            break
        i = rnd.randrange(len(syl) - 1)
        if p.commute(syl[i][0], syl[i + 1][0]):
            syl[i], syl[i + 1] = syl[i + 1], syl[i]
    assert reduce(p, syl) == x


@given(presentation_and_elements(count=2))
def test_fv_lv_duality_and_order(pe):
    p, (x, k) = pe
    assert first_vertices(p, invert(p, x)) == last_vertices(p, x)
    n = order(p, x)
    assert order(p, conjugate(p, x, k)) == n
    if n is not None:
        assert power(p, x, n) == IDENTITY


@given(presentation_and_elements(count=1, max_length=8))
def test_cyclic_reduction_roundtrip(pe):
    p, (x,) = pe
    h, core = cyclically_reduce(p, x)
    assert multiply(p, h, core, invert(p, h)) == x
    assert cyclically_reduce(p, core) == (IDENTITY, core)


def test_cyclic_reduction_exhaustive_small():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randint(1, 4)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
        p = Presentation(SimplicialGraph.from_edges(n, edges), tuple(rng.choice((2, 3, None)) for _ in range(n)))
        x = reduce(p, [(rng.randrange(n), rng.choice((-2, -1, 1, 2))) for _ in range(rng.randint(0, 8))])
        h, core = cyclically_reduce(p, x)
        assert multiply(p, h, core, invert(p, h)) == x


def test_commute(square):
    assert commute(square.p, square("a"), square("b*d"))
    assert not commute(square.p, square("a"), square("c"))


def test_normalform_ordering():
    assert NormalForm(((0, 1),)) < NormalForm(((0, 1), (1, 1)))
