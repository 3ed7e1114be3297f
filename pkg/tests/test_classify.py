from itertools import combinations

from hypothesis import given

from graphprod.classify import (
    ClassifyOptions,
    ContainsNonabelianFree,
    FiniteCyclic,
    FreeAbelian,
    InfiniteCyclic,
    InfiniteDihedral,
    Trivial,
    Unknown,
    abelian_rank,
    classify,
    find_relation,
    is_abelian,
    relation_text,
)
from graphprod.oracle import _relations_by_collision
from graphprod.words import IDENTITY, commute, invert, multiply, order, power

from conftest import presentation_and_elements


def test_is_abelian_examples(path_raag, square):
    assert is_abelian(path_raag.p, [path_raag("a"), path_raag("a^3")])
    assert not is_abelian(path_raag.p, [path_raag("a"), path_raag("c")])
    assert is_abelian(square.p, [square("a*b"), square("b*a")])


def test_abelian_rank_examples(square):
    p = square.p
    assert abelian_rank(p, [square("a^2"), square("a^3")]).rank == 1
    assert abelian_rank(p, [square("a"), square("b")]).rank == 2
    assert abelian_rank(p, [square("a"), square("b"), square("a*b")]).rank == 2
    # relation (6, 5) lies inside the starting coefficient bound
    got = abelian_rank(p, [square("a^5"), square("a^-6")])
    assert got.rank == 1 and not got.bound_limited
    # relation (11, 10) is only found after the bound doubles
    got = abelian_rank(p, [square("a^10"), square("a^-11")], bound=8)
    assert got.rank == 1


def test_classify_examples(path_raag, square, dihedral, path_z3):
    v = classify(path_raag.p, [path_raag("a"), path_raag("c")])
    assert v == ContainsNonabelianFree((path_raag("a"), path_raag("c")), True)
    assert classify(square.p, [square("a"), square("b")]) == FreeAbelian(2)
    v = classify(dihedral.p, [dihedral("u"), dihedral("w")])
    assert isinstance(v, InfiniteDihedral)
    assert classify(path_raag.p, []) == Trivial()
    assert classify(path_raag.p, [IDENTITY]) == Trivial()
    assert classify(path_z3.p, [path_z3("v2*v1*v2^-1")]) == FiniteCyclic(3)
    assert classify(dihedral.p, [dihedral("u*w")]) == InfiniteCyclic()
    assert classify(square.p, [square("a*c*a^-1")]) == FreeAbelian(1)


def test_two_generator_example(two_gen):
    p = two_gen.p
    x, y = two_gen("a*c"), two_gen("b*c")
    assert power(p, x, 3) == power(p, y, 3) == two_gen("c^3")
    assert commute(p, two_gen("c^3"), x) and commute(p, two_gen("c^3"), y)
    v = classify(p, [x, y])
    assert not (isinstance(v, ContainsNonabelianFree) and v.free_certified)
    rel = find_relation(p, x, y, 6)
    assert rel is not None and len(rel) == 6
    gens = (x, invert(p, x), y, invert(p, y))
    assert multiply(p, *(gens[c] for c in rel)) == IDENTITY
    assert relation_text((0, 0, 0, 3, 3, 3)) == "x*x*x*y^-1*y^-1*y^-1"
    assert find_relation(p, x, y, 5) is None


def test_unknown_records_bounds(two_gen):
    v = classify(two_gen.p, [two_gen("a*c"), two_gen("b*c")], ClassifyOptions(pair_length=1, relation_length=6))
    assert isinstance(v, Unknown)
    assert v.bounds == {"pair_length": 1, "relation_length": 6}


def test_mixed_torsion_abelian_is_unknown(path_z3):
    v = classify(path_z3.p, [path_z3("v1*v2"), path_z3("v2")])
    assert isinstance(v, Unknown) and v.bounds["free_rank"] == 1


@given(presentation_and_elements(count=3, max_length=4))
def test_verdicts_are_sound(pe):
    p, xs = pe
    xs = [x for x in xs if x]
    v = classify(p, xs)
    if isinstance(v, FreeAbelian):
        assert is_abelian(p, xs) and 1 <= v.rank <= p.vertex_count
    elif isinstance(v, ContainsNonabelianFree):
        assert not commute(p, *v.witness)
        if v.free_certified:
            assert not _relations_by_collision(p, *v.witness)
        else:
            assert find_relation(p, *v.witness, 6) is None
    elif isinstance(v, InfiniteDihedral):
        a, b = v.involutions
        assert order(p, a) == order(p, b) == 2 and order(p, multiply(p, a, b)) is None
    elif isinstance(v, Trivial):
        assert not xs
    elif isinstance(v, FiniteCyclic):
        assert is_abelian(p, xs) and order(p, xs[0]) == v.order


@given(presentation_and_elements(count=2, max_length=3, orders=(None,), min_vertices=2))
def test_find_relation_matches_exhaustive_search(pe):
    p, (u, v) = pe
    if not u or not v:
        return
    rel = find_relation(p, u, v, 6)
    brute = None
    gens = (u, invert(p, u), v, invert(p, v))
    stack = [((), IDENTITY)]
    while stack:
        word, val = stack.pop()
        if word and not val and (brute is None or len(word) < len(brute)):
            brute = word
        if len(word) < 6:
            for c in range(4):
                if not word or word[-1] != c ^ 1:
                    stack.append((word + (c,), multiply(p, val, gens[c])))
    assert (rel is None) == (brute is None)
    if rel is not None:
        assert len(rel) == len(brute)
