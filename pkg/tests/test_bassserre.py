import pytest
from hypothesis import given

from graphprod.bassserre import (
    Elliptic,
    Hyperbolic,
    SplittingError,
    alternating_form,
    amalgam_cyclic_reduce,
    classify_action,
    split_at,
)
from graphprod.oracle import CosetTree
from graphprod.parabolic import SearchStatus, conjugate_into_full
from graphprod.words import IDENTITY, Presentation, conjugate, invert, multiply, power
from graphprod.graph import SimplicialGraph

from conftest import presentation_and_elements


def test_split_examples(path_raag, dihedral):
    p = path_raag.p
    s = split_at(p, 1)
    assert s.A == {0, 2} and s.C == {0, 2} and s.B == {0, 1, 2} and s.degenerate
    s = split_at(p, 0)
    assert s.A == {1, 2} and s.C == {1} and s.B == {0, 1} and not s.degenerate
    s = split_at(dihedral.p, 0)
    assert s.C == frozenset() and not s.degenerate
    with pytest.raises(SplittingError):
        split_at(Presentation(SimplicialGraph.edgeless(1), (None,)), 0)
    with pytest.raises(SplittingError):
        classify_action(split_at(p, 1), path_raag("a"))


def test_alternating_form_examples(dihedral, path_raag):
    s = split_at(dihedral.p, 0)
    assert len(alternating_form(s, dihedral("u*w*u"))) == 3
    assert len(alternating_form(s, dihedral("w"))) == 1
    s = split_at(path_raag.p, 0)
    form = alternating_form(s, path_raag("b*c"))
    assert len(form) <= 1


def test_action_examples(dihedral, path_raag):
    s = split_at(dihedral.p, 0)
    assert classify_action(s, dihedral("u*w")) == Hyperbolic(2)
    assert classify_action(s, dihedral("u*w*u")) == Elliptic()
    assert classify_action(s, dihedral("w")) == Elliptic()
    assert str(Hyperbolic(2)) == "hyperbolic 2" and str(Elliptic()) == "elliptic"
    s = split_at(path_raag.p, 0)
    assert classify_action(s, path_raag("c*a*c^-1*a")) == Hyperbolic(4)


splittable = presentation_and_elements(count=2, max_length=6, min_vertices=2, max_vertices=4)


def _split(p):
    for v in range(p.vertex_count):
        s = split_at(p, v)
        if not s.degenerate:
            return s
    return None


@given(splittable)
def test_forms_multiply_back_and_alternate(pe):
    p, (x, _) = pe
    s = _split(p)
    if s is None:
        return
    form = alternating_form(s, x)
    assert multiply(p, form.prefix, *(f for _, f in form.factors)) == x
    sides = [side for side, _ in form.factors]
    assert all(a != b for a, b in zip(sides, sides[1:]))
    assert all(s.side(f) not in ("C", None) for _, f in form.factors)
    assert s.side(form.prefix) in ("C",) or form.prefix == IDENTITY
    h, core = amalgam_cyclic_reduce(s, x)
    assert len(core) <= 1 or len(core) % 2 == 0
    assert multiply(p, h, core.prefix, *(f for _, f in core.factors), invert(p, h)) == x


@given(splittable)
def test_action_invariants(pe):
    p, (x, k) = pe
    s = _split(p)
    if s is None:
        return
    act = classify_action(s, x)
    assert classify_action(s, conjugate(p, x, k)) == act
    elliptic = any(
        conjugate_into_full(p, [x], side, 8).status is SearchStatus.FOUND for side in (s.A, s.B)
    )
    assert elliptic == isinstance(act, Elliptic)
    tree = CosetTree(p, s.v)
    assert tree.translation_length(x) == (act.translation_length if isinstance(act, Hyperbolic) else 0)
    if isinstance(act, Hyperbolic) and len(x) <= 3:
        assert classify_action(s, power(p, x, 2)) == Hyperbolic(2 * act.translation_length)
