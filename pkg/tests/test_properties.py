from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import labelled_trees
from opetopes.calculus import fill, glue, source, sources, target
from opetopes.opetope import canonical_form, enumerate_opetopes, equals, glob_over, suspend, validate_opetope
from opetopes.trees import canonical_code, find_isomorphism
from opetopes.xmlformat import parse, serialize

TREES = [t for n in range(2, 6) for t in labelled_trees(n)]
OPETOPES = [X for n in range(2, 6) for X in enumerate_opetopes(n, 2)]
WITH_DOTS = [X for X in OPETOPES if X.top.dots]


def _relabel(names, data):
    fresh = data.draw(st.permutations([f"v{i}" for i in range(len(names))]))
    return dict(zip(sorted(names), fresh))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(TREES), st.data())
def test_tree_code_ignores_names(t, data):
    u = t.rename(_relabel(t.parent, data))
    assert canonical_code(u) == canonical_code(t)
    m = find_isomorphism(t, u)
    assert m is not None and all(u.parent[m[x]] == (None if p is None else m[p]) for x, p in t.parent.items())


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(OPETOPES), st.data())
def test_opetope_equality_ignores_names(X, data):
    Y = X.rename(_relabel(X.names(), data))
    assert equals(X, Y) and canonical_form(X) == canonical_form(Y)
    # documents leave the base leaf implicit, so keep its name fixed
    Z = X.rename(_relabel(X.names() - X.base.leaves, data))
    assert parse(serialize(Z)) == Z


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(WITH_DOTS), st.data())
def test_glob_is_a_unit_for_glue(R, data):
    f = data.draw(st.sampled_from(sorted(R.top.dots)))
    G = glob_over(source(R, f))
    assert equals(glue(R, f, G), R)
    X = fill(R, f, G)
    assert validate_opetope(X) == [] and equals(target(X), R)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(OPETOPES))
def test_suspension_is_natural(X):
    S = suspend(X)
    assert validate_opetope(S) == []
    assert equals(target(S), suspend(target(X)))
    for s, F in sources(X).items():
        assert equals(source(S, s), suspend(F))
