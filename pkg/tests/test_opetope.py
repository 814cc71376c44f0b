from __future__ import annotations

import pytest

from fixtures import example_x, example_z, two_branch
from oracles import planar_trees
from opetopes.calculus import sources, target
from opetopes.opetope import (
    ZoomComplex,
    arrow,
    automorphisms,
    canonical_form,
    canonical_rename,
    composition_tree,
    desuspend,
    drop_over,
    enumerate_opetopes,
    equals,
    from_trees,
    glob_over,
    globe,
    point,
    stable_representative,
    suspend,
    validate_opetope,
)
from opetopes.trees import Tree


def two_opetope(m: int) -> ZoomComplex:
    return enumerate_opetopes(2, m)[-1] if m else drop_over(point())


def test_point_and_arrow():
    assert validate_opetope(point()) == [] and validate_opetope(arrow()) == []
    assert point().dimension == 0 and arrow().dimension == 1


@pytest.mark.parametrize("m", range(4))
def test_two_opetopes_valid(m):
    X = two_opetope(m)
    assert validate_opetope(X) == []
    assert len(X.top.dots) == m


def test_fixtures_valid():
    assert validate_opetope(example_x()) == []
    assert validate_opetope(example_z()) == []


def test_initial_condition_violations():
    X = from_trees([("0", ["*"]), ("1", ["0"]), ("a", ["1", ("b", [])])], [{}, {}, {"1": ("b",)}])
    assert any("G2 must be linear" in v for v in validate_opetope(X))
    X = from_trees([("0", ["*"]), ("1", ["0", "2"])])
    assert validate_opetope(X)


def test_equals_renamed_copy():
    X = example_x()
    m = {n: f"r{n}" for n in X.names()}
    assert equals(X, X.rename(m))
    assert equals(X, canonical_rename(X))
    assert not equals(two_opetope(2), two_opetope(3))


def test_mirror_images_differ():
    g2 = ("s1", [("s2", [("s3", ["1"])])])
    left = from_trees([("0", ["*"]), ("1", ["0"]), g2, ("b", [("a", ["s3"]), ("c", ["s2", "s1"])])])
    right = from_trees([("0", ["*"]), ("1", ["0"]), g2, ("b", [("a", ["s1"]), ("c", ["s3", "s2"])])])
    assert validate_opetope(left) == [] and validate_opetope(right) == []
    assert not equals(left, right)
    assert canonical_form(left) != canonical_form(right)


def _planar_reading(X: ZoomComplex):
    """Read a 3-opetope as a planar tree: siblings ordered along the chain below."""
    g3 = X.tree(3)
    chain = X.constellation(3).expanded
    if not g3.dots:
        return None

    def pos(x):
        return min(chain.depth(y) for y in ([x] if x not in g3.dots or g3.is_null(x) else g3.minimal_below(x)))

    def read(x):
        if x not in g3.dots:
            return None
        return tuple(read(c) for c in sorted(g3.children(x), key=pos))

    return read(g3.root)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_three_opetopes_are_planar_trees(d):
    found = enumerate_opetopes(3, d)
    images = [_planar_reading(X) for X in found]
    assert len(set(images)) == len(images)
    assert set(images) == planar_trees(d, d)


def test_enumeration_counts():
    assert len(enumerate_opetopes(0, 3)) == 1
    assert len(enumerate_opetopes(1, 3)) == 1
    for m in range(7):
        assert len(enumerate_opetopes(2, m)) == m + 1


def test_enumeration_outputs_valid_and_distinct():
    found = enumerate_opetopes(4, 2)
    forms = {canonical_form(X) for X in found}
    assert len(forms) == len(found)
    assert all(validate_opetope(X) == [] for X in found)


def test_glob_over():
    g = glob_over(arrow())
    assert equals(g, two_opetope(1))
    for F in enumerate_opetopes(3, 3)[:60]:
        G = glob_over(F)
        assert validate_opetope(G) == []
        assert equals(target(G), F)
        (only,) = sources(G).values()
        assert equals(only, F)


def test_drop_over():
    assert equals(drop_over(point()), two_opetope(0))
    d3 = drop_over(arrow())
    assert validate_opetope(d3) == [] and not d3.top.dots
    assert len([X for X in enumerate_opetopes(3, 3) if not X.top.dots]) == 1
    for G in enumerate_opetopes(2, 3) + enumerate_opetopes(3, 2):
        D = drop_over(G)
        assert sources(D) == {}
        t = target(D)
        assert len(sources(t)) == 1 and equals(t, glob_over(G))


def test_composition_trees():
    assert composition_tree(example_x()) == Tree.from_nested(
        ("13", [("14", ["10", "8"]), ("15", ["11", "9"]), ("16", []), "12"]))
    ct = composition_tree(globe(3))
    assert len(ct.dots) == 1 and ct.null_dots == frozenset()
    assert composition_tree(drop_over(arrow())).is_unit


def test_suspension_basics():
    assert equals(suspend(point()), arrow())
    s = suspend(arrow())
    assert len(s.tree(2).dots) == 1
    assert equals(s, glob_over(arrow()))
    for X in [example_x(), example_z(), two_opetope(3)]:
        S = suspend(X)
        assert validate_opetope(S) == [] and S.dimension == X.dimension + 1
        assert equals(desuspend(S), X)
        assert equals(stable_representative(S), stable_representative(X))


def test_stable_classes():
    assert stable_representative(two_opetope(3)).dimension == 2
    assert desuspend(two_opetope(3)) is None
    cur = point()
    for n in range(5):
        assert stable_representative(cur).dimension == 0
        assert equals(cur, globe(n))
        cur = suspend(cur)


def test_rigidity():
    for n in range(6):
        for X in enumerate_opetopes(n, 2):
            assert len(automorphisms(X)) == 1
    for X in [example_x(), example_z()]:
        assert len(automorphisms(X)) == 1


def test_two_branch_involution():
    auts = automorphisms(two_branch())
    assert len(auts) == 2
    # one map per tree: the base, then the nesting tree
    swap = [a for a in auts if a[1]["u"] == "v"]
    assert swap and swap[0][0]["ea"] == "eb"
