from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import (
    example_x,
    example_z,
    glue_f,
    glue_fill_top,
    glue_r,
    glue_s,
    glue_t,
    source_13,
    source_14,
    source_15,
    source_16,
    z_source_o,
    z_source_w,
)
from opetopes.calculus import (
    Recipe,
    compose_recipe,
    contract_sphere,
    draw_sphere,
    erase_sphere,
    facet_of_facet_multiplicities,
    facet_pairs,
    fill,
    glue,
    restrict_to_sphere,
    source,
    sources,
    target,
)
from opetopes.errors import OpetopeError
from opetopes.opetope import (
    arrow,
    canonical_form,
    drop_over,
    enumerate_opetopes,
    equals,
    from_trees,
    glob_over,
    point,
    suspend,
    validate_opetope,
)
from opetopes.trees import Tree, find_isomorphism

_POOL = [X for n in range(2, 6) for X in enumerate_opetopes(n, 2)]


def _by_target(pool):
    out: dict = {}
    for S in pool:
        out.setdefault(canonical_form(target(S)), []).append(S)
    return out


# sphere operations

def _nested(k):
    parent = {"1": f"s{k - 1}"} if k else {"1": None}
    for i in range(1, k):
        parent[f"s{i}"] = f"s{i - 1}"
    if k:
        parent["s0"] = None
    return from_trees([("0", ["*"]), Tree({"0": "1", "1": None}, ["1"]), Tree(parent, [f"s{i}" for i in range(k)])])


def test_erase_inner_sphere():
    X = _nested(2)
    assert equals(erase_sphere(X, 2, "s1"), _nested(1))
    with pytest.raises(OpetopeError, match="outer"):
        erase_sphere(X, 2, "s0")


def test_draw_and_erase_inverse():
    X = _nested(0)
    Y = draw_sphere(X, 2, "1", name="s0")
    assert equals(Y, _nested(1))
    assert equals(erase_sphere(draw_sphere(_nested(2), 2, "s1", "t"), 2, "t"), _nested(2))
    Z = example_x()
    assert equals(erase_sphere(draw_sphere(Z, 4, "12", "new"), 4, "new"), Z.truncate(4))


def test_erase_leaves_lower_levels():
    X = example_x()
    Y = erase_sphere(erase_sphere(X, 4, "10"), 4, "11")
    for k in range(4):
        assert Y.tree(k) == X.tree(k)
    assert Y.tree(4).dots == {"8", "9", "12"}


def test_erase_only_null_sphere_inside():
    # erasing the one null-sphere inside a sphere leaves that sphere empty in its place
    X = example_z()
    Y = draw_sphere(X, 5, "w", "t")
    Z = erase_sphere(Y, 5, "w")
    assert validate_opetope(Z) == []
    assert Z.whites(5) == {"a": ("t",)}


def test_contract_simple():
    Y = contract_sphere(_nested(1), 2, "s0")
    assert equals(Y, _nested(0))


def test_contract_renames_below():
    X = example_x()
    Y = contract_sphere(X, 4, "12")
    assert Y.tree(3) == Tree.from_nested(("5", [("12", ["2", "3"]), "4"]))
    assert "7" not in Y.names() and "6" not in Y.names()
    assert Y.tree(4) == Tree.from_nested(("8", [("10", []), ("9", [("11", ["5"]), "12"])]))


def test_restrict():
    X = example_x()
    assert equals(restrict_to_sphere(X, 5, "13"), X)
    Y = restrict_to_sphere(X, 5, "14")
    assert Y.tree(5) == Tree.from_nested(("14", ["8", "10"]))


# faces

def test_sources_of_worked_example():
    S = sources(example_x())
    assert sorted(S) == ["13", "14", "15", "16"]
    for k, fx in [("13", source_13), ("14", source_14), ("15", source_15), ("16", source_16)]:
        assert equals(S[k], fx())
        assert validate_opetope(S[k]) == []
    assert equals(target(example_x()), example_x().truncate(4))


def test_faces_of_z():
    S = sources(example_z())
    assert sorted(S) == ["o", "w"]
    assert equals(S["o"], z_source_o()) and equals(S["w"], z_source_w())
    # the null-sphere gives a drop
    assert not S["w"].top.dots


def test_source_names_follow_parent():
    S16 = sources(example_x())["16"]
    assert S16.top == Tree.from_nested("12")
    assert S16.tree(3) == Tree.from_nested(("12", ["2", "3"]))


def test_target_examples():
    assert equals(target(arrow()), point())
    for F in enumerate_opetopes(3, 2):
        G = glob_over(F)
        assert equals(target(G), F)
        assert equals(source(G, G.top.root), target(G))
        t = target(drop_over(F))
        assert len(t.top.dots) == 1 and len(sources(t)) == 1


def test_three_opetope_sources_are_bouquets():
    # a dot of the planar tree with k inputs has the 2-opetope with k spheres as source
    for X in enumerate_opetopes(3, 3):
        g3 = X.tree(3)
        for s, F in sources(X).items():
            inputs = [c for c in g3.children(s)]
            assert len(F.top.dots) == len(inputs)


def test_unknown_sphere():
    with pytest.raises(OpetopeError, match="unknown sphere"):
        source(example_x(), "99")


# gluing and filling

def test_glue_running_example():
    R, S = glue_r(), glue_s()
    assert equals(source(R, "f"), glue_f()) and equals(target(S), glue_f())
    T = glue(R, "f", S)
    assert equals(T, glue_t())
    # four spheres of S are copied in: N1, P, Q, N2
    assert T.top.dots - R.top.dots == {"N1", "P", "Q", "N2"}


def test_fill_running_example():
    R, S = glue_r(), glue_s()
    X = fill(R, "f", S, outer="outer", scar="scar")
    assert X.dimension == R.dimension + 1
    assert find_isomorphism(X.top, glue_fill_top()) is not None
    assert X.top.children("scar") == ("N1", "N2", "P", "Q", "f")
    fs = sources(X)
    assert len(fs) == 2 and equals(fs["outer"], R) and equals(fs["scar"], S)
    assert equals(target(X), glue(R, "f", S))


def test_glue_mismatch():
    with pytest.raises(OpetopeError, match="target/source mismatch"):
        glue(glue_r(), "w", glue_s())


def test_glue_with_glob_is_unit():
    for R in [glue_r(), example_x(), example_z()] + enumerate_opetopes(4, 2)[:40]:
        for f in sorted(R.top.dots):
            F = source(R, f)
            assert equals(glue(R, f, glob_over(F)), R)
            X = fill(R, f, glob_over(F))
            assert equals(target(X), R) and len(sources(X)) == 2


def test_glue_associativity():
    rng = random.Random(5)
    pool = [X for n in (3, 4) for X in enumerate_opetopes(n, 2)]
    index = _by_target(pool)
    tried = 0
    for R in rng.sample(pool, len(pool)):
        tops = sorted(d for d in R.top.dots if R.top.children(d))
        if len(tops) < 2:
            continue
        f1, f2 = tops[:2]
        c1 = index.get(canonical_form(source(R, f1)), [])
        c2 = index.get(canonical_form(source(R, f2)), [])
        if not c1 or not c2:
            continue
        S1, S2 = rng.choice(c1), rng.choice(c2)
        a = glue(glue(R, f1, S1), f2, S2)
        b = glue(glue(R, f2, S2), f1, S1)
        assert equals(a, b)
        tried += 1
        if tried >= 25:
            break
    assert tried >= 10


def test_fill_dimension_and_faces():
    index = _by_target(_POOL)
    rng = random.Random(11)
    n = 0
    for R in rng.sample(_POOL, 120):
        for f in sorted(R.top.dots):
            cands = index.get(canonical_form(source(R, f)), [])
            if not cands:
                continue
            S = rng.choice(cands)
            X = fill(R, f, S)
            assert validate_opetope(X) == []
            assert X.dimension == R.dimension + 1
            assert equals(target(X), glue(R, f, S))
            n += 1
    assert n > 50


# recipes

def test_recipe_one_dot():
    F = example_x()
    t = Tree({"r": None, **{f"l{s}": "r" for s in F.top.dots}}, ["r"])
    comp, filler, _ = compose_recipe(Recipe(t, {"r": F}, {f"l{s}": s for s in F.top.dots}))
    assert equals(comp, F) and equals(filler, glob_over(F))


def test_recipe_unit():
    F = arrow()
    comp, filler, _ = compose_recipe(Recipe(Tree({"e": None}), unit_type=F))
    assert equals(comp, glob_over(F))
    assert equals(filler, drop_over(F))
    assert filler.top.is_unit and sources(filler) == {}


def test_recipe_two_dots_matches_fill():
    R, S = glue_r(), glue_s()
    parent = {"r": None, "s": "r"}
    sockets = {"s": "f"}
    for d in sorted(R.top.dots - {"f"}):
        parent[f"lr{d}"] = "r"
        sockets[f"lr{d}"] = d
    for d in sorted(S.top.dots):
        parent[f"ls{d}"] = "s"
        sockets[f"ls{d}"] = d
    comp, filler, _ = compose_recipe(Recipe(Tree(parent, ["r", "s"]), {"r": R, "s": S}, sockets))
    assert equals(comp, glue(R, "f", S))
    assert equals(filler, fill(R, "f", S))


def test_recipe_errors():
    F = example_x()
    with pytest.raises(OpetopeError, match="no decoration"):
        compose_recipe(Recipe(Tree({"r": None}, ["r"])))
    with pytest.raises(OpetopeError, match="do not match"):
        compose_recipe(Recipe(Tree({"r": None, "x": "r"}, ["r"]), {"r": F}, {"x": "13"}))


# facets of facets

def test_facet_parity():
    for n in range(2, 5):
        for X in enumerate_opetopes(n, 2):
            if not X.top.dots:
                assert all(c == 1 for _, c in facet_of_facet_multiplicities(X))
                continue
            for e, (up, low) in facet_pairs(X).items():
                assert equals(up, low), e
    for X in [example_x(), example_z(), glue_r()]:
        assert all(equals(a, b) for a, b in facet_pairs(X).values())


# suspension

def test_suspension_commutes():
    for X in [example_x(), example_z(), glue_r(), glue_s()]:
        SX = suspend(X)
        assert equals(target(SX), suspend(target(X)))
        for s in X.top.dots:
            assert equals(source(SX, s), suspend(source(X, s)))
    R, S = glue_r(), glue_s()
    assert equals(glue(suspend(R), "f", suspend(S)), suspend(glue(R, "f", S)))
    assert equals(fill(suspend(R), "f", suspend(S)), suspend(fill(R, "f", S)))


# random sphere operations

def _apply(X, data):
    i = data.draw(st.integers(2, X.dimension))
    G = X.tree(i)
    op = data.draw(st.sampled_from(["erase", "draw", "contract", "restrict"]))
    if op == "draw":
        return draw_sphere(X, i, data.draw(st.sampled_from(sorted(G.parent))))
    if not G.dots:
        return None
    if op == "erase":
        inner = sorted(G.dots - {G.root})
        return erase_sphere(X, i, data.draw(st.sampled_from(inner))) if inner else None
    s = data.draw(st.sampled_from(sorted(G.dots)))
    return (contract_sphere if op == "contract" else restrict_to_sphere)(X, i, s)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_random_sphere_operations_validate(data):
    X = data.draw(st.sampled_from(_POOL))
    Y = _apply(X, data)
    if Y is not None:
        assert validate_opetope(Y) == []
