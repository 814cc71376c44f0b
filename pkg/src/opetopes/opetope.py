"""Zoom complexes and opetopes.

A zoom complex is stored in its trees-only form: a base tree ``G[-1]`` and
levels ``0..n``, each holding the nesting tree ``G[k]`` of the constellation
``X[k]`` together with its white dots, which sit on edges of ``G[k-1]``.
Consecutive levels share names: the leaves of ``G[k]`` are the dots of
``G[k-1]``.  For an opetope the base is a single dot with a single leaf and
is left implicit in documents.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import permutations, product

from .constellation import Constellation, enumerate_constellations, validate_constellation
from .errors import OpetopeError, ValidationError
from .trees import Tree, _codes, canonical_code, fresh_name, is_linear, iter_isomorphisms

__all__ = [
    "Level",
    "ZoomComplex",
    "from_trees",
    "point",
    "arrow",
    "validate_zoom_complex",
    "validate_opetope",
    "canonical_labels",
    "canonical_form",
    "canonical_rename",
    "equals",
    "iter_complex_isomorphisms",
    "automorphisms",
    "glob_over",
    "drop_over",
    "globe",
    "composition_tree",
    "suspend",
    "desuspend",
    "stable_representative",
    "enumerate_opetopes",
]


@dataclass(frozen=True)
class Level:
    tree: Tree
    whites: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "whites", {e: tuple(w) for e, w in self.whites.items() if w})


class ZoomComplex:
    """Base tree plus levels ``0..n``; see the module docstring."""

    def __init__(self, base: Tree, levels: Iterable[Level]):
        self.base = base
        self.levels = tuple(levels)
        self._canon = None

    @property
    def dimension(self) -> int:
        return len(self.levels) - 1

    def tree(self, k: int) -> Tree:
        return self.base if k == -1 else self.levels[k].tree

    def whites(self, k: int) -> dict:
        return self.levels[k].whites

    def constellation(self, k: int) -> Constellation:
        return Constellation(self.tree(k - 1), self.whites(k), self.tree(k))

    @property
    def top(self) -> Tree:
        return self.levels[-1].tree

    def names(self) -> set:
        out = set(self.base.parent)
        for lv in self.levels:
            out |= set(lv.tree.parent)
        return out

    def truncate(self, k: int) -> "ZoomComplex":
        """Keep levels ``0..k``."""
        return ZoomComplex(self.base, self.levels[:k + 1])

    def extend(self, tree: Tree, whites: Mapping | None = None) -> "ZoomComplex":
        return ZoomComplex(self.base, self.levels + (Level(tree, whites or {}),))

    def rename(self, m: Mapping[str, str]) -> "ZoomComplex":
        g = lambda y: m.get(y, y)  # noqa: E731
        levels = [Level(lv.tree.rename(m), {g(e): tuple(g(w) for w in ws) for e, ws in lv.whites.items()})
                  for lv in self.levels]
        return ZoomComplex(self.base.rename(m), levels)

    def check(self) -> "ZoomComplex":
        v = validate_opetope(self)
        if v:
            raise ValidationError(v)
        return self

    def __eq__(self, other):
        return (isinstance(other, ZoomComplex) and self.base == other.base
                and self.levels == other.levels)

    def __hash__(self):
        return hash((self.base, tuple(lv.tree for lv in self.levels)))

    def __repr__(self):
        parts = [f"base={self.base.to_nested()!r}"]
        for k, lv in enumerate(self.levels):
            w = f", whites={lv.whites!r}" if lv.whites else ""
            parts.append(f"G{k}={lv.tree.to_nested()!r}{w}")
        return "ZoomComplex(" + ", ".join(parts) + ")"


Opetope = ZoomComplex


def from_trees(trees, whites=None, base_leaf: str | None = None) -> ZoomComplex:
    """Build an opetope-shaped complex from ``G[0..n]`` with the base left implicit.

    ``trees`` entries may be :class:`Tree` objects or nested specs accepted
    by :meth:`Tree.from_nested`; ``whites`` is an optional list of per-level
    white maps.
    """
    ts = [t if isinstance(t, Tree) else Tree.from_nested(t) for t in trees]
    if not ts:
        raise OpetopeError("at least one tree is needed")
    if len(ts[0].leaves) != 1:
        raise OpetopeError("G0 must have exactly one leaf")
    bd = next(iter(ts[0].leaves))
    used = set()
    for t in ts:
        used |= set(t.parent)
    bl = base_leaf or fresh_name(used, "_")
    whites = list(whites or [])
    whites += [{}] * (len(ts) - len(whites))
    return ZoomComplex(Tree({bd: None, bl: bd}, [bd]), [Level(t, w) for t, w in zip(ts, whites)])


def point(dot: str = "0", base_dot: str = "*", base_leaf: str = "_") -> ZoomComplex:
    """The unique 0-opetope."""
    base = Tree.from_nested((base_dot, [base_leaf]))
    return ZoomComplex(base, [Level(Tree.from_nested((dot, [base_dot])))])


def arrow(dot: str = "1") -> ZoomComplex:
    """The unique 1-opetope."""
    p = point()
    return p.extend(Tree.from_nested((dot, [p.top.root])))


# validation

def validate_zoom_complex(z: ZoomComplex) -> list[str]:
    out = [f"base: {v}" for v in _tree_errors(z.base)]
    if not z.levels:
        out.append("no levels")
    for k in range(len(z.levels)):
        out += [f"level {k}: {v}" for v in validate_constellation(z.constellation(k))]
    if out:
        return out
    # dot names must be unique across levels (leaves reuse the names below)
    seen: dict[str, int] = {}
    for k in range(-1, z.dimension + 1):
        for d in sorted(z.tree(k).dots):
            if d in seen:
                out.append(f"name {d} is a dot at levels {seen[d]} and {k}")
            seen.setdefault(d, k)
    for x in sorted(z.base.leaves):
        if x in seen:
            out.append(f"name {x} is the base leaf and a dot at level {seen[x]}")
    return out


def _tree_errors(t: Tree) -> list[str]:
    from .trees import validate_tree
    return validate_tree(t)


def validate_opetope(z: ZoomComplex) -> list[str]:
    out = validate_zoom_complex(z)
    if out:
        return out
    if len(z.base.dots) != 1 or len(z.base.leaves) != 1:
        out.append("initial condition: base must be one dot with one leaf")
    for k in (0, 1):
        if k <= z.dimension:
            t = z.tree(k)
            if len(t.dots) != 1 or len(t.leaves) != 1:
                out.append(f"initial condition: G{k} must be one dot with one leaf")
    if z.dimension >= 2:
        t = z.tree(2)
        if not is_linear(t) or z.whites(2):
            out.append("initial condition: G2 must be linear")
    return out


def is_opetope(z: ZoomComplex) -> bool:
    return not validate_opetope(z)


# canonical form

def canonical_labels(z: ZoomComplex) -> list[dict]:
    """Integer labels for every element of every tree, independent of names.

    Returns one dict per tree ``G[-1], G[0], ..., G[n]``.  Requires a base
    tree without symmetries (always the case for opetopes); raises
    :class:`OpetopeError` otherwise.
    """
    labels: list[dict] = []
    base = z.base
    codes = _codes(base)
    order = sorted(base.parent, key=lambda x: (base.depth(x), codes[x], _anc_code(base, codes, x)))
    keys = [(_anc_code(base, codes, x), codes[x]) for x in order]
    if len(set(keys)) != len(keys):
        raise OpetopeError("base tree has symmetries")
    lab = {x: i for i, x in enumerate(order)}
    labels.append(lab)
    nxt = len(order)
    for k in range(z.dimension + 1):
        t = z.tree(k)
        prev = labels[-1]
        white_key = {}
        for e, ws in z.whites(k).items():
            for i, w in enumerate(ws):
                white_key[w] = (1, prev[e], i)
        key: dict[str, tuple] = {}
        for x in sorted(t.parent, key=t.depth, reverse=True):
            if x in white_key:
                key[x] = white_key[x]
            elif x not in t.dots:
                key[x] = (0, prev[x])
            else:
                key[x] = (2, tuple(sorted(key[c] for c in t.children(x))))
        lab = {}
        for x in t.leaves:
            lab[x] = prev[x]
        dots = sorted(t.dots, key=lambda d: (key[d], t.depth(d)))
        for i in range(1, len(dots)):
            a, b = dots[i - 1], dots[i]
            if key[a] == key[b] and t.depth(a) == t.depth(b):
                raise OpetopeError("level has symmetric dots")
        for d in dots:
            lab[d] = nxt
            nxt += 1
        labels.append(lab)
    return labels


def _anc_code(t: Tree, codes: dict, x: str) -> tuple:
    return tuple(codes[y] for y in t.path_to_root(x))


def canonical_form(z: ZoomComplex) -> tuple:
    """A hashable name-free encoding; equal forms mean equal complexes."""
    if z._canon is None:
        labels = canonical_labels(z)
        parts = []
        for k in range(-1, z.dimension + 1):
            t, lab = z.tree(k), labels[k + 1]
            prev = labels[k] if k >= 0 else None
            edges = tuple(sorted((lab[x], -1 if p is None else lab[p], x in t.dots)
                                 for x, p in t.parent.items()))
            wh = ()
            if k >= 0:
                wh = tuple(sorted((prev[e], tuple(lab[w] for w in ws))
                                  for e, ws in z.whites(k).items()))
            parts.append((edges, wh))
        z._canon = tuple(parts)
    return z._canon


def canonical_rename(z: ZoomComplex) -> ZoomComplex:
    """Copy of ``z`` whose names are the canonical labels.

    The base leaf, which documents leave implicit, is called ``_``.
    """
    return _rename_levels(z, canonical_labels(z))


def _rename_levels(z: ZoomComplex, labels) -> ZoomComplex:
    maps = [{x: str(i) for x, i in lab.items()} for lab in labels]
    if len(z.base.leaves) == 1:
        maps[0][next(iter(z.base.leaves))] = "_"
    base = z.base.rename(maps[0])
    levels = []
    for k in range(z.dimension + 1):
        m, prev = maps[k + 1], maps[k]
        wh = {prev[e]: tuple(m[w] for w in ws) for e, ws in z.whites(k).items()}
        levels.append(Level(z.tree(k).rename(m), wh))
    return ZoomComplex(base, levels)


def equals(a: ZoomComplex, b: ZoomComplex) -> bool:
    if a.dimension != b.dimension:
        return False
    return canonical_form(a) == canonical_form(b)


# isomorphism search for general zoom complexes (no rigidity assumed)

def iter_complex_isomorphisms(a: ZoomComplex, b: ZoomComplex):
    """Yield every structure-preserving name bijection ``a -> b`` (one dict per tree)."""
    if a.dimension != b.dimension:
        return
    for m0 in iter_isomorphisms(a.base, b.base):
        maps = [m0]
        ok = True
        for k in range(a.dimension + 1):
            m = _extend_level(a, b, k, maps[-1])
            if m is None:
                ok = False
                break
            maps.append(m)
        if ok:
            yield maps


def _extend_level(a, b, k, below):
    ta, tb = a.tree(k), b.tree(k)
    wa, wb = a.whites(k), b.whites(k)
    if len(ta.parent) != len(tb.parent) or len(ta.dots) != len(tb.dots):
        return None
    m = {}
    for x in ta.leaves:
        if below.get(x) not in tb.leaves:
            return None
        m[x] = below[x]
    for e, ws in wa.items():
        target = wb.get(below[e], ())
        if len(target) != len(ws):
            return None
        for w, v in zip(ws, target):
            m[w] = v
    if sum(len(w) for w in wb.values()) != sum(len(w) for w in wa.values()):
        return None
    # group the remaining dots by their minimal elements; within a group they form a chain
    def groups(t):
        g = {}
        for d in t.dots:
            if t.children(d):
                g.setdefault(t.minimal_below(d), []).append(d)
        return g

    ga, gb = groups(ta), groups(tb)
    for key, ds in ga.items():
        img = frozenset(m[y] for y in key)
        es = gb.get(img)
        if es is None or len(es) != len(ds):
            return None
        for d, e in zip(sorted(ds, key=ta.depth), sorted(es, key=tb.depth)):
            m[d] = e
    for x, p in ta.parent.items():
        q = None if p is None else m[p]
        if tb.parent[m[x]] != q:
            return None
    return m


def automorphisms(z: ZoomComplex) -> list:
    return list(iter_complex_isomorphisms(z, z))


# globs, drops, composition trees

def _fresh(z: ZoomComplex, hint: str, extra=()) -> str:
    return fresh_name(z.names() | set(extra), hint)


def glob_over(F: ZoomComplex, name: str | None = None) -> ZoomComplex:
    """The glob one dimension up whose target is ``F``."""
    g = name or _fresh(F, "g")
    top = F.top
    if top.dots:
        t = Tree({**{d: g for d in top.dots}, g: None}, [g])
        return F.extend(t)
    leaf = top.root
    return F.extend(Tree({g: None}, [g]), {leaf: (g,)})


def drop_over(G: ZoomComplex, name: str | None = None) -> ZoomComplex:
    """The drop two dimensions up whose target is ``glob_over(G)``."""
    glob = glob_over(G, name)
    return glob.extend(Tree({glob.top.root: None}))


def globe(n: int) -> ZoomComplex:
    """The n-fold iterated glob over the point (the n-globe)."""
    z = point()
    for _ in range(n):
        z = glob_over(z)
    return z


def composition_tree(X: ZoomComplex) -> Tree:
    if X.dimension < 1:
        raise OpetopeError("composition tree needs dimension at least 1")
    return X.top


# suspension

def suspend(X: ZoomComplex, base_dot: str | None = None, base_leaf: str | None = None) -> ZoomComplex:
    names = X.names()
    bd = base_dot or fresh_name(names, "b")
    bl = base_leaf or fresh_name(names | {bd}, "bl")
    old_dot = next(iter(X.base.dots))
    old_leaf = next(iter(X.base.leaves))
    new_base = Tree({bd: None, bl: bd}, [bd])
    g0 = Tree({old_dot: None, bd: old_dot}, [old_dot])
    levels = [Level(g0)]
    for k, lv in enumerate(X.levels):
        wh = lv.whites
        if k == 0:
            wh = {(bd if e == old_leaf else e): ws for e, ws in wh.items()}
        levels.append(Level(lv.tree, wh))
    return ZoomComplex(new_base, levels)


def desuspend(X: ZoomComplex) -> ZoomComplex | None:
    """Drop ``G[0]``; returns None when the result is not an opetope."""
    if X.dimension < 1:
        return None
    z = ZoomComplex(X.levels[0].tree, X.levels[1:])
    return None if validate_opetope(z) else z


def stable_representative(X: ZoomComplex) -> ZoomComplex:
    cur = X
    while True:
        nxt = desuspend(cur)
        if nxt is None:
            return cur
        cur = nxt


# enumeration

def enumerate_opetopes(n: int, max_dots: int, max_spheres: int | None = None) -> list[ZoomComplex]:
    """All n-opetopes, up to equality, within the given size bounds.

    ``max_dots`` bounds the dot count of every tree below the top one (in
    particular of the top carrier); ``max_spheres`` bounds the spheres of
    the top constellation, null-spheres included, and defaults to
    ``max_dots``.  Results carry canonical names and come in a fixed order.
    """
    if max_spheres is None:
        max_spheres = max_dots
    found = _enumerate(n, max_dots, max_spheres)
    return [found[f] for f in sorted(found)]


_ENUM_CACHE: dict = {}


def _enumerate(n, max_dots, max_spheres) -> dict:
    key = (n, max_dots, max_spheres)
    if key in _ENUM_CACHE:
        return _ENUM_CACHE[key]
    out: dict = {}
    if n == 0:
        z = canonical_rename(point())
        out[canonical_form(z)] = z
    elif n == 1:
        z = canonical_rename(arrow())
        out[canonical_form(z)] = z
    elif n == 2:
        a = arrow()
        d = a.top.root
        for m in range(max_spheres + 1):
            names = [f"s{i}" for i in range(m)]
            if m == 0:
                t = Tree({d: None})
            else:
                parent = {names[0]: None}
                for i in range(1, m):
                    parent[names[i]] = names[i - 1]
                parent[d] = names[-1]
                t = Tree(parent, names)
            z = canonical_rename(a.extend(t))
            out[canonical_form(z)] = z
    else:
        lower = _enumerate(n - 1, max_dots, max_dots)
        for Y in lower.values():
            for c in enumerate_constellations(Y.top, max_spheres, hint="s", white_hint="w"):
                z = Y.extend(c.nesting, c.whites)
                cf = canonical_form(z)
                if cf not in out:
                    out[cf] = canonical_rename(z)
    _ENUM_CACHE[key] = out
    return out
