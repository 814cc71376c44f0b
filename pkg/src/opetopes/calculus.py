"""Faces and composition of opetopes.

The four sphere operations (erase, draw, contract, restrict) act on one
level and, for contract and restrict, push their consequences down through
the lower levels.  Sources and targets are built from them; gluing and
filling build new opetopes from old ones.

Internally a complex is unpacked into mutable per-tree tables indexed by
*position* ``p = k + 1``, so position 0 is the base tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import OpetopeError, ValidationError
from .opetope import Level, ZoomComplex, drop_over, glob_over, iter_complex_isomorphisms, validate_zoom_complex
from .opetope import canonical_labels
from .trees import Tree, fresh_name, kernel_root, SubdividedTree

__all__ = [
    "erase_sphere",
    "draw_sphere",
    "contract_sphere",
    "restrict_to_sphere",
    "target",
    "source",
    "sources",
    "glue",
    "fill",
    "Recipe",
    "compose_recipe",
    "facet_pairs",
    "facet_of_facet_multiplicities",
]


class _Work:
    """Mutable copy of a complex: parent maps, dot sets and white lists per position."""

    def __init__(self, z: ZoomComplex):
        trees = [z.base] + [lv.tree for lv in z.levels]
        self.parent = [dict(t.parent) for t in trees]
        self.dots = [set(t.dots) for t in trees]
        self.whites = [{}] + [{e: list(ws) for e, ws in lv.whites.items()} for lv in z.levels]

    def children(self, p, x):
        return sorted(y for y, q in self.parent[p].items() if q == x)

    def descendants(self, p, x):
        out, stack = [], [x]
        while stack:
            y = stack.pop()
            out.append(y)
            stack.extend(self.children(p, y))
        return out

    def content(self, p, s):
        """(black, white) minimal elements below dot ``s`` of tree ``p``."""
        black, white = set(), set()
        for y in self.descendants(p, s):
            if y not in self.dots[p]:
                black.add(y)
            elif not any(q == y for q in self.parent[p].values()):
                white.add(y)
        return black, white

    def edge_of_white(self, p, w):
        for e, ws in self.whites[p].items():
            if w in ws:
                return e
        raise KeyError(w)

    def drop_white(self, p, w):
        e = self.edge_of_white(p, w)
        self.whites[p][e].remove(w)
        if not self.whites[p][e]:
            del self.whites[p][e]

    def prune_to_leaf(self, p, s):
        """Remove everything above ``s`` in tree ``p``; ``s`` becomes a leaf."""
        for y in self.descendants(p, s):
            if y != s:
                del self.parent[p][y]
                self.dots[p].discard(y)
        self.dots[p].discard(s)

    def root(self, p):
        return next(x for x, q in self.parent[p].items() if q is None)

    def freeze(self, upto=None) -> ZoomComplex:
        n = len(self.parent) if upto is None else upto + 1
        trees = [Tree(self.parent[p], self.dots[p]) for p in range(n)]
        levels = [Level(trees[p], {e: tuple(ws) for e, ws in self.whites[p].items()})
                  for p in range(1, n)]
        return ZoomComplex(trees[0], levels)

    def names(self):
        out = set()
        for par in self.parent:
            out |= set(par)
        return out

    # primitives; p is the position of the tree containing the sphere

    def erase(self, p, s):
        if s not in self.dots[p]:
            raise OpetopeError(f"unknown sphere {s}")
        if self.parent[p][s] is None:
            raise OpetopeError(f"cannot erase the outer sphere {s}")
        kids = self.children(p, s)
        up = self.parent[p][s]
        for c in kids:
            self.parent[p][c] = up
        del self.parent[p][s]
        self.dots[p].discard(s)
        if not kids:
            if self.children(p, up):
                self.drop_white(p, s)
            else:
                # the enclosing sphere is left empty and takes over the position
                ws = self.whites[p][self.edge_of_white(p, s)]
                ws[ws.index(s)] = up

    def draw(self, p, around, name):
        if around not in self.parent[p]:
            raise OpetopeError(f"unknown element {around}")
        self.parent[p][name] = self.parent[p][around]
        self.parent[p][around] = name
        self.dots[p].add(name)

    def contract(self, p, s):
        if s not in self.dots[p]:
            raise OpetopeError(f"unknown sphere {s}")
        black, white = self.content(p, s)
        q = p - 1
        if black:
            r = next(x for x in black if self.parent[q][x] not in black)
            # level below: collapse the cut tree onto its root, renamed s
            nulls = [x for x in black if x in self.dots[q] and not self.children(q, x)]
            spots = {x: self.edge_of_white(q, x) for x in nulls} if q >= 1 else {}
            for y, up in list(self.parent[q].items()):
                if y not in black and up in black:
                    self.parent[q][y] = s
            r_parent = self.parent[q][r]
            for x in black:
                del self.parent[q][x]
                self.dots[q].discard(x)
            self.parent[q][s] = r_parent
            self.dots[q].add(s)
            if q >= 1 and nulls:
                if not any(v == s for v in self.parent[q].values()):
                    # only white content below: the block of whites becomes the single white s
                    e = spots[nulls[0]]
                    ws = self.whites[q][e]
                    at = min(ws.index(x) for x in nulls)
                    ws[:] = [w for w in ws if w not in nulls]
                    ws.insert(at, s)
                else:
                    for x in nulls:
                        self.drop_white(q, x)
            # whites of this level: the inner ones vanish, those on r's edge follow s
            for w in white:
                self.drop_white(p, w)
            if r in self.whites[p]:
                self.whites[p][s] = self.whites[p].pop(r)
        else:
            e = self.edge_of_white(p, next(iter(white)))
            ws = self.whites[p][e]
            idx = sorted(ws.index(w) for w in white)
            lo, hi = idx[0], idx[-1]
            below, above = ws[:lo], ws[hi + 1:]
            self.draw(q, e, s)
            if below:
                self.whites[p][s] = below
            if above:
                self.whites[p][e] = above
            else:
                self.whites[p].pop(e, None)
        self.prune_to_leaf(p, s)

    def restrict(self, p, s):
        if s not in self.dots[p]:
            raise OpetopeError(f"unknown sphere {s}")
        black, white = self.content(p, s)
        keep = set(self.descendants(p, s))
        self.parent[p] = {x: self.parent[p][x] for x in keep}
        self.parent[p][s] = None
        self.dots[p] &= keep
        self.whites[p] = {e: [w for w in ws if w in white] for e, ws in self.whites[p].items()}
        self.whites[p] = {e: ws for e, ws in self.whites[p].items() if ws}
        q = p - 1
        if black:
            outside = sorted(y for y, up in self.parent[q].items()
                             if up in black and y not in black and y in self.dots[q])
            for y in outside:
                self._cut(q, y)
            r = next(x for x in black if self.parent[q][x] not in black)
            self._restrict_or_trim(q, r)
        else:
            c = self.edge_of_white_any(p, white)
            if c in self.dots[q]:
                self._cut(q, c)
            self.restrict_to_dot(q, c)

    def edge_of_white_any(self, p, white):
        return self.edge_of_white(p, next(iter(white)))

    def _cut(self, q, y):
        if q >= 1:
            self.contract(q, y)
        else:
            self.prune_to_leaf(q, y)

    def _restrict_or_trim(self, q, r):
        if q >= 1:
            self.restrict(q, r)
        else:
            keep = set(self.descendants(q, r))
            self.parent[q] = {x: self.parent[q][x] for x in keep}
            self.parent[q][r] = None
            self.dots[q] &= keep

    def restrict_to_dot(self, p, d):
        """Tree ``p`` becomes the unit tree on leaf ``d`` (a dot of tree ``p-1``)."""
        self.parent[p] = {d: None}
        self.dots[p] = set()
        self.whites[p] = {}
        q = p - 1
        if q < 0:
            return
        for y in self.children(q, d):
            if y in self.dots[q]:
                self._cut(q, y)
        self._restrict_or_trim(q, d)


def _level(z: ZoomComplex, i: int) -> int:
    if not 0 <= i <= z.dimension:
        raise OpetopeError(f"level {i} out of range")
    return i + 1


def _finish(w: _Work, i: int) -> ZoomComplex:
    z = w.freeze(upto=i + 1)
    v = validate_zoom_complex(z)
    if v:
        raise ValidationError(v)
    return z


def erase_sphere(z: ZoomComplex, i: int, s: str) -> ZoomComplex:
    """Erase a non-outer sphere of ``X[i]``; levels above ``i`` are dropped."""
    w = _Work(z)
    w.erase(_level(z, i), s)
    return _finish(w, i)


def draw_sphere(z: ZoomComplex, i: int, around: str, name: str | None = None) -> ZoomComplex:
    """Draw a sphere immediately around a dot or sphere of ``X[i]``; levels above ``i`` are dropped."""
    p = _level(z, i)
    w = _Work(z)
    name = name or fresh_name(w.names(), "d")
    if name in w.names():
        raise OpetopeError(f"name {name} already in use")
    w.draw(p, around, name)
    return _finish(w, i)


def contract_sphere(z: ZoomComplex, i: int, s: str) -> ZoomComplex:
    w = _Work(z)
    w.contract(_level(z, i), s)
    return _finish(w, i)


def restrict_to_sphere(z: ZoomComplex, i: int, s: str) -> ZoomComplex:
    w = _Work(z)
    w.restrict(_level(z, i), s)
    return _finish(w, i)


def target(X: ZoomComplex) -> ZoomComplex:
    if X.dimension < 1:
        raise OpetopeError("a 0-opetope has no target")
    return X.truncate(X.dimension - 1)


def source(X: ZoomComplex, s: str) -> ZoomComplex:
    n = X.dimension
    if n < 1:
        raise OpetopeError("a 0-opetope has no sources")
    if s not in X.top.dots:
        raise OpetopeError(f"unknown sphere {s}")
    w = _Work(X)
    p = n + 1
    w.restrict(p, s)
    for c in w.children(p, s):
        if c in w.dots[p]:
            w.contract(p, c)
    return w.freeze(upto=n)


def sources(X: ZoomComplex) -> dict:
    return {s: source(X, s) for s in sorted(X.top.dots)}


# gluing

def _match_names(a: ZoomComplex, b: ZoomComplex, k: int) -> dict | None:
    """Name map from tree ``k`` of ``a`` to tree ``k`` of ``b`` when the complexes are equal."""
    try:
        la, lb = canonical_labels(a), canonical_labels(b)
    except OpetopeError:
        for maps in iter_complex_isomorphisms(a, b):
            return maps[k + 1]
        return None
    from .opetope import canonical_form
    if a.dimension != b.dimension or canonical_form(a) != canonical_form(b):
        return None
    inv = {v: x for x, v in lb[k + 1].items()}
    return {x: inv[v] for x, v in la[k + 1].items()}


def _slots(R: ZoomComplex, f: str) -> dict:
    """Where new white dots go when something is glued into sphere ``f``.

    Keys are the elements of the top tree of ``source(R, f)``; values are
    ``(edge, index)`` insertion points in the top white lists of ``R``.
    """
    n = R.dimension
    G, W = R.top, R.whites(n)
    sub = SubdividedTree(R.tree(n - 1), W)
    tt = sub.expanded
    kf = G.minimal_below(f)
    whites = sub.white_dots

    def gap(u):
        # directly below u
        if u in whites:
            return sub.edge_of(u)
        return u, len(W.get(u, ()))

    out = {}
    for x in G.children(f):
        out[x] = gap(kernel_root(tt, G.minimal_below(x)))
    for u, q in tt.parent.items():
        if q in kf and u not in kf:
            y = sub.edge_of(u)[0] if u in whites else u
            out[y] = gap(u)
    return out


def _glue(R: ZoomComplex, f: str, S: ZoomComplex, avoid=()):
    """Return ``(T, m)`` where ``m`` maps names of the top tree of ``S`` into ``T``."""
    n = R.dimension
    if S.dimension != n:
        raise OpetopeError("target/source mismatch: dimensions differ")
    if f not in R.top.dots:
        raise OpetopeError(f"unknown facet {f}")
    F = source(R, f)
    phi = _match_names(S.truncate(n - 1), F, n - 1)
    if phi is None:
        raise OpetopeError(f"target/source mismatch at facet {f}")
    G, W = R.top, {e: list(ws) for e, ws in R.whites(n).items()}
    SG, SW = S.top, S.whites(n)
    used = R.names() | set(avoid)
    m: dict[str, str] = {}
    for x in SG.leaves:
        m[x] = phi[x]
    if not SG.dots:
        # S is a drop: f has a single child which takes its place
        (x,) = G.children(f)
        parent = dict(G.parent)
        parent[x] = parent.pop(f)
        m[SG.root] = x
        return ZoomComplex(R.base, R.levels[:-1] + (Level(Tree(parent, G.dots - {f}), W),)), m
    O = SG.root
    m[O] = f
    for d in sorted(SG.dots - {O}):
        nm = d if d not in used else fresh_name(used | set(m.values()), d)
        used.add(nm)
        m[d] = nm
    parent = {x: p for x, p in G.parent.items()}
    for x, p in SG.parent.items():
        if x == O:
            continue
        parent[m[x]] = m[p]
    dots = set(G.dots) | {m[d] for d in SG.dots}
    f_null = not G.children(f)
    if f_null:
        e = next(e for e, ws in W.items() if f in ws)
        j = W[e].index(f)
        inner = [m[w] for ws in SW.values() for w in ws]
        if not SG.children(O):
            return R, m
        W[e][j:j + 1] = inner
    else:
        slots = _slots(R, f)
        assert set(slots) == set(F.top.parent), (slots, F.top)
        inserts: dict[str, list] = {}
        for eps, ws in SW.items():
            e, g = slots[phi[eps]]
            inserts.setdefault(e, []).append((g, [m[w] for w in ws]))
        for e, items in inserts.items():
            cur = W.setdefault(e, [])
            for g, block in sorted(items, key=lambda t: -t[0]):
                cur[g:g] = block
    T = ZoomComplex(R.base, R.levels[:-1] + (Level(Tree(parent, dots), W),))
    return T, m


def glue(R: ZoomComplex, f: str, S: ZoomComplex) -> ZoomComplex:
    """Glue ``S`` onto the source facet ``f`` of ``R``; ``target(S)`` must equal ``source(R, f)``."""
    T, _ = _glue(R, f, S)
    v = validate_zoom_complex(T)
    if v:
        raise ValidationError(v)
    return T


def fill(R: ZoomComplex, f: str, S: ZoomComplex, outer: str | None = None,
         scar: str | None = None) -> ZoomComplex:
    """The opetope one dimension up with sources ``R`` and ``S`` and target ``glue(R, f, S)``."""
    T, m = _glue(R, f, S)
    used = T.names()
    outer = outer or fresh_name(used, "o")
    scar = scar or fresh_name(used | {outer}, "sc")
    G = T.top
    region = {m[d] for d in S.top.dots}
    if not S.top.dots:
        region = set()
    parent: dict[str, str | None] = {outer: None, scar: outer}
    for d in G.dots:
        parent[d] = scar if d in region else outer
    whites = {}
    if not region:
        whites = {m[S.top.root]: (scar,)}
    X = T.extend(Tree(parent, {outer, scar}), whites)
    v = validate_zoom_complex(X)
    if v:
        raise ValidationError(v)
    return X


# recipes

@dataclass
class Recipe:
    """A tree whose dots carry n-opetopes.

    ``sockets`` sends every element whose parent is a dot ``d`` to the
    name of a top sphere of ``decorations[d]``.  For the unit tree,
    ``unit_type`` is the (n-1)-opetope on its edge.
    """

    tree: Tree
    decorations: dict = field(default_factory=dict)
    sockets: dict = field(default_factory=dict)
    unit_type: ZoomComplex | None = None


def compose_recipe(recipe: Recipe):
    """Return ``(composite, filler, names)``.

    ``names`` sends each recipe dot to the sphere of the filler's top
    constellation that stands for it.
    """
    t = recipe.tree
    if not t.dots:
        F = recipe.unit_type
        if F is None:
            raise OpetopeError("unit recipe needs a unit_type")
        g = glob_over(F)
        return g, drop_over(F, g.top.root), {}
    for d in t.dots:
        dec = recipe.decorations.get(d)
        if dec is None:
            raise OpetopeError(f"recipe dot {d} has no decoration")
        kids = t.children(d)
        socks = [recipe.sockets.get(c) for c in kids]
        if sorted(map(str, socks)) != sorted(dec.top.dots):
            raise OpetopeError(f"recipe dot {d}: children do not match the spheres of its decoration")
    dims = {recipe.decorations[d].dimension for d in t.dots}
    if len(dims) != 1:
        raise OpetopeError("recipe decorations differ in dimension")

    def build(d):
        T = recipe.decorations[d]
        used_names = set(t.dots)
        clash = T.names() & used_names
        ren: dict = {}
        if clash:
            taken = T.names() | used_names
            for x in sorted(clash):
                ren[x] = fresh_name(taken, x + "_")
                taken.add(ren[x])
            T = T.rename(ren)
        cmap = {}
        for c in t.children(d):
            cmap[c] = ren.get(recipe.sockets[c], recipe.sockets[c])
        G = T.top
        if G.dots:
            npar = {x: d for x in G.dots}
            npar[d] = None
            nwh: dict = {}
        else:
            npar = {d: None}
            nwh = {G.root: [d]}
        ndots = {d}
        for c in sorted(t.children(d)):
            if c not in t.dots:
                continue
            f = cmap[c]
            U, umap, (upar, udots, uwh) = build(c)
            T2, smap = _glue_checked(T, f, U, c, t.dots)
            # child sockets now point at renamed spheres
            for cc, s in umap.items():
                cmap[cc] = smap[s]
            del cmap[c]
            npar, ndots, nwh = _substitute(npar, ndots, nwh, f, c, upar, udots, uwh, smap, U, T)
            T = T2
        return T, cmap, (npar, ndots, nwh)

    T, _, (npar, ndots, nwh) = build(t.root)
    filler = T.extend(Tree(npar, ndots), {e: tuple(ws) for e, ws in nwh.items() if ws})
    v = validate_zoom_complex(filler)
    if v:
        raise ValidationError(v)
    return T, filler, {d: d for d in t.dots}


def _glue_checked(T, f, U, edge, avoid):
    try:
        return _glue(T, f, U, avoid)
    except OpetopeError as exc:
        raise OpetopeError(f"recipe edge {edge}: {exc}") from None


def _substitute(npar, ndots, nwh, f, u, upar, udots, uwh, smap, U, T):
    """Put the child's nesting in place of leaf ``f`` of the parent's nesting."""
    par = dict(npar)
    up = par.pop(f)
    for x, p in upar.items():
        nx = x if x in udots else smap[x]
        par[nx] = up if p is None else p
    dots = set(ndots) | set(udots)
    wh = {e: list(ws) for e, ws in nwh.items()}
    below_f = wh.pop(f, [])
    SG = U.top
    if not SG.dots:
        leaf = SG.root
        x = smap[leaf]
        wh[x] = below_f + list(uwh.get(leaf, [])) + wh.get(x, [])
    else:
        O = SG.root
        for e, ws in uwh.items():
            if e == O:
                continue
            ne = smap[e]
            if e in SG.leaves:
                wh[ne] = list(ws) + wh.get(ne, [])
            else:
                wh[ne] = list(ws)
        wh[f] = below_f + list(uwh.get(O, []))
    return par, dots, wh


# facet-of-facet bookkeeping

def facet_pairs(X: ZoomComplex) -> dict:
    """Pair up the facets of facets of ``X`` along the edges of its top tree.

    Each edge ``e`` of the top tree yields the face seen from its upper end
    (the target of source ``e``, or source ``e`` of the target when ``e`` is
    a leaf) and the face seen from its lower end (source ``e`` of the source
    below, or the target of the target at the root).  Returns
    ``edge -> (upper_face, lower_face)``.
    """
    if X.dimension < 2:
        raise OpetopeError("facets of facets need dimension at least 2")
    G = X.top
    T = target(X)
    srcs = sources(X)
    out = {}
    for e, up in G.parent.items():
        upper = target(srcs[e]) if e in G.dots else source(T, e)
        lower = source(srcs[up], e) if up is not None else target(T)
        out[e] = (upper, lower)
    return out


def facet_of_facet_multiplicities(X: ZoomComplex) -> list:
    """Occurrence count of every codimension-2 face among the facets of facets.

    Faces are identified along the edges of the top tree; the result lists
    ``(face, count)``.  For drops nothing is identified.
    """
    G = X.top
    if not G.dots:
        T = target(X)
        return [(target(T), 1)] + [(source(T, s), 1) for s in sorted(T.top.dots)]
    return [(pair[0], 2) for _, pair in sorted(facet_pairs(X).items())]
