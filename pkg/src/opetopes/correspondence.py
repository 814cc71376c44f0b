"""Dictionary between zoom-complex opetopes and the polynomial tower.

An n-opetope (n >= 2) corresponds to a tree over ``P^(n-2)``: the dots are
the spheres of the top constellation, each decorated by the term of its
source facet, and the leaves are the dots of the top carrier.  Going the
other way a term is read as a recipe and composed by gluing.

This module also runs the exhaustive comparisons between the two sides and
the two-route check that trees over the slice monad are the same thing as
constellations over the base monad.
"""

from __future__ import annotations

from collections import Counter
from itertools import count

from .calculus import Recipe, compose_recipe, source, target
from .constellation import Constellation, enumerate_constellations, validate_constellation
from .errors import OpetopeError
from .opetope import ZoomComplex, arrow, canonical_form, drop_over, enumerate_opetopes, point
from .polyfun import BaezDolan, PolyMonad, p_trees, tower_monad
from .trees import Tree, kernel_root

__all__ = [
    "opetope_to_term",
    "term_to_opetope",
    "in_tower",
    "tower_vs_enumerate",
    "cross_check_sources_targets",
    "slice_twice_check",
    "constellation_to_slice_tree",
    "slice_tree_to_constellation",
]


# opetope -> term

def _phi(X: ZoomComplex, memo: dict):
    """``(term, amap)`` where ``amap`` sends each top sphere of ``X`` to its fibre element."""
    n = X.dimension
    if n == 0:
        return "*", {}
    if n == 1:
        return "*", {X.top.root: 0}
    key = canonical_form(X)
    hit = memo.get(key)
    if hit is not None and hit[0] == X:
        return hit[1]
    M = tower_monad(n - 2)
    G = X.top
    if not G.dots:
        tt, _ = _phi(target(target(X)), memo)
        res = (("u", tt), {})
    else:
        amap: dict = {}

        def build(x, addr):
            amap[x] = addr
            dec, sub = _phi(source(X, x), memo)
            by_elem = {sub[c]: c for c in G.children(x)}
            kids = []
            for e in M.fibre(dec):
                c = by_elem[e]
                if c in G.dots:
                    kids.append((e, build(c, addr + (e,))))
                else:
                    kids.append((e, ("u", M.src(dec, e))))
            return ("n", dec, tuple(kids))

        res = (build(G.root, ()), amap)
    memo[key] = (X, res)
    return res


def opetope_to_term(X: ZoomComplex, memo: dict | None = None):
    """The element of ``Z^n`` (a tree over ``P^(n-2)`` for n >= 2) naming ``X``."""
    return _phi(X, {} if memo is None else memo)[0]


# term -> opetope

def _psi(term, n: int, memo: dict):
    """``(X, amap)`` where ``amap`` sends fibre elements of ``term`` to top spheres of ``X``."""
    if n == 0:
        return point(), {}
    if n == 1:
        a = arrow()
        return a, {0: a.top.root}
    key = (term, n)
    if key in memo:
        return memo[key]
    if term[0] == "u":
        G, _ = _psi(term[1], n - 2, memo)
        res = (drop_over(G), {})
    else:
        parent: dict = {}
        dots: list = []
        decorations: dict = {}
        sockets: dict = {}
        addr_of: dict = {}
        leaves = count()

        def walk(t, up, addr):
            if t[0] == "u":
                nm = f"l{next(leaves)}"
                parent[nm] = up
                return nm
            nm = f"t{len(dots)}"
            dots.append(nm)
            parent[nm] = up
            addr_of[addr] = nm
            dec, sub = _psi(t[1], n - 1, memo)
            decorations[nm] = dec
            for e, child in t[2]:
                c = walk(child, nm, addr + (e,))
                sockets[c] = sub[e]
            return nm

        walk(term, None, ())
        _, filler, _ = compose_recipe(Recipe(Tree(parent, dots), decorations, sockets))
        res = (filler, addr_of)
    memo[key] = res
    return res


def term_to_opetope(term, n: int, memo: dict | None = None) -> ZoomComplex:
    """The n-opetope named by an element of ``Z^n``."""
    return _psi(term, n, {} if memo is None else memo)[0]


# membership in the truncated tower

def in_tower(X: ZoomComplex, bound: int, memo: dict | None = None) -> bool:
    """Whether ``X`` lies in the truncation of ``Z^n`` at ``bound``.

    The truncation bounds every stage, so besides the top tree all sources
    and the target must lie in the truncation one dimension down.
    """
    memo = {} if memo is None else memo
    n = X.dimension
    if n <= 1:
        return True
    key = canonical_form(X)
    if key in memo:
        return memo[key]
    G = X.top
    # a source has one top dot per child of its sphere: reject cheaply first
    ok = len(G.dots) <= bound and all(len(G.children(x)) <= bound for x in G.dots)
    if ok:
        ok = in_tower(target(X), bound, memo)
    if ok:
        ok = all(in_tower(source(X, x), bound, memo) for x in sorted(G.dots))
    memo[key] = ok
    return ok


def tower_vs_enumerate(k: int, bound: int) -> str | None:
    """Compare ``Z^k`` within ``bound`` with the enumerated k-opetopes, both ways round.

    Returns ``None`` when the two sets correspond and the round trips are
    identities, otherwise a description of the first discrepancy.
    """
    zs = list(tower_monad(k).types(bound))
    xs = [X for X in enumerate_opetopes(k, bound, bound) if in_tower(X, bound)]
    if len(set(zs)) != len(zs):
        return f"Z^{k}: duplicate elements"
    phimemo: dict = {}
    psimemo: dict = {}
    images = {}
    for X in xs:
        t = opetope_to_term(X, phimemo)
        if t in images:
            return f"dimension {k}: two opetopes share the term {t!r}"
        images[t] = X
    zset = set(zs)
    for t in images:
        if t not in zset:
            return f"dimension {k}: opetope term {t!r} is not in the tower"
    for z in zs:
        if z not in images:
            return f"dimension {k}: tower element {z!r} has no enumerated opetope"
        X = term_to_opetope(z, k, psimemo)
        if canonical_form(X) != canonical_form(images[z]):
            return f"dimension {k}: round trip of {z!r} changes the opetope"
    return None


def cross_check_sources_targets(k: int, bound: int) -> str | None:
    """For every element of ``Z^k`` within bound compare the monad's target and sources
    with the geometric target and sources of the corresponding opetope."""
    if k < 2:
        raise ValueError("k must be at least 2")
    M = tower_monad(k - 1)
    phimemo: dict = {}
    psimemo: dict = {}
    for z in M.ops(bound):
        X, amap = _psi(z, k, psimemo)
        want_t = M.tgt(z)
        got_t = opetope_to_term(target(X), phimemo)
        if got_t != want_t:
            return f"target mismatch for {z!r}: {got_t!r} != {want_t!r}"
        for e in M.fibre(z):
            got = opetope_to_term(source(X, amap[e]), phimemo)
            if got != M.src(z, e):
                return f"source mismatch for {z!r} at {e!r}"
        if len(amap) != len(X.top.dots):
            return f"sphere count mismatch for {z!r}"
    return None


# trees over the slice monad versus constellations over the base monad

class _Carrier:
    """An M-tree given as a named tree, with per-element types and operations."""

    def __init__(self, M: PolyMonad, A):
        self.M = M
        self.A = A
        self.name: dict = {}  # address -> element name
        self.addr: dict = {}
        self.op: dict = {}  # dot name -> operation
        self.etype: dict = {}  # element name -> type of its edge
        parent: dict = {}
        dots = []

        def walk(t, up, addr, ty):
            nm = f"d{len(self.name)}" if t[0] == "n" else f"l{len(self.name)}"
            self.name[addr] = nm
            self.addr[nm] = addr
            parent[nm] = up
            self.etype[nm] = ty
            if t[0] == "n":
                dots.append(nm)
                self.op[nm] = t[1]
                for e, c in t[2]:
                    walk(c, nm, addr + (e,), M.src(t[1], e))

        walk(A, None, (), A[1] if A[0] == "u" else M.tgt(A[1]))
        self.tree = Tree(parent, dots)


def _constellation_key(car: _Carrier, c: Constellation):
    sub = c.subdivided

    def code(v):
        if v in car.op:
            return ("B", car.addr[v])
        if v in sub.white_dots:
            e, i = sub.edge_of(v)
            return ("W", car.addr[e], i)
        return ("S", tuple(sorted((code(x) for x in c.nesting.children(v)), key=repr)))

    return (car.A, code(c.nesting.root))


def _layer_terms(bd: BaezDolan, car: _Carrier, c: Constellation):
    """Sphere -> (term of its layer, {fibre element of the layer: child}).

    A child is a carrier dot, a white dot or a sphere of the nesting.
    """
    M = bd.M
    tt = c.expanded
    N = c.nesting
    whites = c.subdivided.white_dots
    unit_in = {w: M.fibre(M.unit(car.etype[c.subdivided.edge_of(w)[0]]))[0] for w in whites}

    def etype(v):
        return car.etype[c.subdivided.edge_of(v)[0]] if v in whites else car.etype[v]

    def above(v, e):
        # element of T' sitting on input e of dot v
        if v in whites:
            (u,) = tt.children(v)
            return u
        nm = car.name[car.addr[v] + (e,)]
        ws = c.subdivided.whites.get(nm)
        return ws[0] if ws else nm

    def span(members, v, path, lm):
        """Term of the region ``members`` read from element ``v``; leaf paths go to ``lm``."""
        if v not in members:
            lm[path] = v
            return ("u", etype(v))
        if v in whites:
            op = M.unit(etype(v))
        else:
            op = car.op[v]
        kids = tuple((e, span(members, above(v, e), path + (e,), lm)) for e in M.fibre(op))
        return ("n", op, kids)

    regions: dict = {}

    def region(y):
        if y not in regions:
            members = N.minimal_below(y)
            lm: dict = {}
            t = span(members, kernel_root(tt, members), (), lm)
            op, leafmap = bd.contract(t)
            regions[y] = (op, {e: lm[p] for e, p in leafmap.items()})
        return regions[y]

    out = {}
    for x in N.dots:
        if N.is_null(x):
            continue
        content = N.minimal_below(x)
        owner = {}
        for y in N.children(x):
            if y in N.dots and not N.is_null(y):
                for v in N.minimal_below(y):
                    owner[v] = y
            else:
                owner[y] = y
        slots: dict = {}

        def build(v, addr):
            if v not in content:
                return ("u", etype(v))
            y = owner[v]
            slots[addr] = y
            if y in car.op:
                op = car.op[y]
                ins = {e: above(y, e) for e in M.fibre(op)}
            elif y in whites:
                op = M.unit(etype(y))
                ins = {unit_in[y]: above(y, None)}
            else:
                op, ins = region(y)
            return ("n", op, tuple((e, build(ins[e], addr + (e,))) for e in M.fibre(op)))

        out[x] = (build(kernel_root(tt, content), ()), slots)
    return out


def constellation_to_slice_tree(M: PolyMonad, A, c: Constellation, bd: BaezDolan | None = None):
    """Read a constellation on the M-tree ``A`` as a tree over the slice monad."""
    bd = bd or BaezDolan(M)
    car = _Carrier(M, A)
    return _to_slice(bd, car, c)


def _to_slice(bd, car, c):
    N = c.nesting
    if not N.dots:
        return ("u", car.op[N.root])
    layers = _layer_terms(bd, car, c)

    def tree(x):
        if N.is_null(x):
            return ("n", ("u", car.etype[c.subdivided.edge_of(x)[0]]), ())
        term, slots = layers[x]
        kids = []
        for a in bd.fibre(term):
            y = slots[a]
            if y in car.op:
                kids.append((a, ("u", car.op[y])))
            else:
                kids.append((a, tree(y)))
        return ("n", term, tuple(kids))

    return tree(N.root)


def slice_tree_to_constellation(M: PolyMonad, W, bd: BaezDolan | None = None):
    """Substitute every layer of ``W`` into its parent, leaving the spheres behind.

    Returns ``(A, constellation)`` with the carrier named as in
    :class:`_Carrier` and spheres named ``s0, s1, ...``.
    """
    bd = bd or BaezDolan(M)
    if W[0] == "u":
        b = W[1]
        A = bd.unit(b)
        car = _Carrier(M, A)
        d = car.name[()]
        return A, car, Constellation(car.tree, {}, Tree({d: None}))
    nest: dict = {}
    spheres = count()
    blacks = count()

    def strip(t):
        if t[0] == "u":
            return t
        return ("n", t[1], tuple((e, strip(ch)) for e, ch in t[2]))

    def put(t, tag, U, lm):
        if t[0] == "u":
            return t
        if t[3] == tag:
            repl = {lm[e]: ch for e, ch in t[2]}
            return graft(U, repl, ())
        return ("n", t[1], tuple((e, put(ch, tag, U, lm)) for e, ch in t[2]), t[3])

    def graft(u, repl, path):
        if u[0] == "u":
            return repl[path]
        return ("n", u[1], tuple((e, graft(ch, repl, path + (e,))) for e, ch in u[2]), u[3])

    def tagged(t, addr):
        if t[0] == "u":
            return t
        return ("n", t[1], tuple((e, tagged(ch, addr + (e,))) for e, ch in t[2]), ("slot", addr))

    def build(w, up):
        s = f"s{next(spheres)}"
        nest[s] = up
        L = w[1]
        if L[0] == "u":
            i = L[1]
            u = M.unit(i)
            return ("n", u, ((M.fibre(u)[0], ("u", i)),), ("W", s))
        T = tagged(L, ())
        for a, kid in w[2]:
            if kid[0] == "u":
                nm = f"b{next(blacks)}"
                nest[nm] = s
                T = _retag(T, ("slot", a), ("B", nm))
            else:
                U = build(kid, s)
                r = bd.contract(strip(U))
                if r is None:
                    raise OpetopeError("layer does not contract")
                T = put(T, ("slot", a), U, r[1])
        return T

    Tp = build(W, None)
    # read off carrier, whites and the black-dot names
    whites: dict = {}
    black_at: dict = {}

    def walk(t, addr, pending):
        if t[0] == "u":
            whites[addr] = pending
            return t
        kind, nm = t[3]
        if kind == "W":
            (e, ch), = t[2]
            return walk(ch, addr, pending + [nm])
        whites[addr] = pending
        black_at[nm] = addr
        return ("n", t[1], tuple((e, walk(ch, addr + (e,), [])) for e, ch in t[2]))

    A = walk(Tp, (), [])
    car = _Carrier(M, A)
    ren = {nm: car.name[a] for nm, a in black_at.items()}
    parent = {ren.get(x, x): p for x, p in nest.items()}
    wmap = {car.name[a]: ws for a, ws in whites.items() if ws}
    null = {w for ws in wmap.values() for w in ws}
    dots = {p for p in parent.values() if p is not None} | null
    return A, car, Constellation(car.tree, wmap, Tree(parent, dots))


def _retag(t, old, new):
    if t[0] == "u":
        return t
    if t[3] == old:
        return ("n", t[1], t[2], new)
    return ("n", t[1], tuple((e, _retag(ch, old, new)) for e, ch in t[2]), t[3])


def slice_twice_check(M: PolyMonad, bound: int, max_dots: int | None = None) -> str | None:
    """Check exhaustively, within bound, that trees over ``M+`` and constellations over ``M`` match.

    Route one enumerates trees ``W`` over the slice monad and substitutes
    layers into each other; route two enumerates constellations on every
    M-tree and reads their layers.  Both maps must be mutually inverse,
    the carrier must be the composite of ``W`` and the leaves of ``W``
    must be the dots of the carrier.  Returns ``None`` or a counterexample.
    """
    k = bound if max_dots is None else max_dots
    bd = BaezDolan(M)
    bdd = BaezDolan(bd)
    allowed = bd.op_set(bound)
    side_a = [W for W in p_trees(bd.functor(bound), k) if bdd.tgt(W) in allowed]
    set_a = set(side_a)
    side_b = {}
    for A in bd.ops(bound):
        car = _Carrier(M, A)
        for c in enumerate_constellations(car.tree, k):
            layers = _layer_terms(bd, car, c)
            if not all(t in allowed for t, _ in layers.values()):
                continue
            key = _constellation_key(car, c)
            if key in side_b:
                return f"duplicate constellation {key!r}"
            side_b[key] = (car, c)
    if len(set_a) != len(side_b):
        return f"size mismatch: {len(set_a)} slice trees, {len(side_b)} constellations"
    for W in side_a:
        A, car, c = slice_tree_to_constellation(M, W, bd)
        v = validate_constellation(c)
        if v:
            return f"substitution of {W!r} gives an invalid constellation: {v[0]}"
        if A != bdd.tgt(W):
            return f"carrier of {W!r} is not its composite"
        key = _constellation_key(car, c)
        if key not in side_b:
            return f"constellation from {W!r} is not enumerated"
        if _to_slice(bd, car, c) != W:
            return f"layers of the substituted {W!r} do not give it back"
        leaves = Counter(repr(x) for x in _leaf_types(W))
        if leaves != Counter(repr(car.op[d]) for d in car.op):
            return f"leaves of {W!r} do not match the carrier dots"
    for key, (car, c) in side_b.items():
        W = _to_slice(bd, car, c)
        if W not in set_a:
            return f"layers of constellation {key!r} give a tree outside the bound"
        if bdd.tgt(W) != car.A:
            return f"composite of layers of {key!r} is not the carrier"
        _, car2, c2 = slice_tree_to_constellation(M, W, bd)
        if _constellation_key(car2, c2) != key:
            return f"round trip of constellation {key!r} fails"
    return None


def _leaf_types(W):
    if W[0] == "u":
        return [W[1]]
    out = []
    for _, ch in W[2]:
        if ch[0] == "u":
            out.append(ch[1])
        else:
            out.extend(_leaf_types(ch))
    return out
