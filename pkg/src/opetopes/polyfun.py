"""Polynomial functors and monads over finite sets, their trees, and the slice construction.

Terms for trees over a polynomial monad are nested tuples:

* ``("u", i)`` is the unit tree of type ``i`` (no dots);
* ``("n", b, ((e, child), ...))`` is a dot decorated by the operation ``b``,
  with one child per element ``e`` of the fibre of ``b``, listed in fibre order.

Dot *addresses* are tuples of fibre elements read from the root; leaf paths
are addresses too.  Monads here are possibly infinite; every enumeration
takes an explicit size bound, while composition itself is always total.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from functools import lru_cache
from itertools import product

__all__ = [
    "PolyFunctor",
    "identity_functor",
    "free_monoid_functor",
    "evaluate",
    "compose",
    "PolyMonad",
    "IdentityMonad",
    "FreeMonoidMonad",
    "TableMonad",
    "BaezDolan",
    "baez_dolan",
    "check_monad_laws",
    "p_trees",
    "unit_term",
    "node",
    "dot_count",
    "dot_addresses",
    "leaf_paths",
    "subterm",
    "tower_monad",
    "opetope_tower",
    "opetopes_of_dim",
]


class PolyFunctor:
    """``I <- E -> B -> J`` with the fibres of ``E -> B`` listed explicitly."""

    def __init__(self, I: Iterable, J: Iterable, fibres: Mapping, src: Mapping, tgt: Mapping):
        self.I = tuple(I)
        self.J = tuple(J)
        self.fibres = {b: tuple(es) for b, es in fibres.items()}
        self.src = dict(src)  # (b, e) -> i
        self.tgt = dict(tgt)  # b -> j
        for b, es in self.fibres.items():
            for e in es:
                if self.src.get((b, e)) not in self.I:
                    raise ValueError(f"fibre element {e} of {b} has no input type")
            if self.tgt.get(b) not in self.J:
                raise ValueError(f"operation {b} has no output type")

    @property
    def B(self):
        return tuple(self.fibres)

    @property
    def E(self):
        return tuple((b, e) for b, es in self.fibres.items() for e in es)

    def __repr__(self):
        return f"PolyFunctor(|I|={len(self.I)}, |B|={len(self.fibres)}, |E|={len(self.E)})"


def identity_functor(I=("*",)) -> PolyFunctor:
    return PolyFunctor(I, I, {i: (0,) for i in I}, {(i, 0): i for i in I}, {i: i for i in I})


def free_monoid_functor(max_arity: int) -> PolyFunctor:
    fib = {n: tuple(range(n)) for n in range(max_arity + 1)}
    return PolyFunctor(("*",), ("*",), fib, {(n, e): "*" for n in fib for e in fib[n]},
                       {n: "*" for n in fib})


def evaluate(P: PolyFunctor, X: Mapping) -> dict:
    """Decorated bouquets: ``(b, assignment)`` pairs, mapped to their output type."""
    by_type: dict = {}
    for x, i in X.items():
        by_type.setdefault(i, []).append(x)
    for xs in by_type.values():
        xs.sort(key=repr)
    out = {}
    for b, es in P.fibres.items():
        choices = [by_type.get(P.src[(b, e)], []) for e in es]
        for assignment in product(*choices):
            out[(b, assignment)] = P.tgt[b]
    return out


def compose(P: PolyFunctor, Q: PolyFunctor) -> PolyFunctor:
    """``P`` after ``Q``: bouquets of bouquets.  Needs ``P.I`` to equal ``Q.J``."""
    if set(P.I) != set(Q.J):
        raise ValueError("index mismatch: inputs of the outer functor differ from outputs of the inner one")
    by_tgt: dict = {}
    for c, j in Q.tgt.items():
        by_tgt.setdefault(j, []).append(c)
    fibres, src, tgt = {}, {}, {}
    for b, es in P.fibres.items():
        for cs in product(*[by_tgt.get(P.src[(b, e)], []) for e in es]):
            key = (b, cs)
            fib = tuple((e, f) for e, c in zip(es, cs) for f in Q.fibres[c])
            fibres[key] = fib
            for e, c in zip(es, cs):
                for f in Q.fibres[c]:
                    src[(key, (e, f))] = Q.src[(c, f)]
            tgt[key] = P.tgt[b]
    return PolyFunctor(Q.I, P.J, fibres, src, tgt)


# trees

def unit_term(i):
    return ("u", i)


def node(fibre_order: Iterable, b, children: Mapping):
    return ("n", b, tuple((e, children[e]) for e in fibre_order))


def dot_count(t) -> int:
    if t[0] == "u":
        return 0
    return 1 + sum(dot_count(c) for _, c in t[2])


def dot_addresses(t, prefix=()) -> list:
    """Dot addresses in preorder."""
    if t[0] == "u":
        return []
    out = [prefix]
    for e, c in t[2]:
        out += dot_addresses(c, prefix + (e,))
    return out


def leaf_paths(t, prefix=()) -> list:
    if t[0] == "u":
        return [prefix]
    out = []
    for e, c in t[2]:
        out += leaf_paths(c, prefix + (e,))
    return out


def subterm(t, addr):
    for e in addr:
        t = dict(t[2])[e]
    return t


def p_trees(P: PolyFunctor, max_dots: int, root_types: Iterable | None = None) -> list:
    """Every P-tree with at most ``max_dots`` dots, unit trees included."""
    ops_by_tgt: dict = {}
    for b in P.fibres:
        ops_by_tgt.setdefault(P.tgt[b], []).append(b)
    memo: dict = {}

    def exact(i, k):
        if (i, k) in memo:
            return memo[(i, k)]
        out = []
        if k == 0:
            out.append(("u", i))
        else:
            for b in ops_by_tgt.get(i, ()):
                es = P.fibres[b]
                for split in _compositions(k - 1, len(es)):
                    parts = [exact(P.src[(b, e)], m) for e, m in zip(es, split)]
                    for kids in product(*parts):
                        out.append(("n", b, tuple(zip(es, kids))))
        memo[(i, k)] = out
        return out

    types = P.J if root_types is None else tuple(root_types)
    return [t for i in types for k in range(max_dots + 1) for t in exact(i, k)]


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# monads

class PolyMonad:
    """Interface for polynomial monads with possibly infinite operation sets.

    Subclasses provide ``types``, ``ops``, ``fibre``, ``src``, ``tgt``,
    ``unit``, ``compose`` and ``reindex``.  ``compose(b, e, c)`` substitutes
    ``c`` into input ``e`` of ``b`` (``None`` when undefined); ``reindex``
    describes the fibre of the result, sending each element to
    ``("outer", e')`` or ``("inner", e'')``.
    """

    name = "monad"

    def types(self, bound):
        raise NotImplementedError

    def ops(self, bound):
        raise NotImplementedError

    def fibre(self, b):
        raise NotImplementedError

    def src(self, b, e):
        raise NotImplementedError

    def tgt(self, b):
        raise NotImplementedError

    def unit(self, i):
        raise NotImplementedError

    def compose(self, b, e, c):
        raise NotImplementedError

    def reindex(self, b, e, c):
        raise NotImplementedError

    def ops_by_target(self, bound) -> dict:
        key = ("_by_tgt", bound)
        cache = self.__dict__.setdefault("_cache", {})
        if key not in cache:
            out: dict = {}
            for b in self.ops(bound):
                out.setdefault(self.tgt(b), []).append(b)
            cache[key] = out
        return cache[key]

    def op_set(self, bound) -> frozenset:
        key = ("_set", bound)
        cache = self.__dict__.setdefault("_cache", {})
        if key not in cache:
            cache[key] = frozenset(self.ops(bound))
        return cache[key]

    def functor(self, bound) -> PolyFunctor:
        ops = self.ops(bound)
        return PolyFunctor(self.types(bound), self.types(bound),
                           {b: self.fibre(b) for b in ops},
                           {(b, e): self.src(b, e) for b in ops for e in self.fibre(b)},
                           {b: self.tgt(b) for b in ops})

    def trees(self, bound, max_dots=None):
        """Trees over this monad: dots from ``ops(bound)``, at most ``max_dots`` dots."""
        return p_trees(self.functor(bound), bound if max_dots is None else max_dots)

    def __repr__(self):
        return self.name


class IdentityMonad(PolyMonad):
    name = "Id"

    def types(self, bound):
        return ["*"]

    def ops(self, bound):
        return ["*"]

    def fibre(self, b):
        return (0,)

    def src(self, b, e):
        return "*"

    def tgt(self, b):
        return "*"

    def unit(self, i):
        return "*"

    def compose(self, b, e, c):
        return "*"

    def reindex(self, b, e, c):
        return {0: ("inner", 0)}


class FreeMonoidMonad(PolyMonad):
    """Operations are arities; substitution adds arities."""

    name = "FreeMonoid"

    def types(self, bound):
        return ["*"]

    def ops(self, bound):
        return list(range(bound + 1))

    def fibre(self, b):
        return tuple(range(b))

    def src(self, b, e):
        return "*"

    def tgt(self, b):
        return "*"

    def unit(self, i):
        return 1

    def compose(self, b, e, c):
        return b + c - 1

    def reindex(self, b, e, c):
        out = {}
        for j in range(b + c - 1):
            if j < e:
                out[j] = ("outer", j)
            elif j < e + c:
                out[j] = ("inner", j - e)
            else:
                out[j] = ("outer", j - c + 1)
        return out


class TableMonad(PolyMonad):
    """A finite partial monad given by explicit tables (for truncations and fault injection)."""

    def __init__(self, functor: PolyFunctor, unit: Mapping, comp: Mapping, reidx: Mapping, name="table"):
        self.P = functor
        self._unit = dict(unit)
        self.comp = dict(comp)
        self.reidx = dict(reidx)
        self.name = name

    @classmethod
    def truncate(cls, M: PolyMonad, bound) -> "TableMonad":
        P = M.functor(bound)
        comp, reidx = {}, {}
        ops = set(P.fibres)
        for b in P.fibres:
            for e in P.fibres[b]:
                for c in P.fibres:
                    if P.tgt[c] != P.src[(b, e)]:
                        continue
                    r = M.compose(b, e, c)
                    if r in ops:
                        comp[(b, e, c)] = r
                        reidx[(b, e, c)] = M.reindex(b, e, c)
        return cls(P, {i: M.unit(i) for i in P.I}, comp, reidx, name=f"{M.name}|{bound}")

    def types(self, bound):
        return list(self.P.I)

    def ops(self, bound):
        return list(self.P.fibres)

    def fibre(self, b):
        return self.P.fibres[b]

    def src(self, b, e):
        return self.P.src[(b, e)]

    def tgt(self, b):
        return self.P.tgt[b]

    def unit(self, i):
        return self._unit[i]

    def compose(self, b, e, c):
        return self.comp.get((b, e, c))

    def reindex(self, b, e, c):
        return self.reidx.get((b, e, c))


def check_monad_laws(M: PolyMonad, bound) -> str | None:
    """Exhaustively check unit and associativity laws; return a description of the first failure."""
    ops = list(M.ops(bound))
    by_tgt: dict = {}
    for c in ops:
        by_tgt.setdefault(M.tgt(c), []).append(c)

    def comp(b, e, c):
        r = M.compose(b, e, c)
        if r is None:
            return None, None
        return r, M.reindex(b, e, c)

    for i in M.types(bound):
        u = M.unit(i)
        if M.tgt(u) != i or len(M.fibre(u)) != 1 or M.src(u, M.fibre(u)[0]) != i:
            return f"unit of {i!r} is not a unary operation of type {i!r}"
    for b in ops:
        u = M.unit(M.tgt(b))
        r, _ = comp(u, M.fibre(u)[0], b)
        if r is not None and r != b:
            return f"left unit law fails for {b!r}"
        for e in M.fibre(b):
            r, _ = comp(b, e, M.unit(M.src(b, e)))
            if r is not None and r != b:
                return f"right unit law fails for {b!r} at {e!r}"
        for e in M.fibre(b):
            for c in by_tgt.get(M.src(b, e), ()):
                bc, ix = comp(b, e, c)
                if bc is None:
                    continue
                if M.tgt(bc) != M.tgt(b):
                    return f"composite {b!r} o_{e!r} {c!r} has the wrong target"
                fib = M.fibre(bc)
                if sorted(map(repr, ix)) != sorted(map(repr, fib)):
                    return f"reindexing of {b!r} o_{e!r} {c!r} does not cover its fibre"
                expect = sorted([("outer", x) for x in M.fibre(b) if x != e]
                                + [("inner", y) for y in M.fibre(c)], key=repr)
                if sorted(ix.values(), key=repr) != expect:
                    return f"reindexing of {b!r} o_{e!r} {c!r} is not a bijection"
                for x, (side, y) in ix.items():
                    want = M.src(b, y) if side == "outer" else M.src(c, y)
                    if M.src(bc, x) != want:
                        return f"input {x!r} of {b!r} o_{e!r} {c!r} has the wrong type"
                inv = {v: k for k, v in ix.items()}
                # sequential: substitute d into an input coming from c
                for f in M.fibre(c):
                    for d in by_tgt.get(M.src(c, f), ()):
                        left, _ = comp(bc, inv[("inner", f)], d)
                        cd, _ = comp(c, f, d)
                        if left is None or cd is None:
                            continue
                        right, _ = comp(b, e, cd)
                        if right is not None and left != right:
                            return (f"associativity fails: ({b!r} o_{e!r} {c!r}) o {d!r} "
                                    f"!= {b!r} o_{e!r} ({c!r} o_{f!r} {d!r})")
                # parallel: substitute d into another input of b
                for g in M.fibre(b):
                    if g == e:
                        continue
                    for d in by_tgt.get(M.src(b, g), ()):
                        left, _ = comp(bc, inv[("outer", g)], d)
                        bd, ix2 = comp(b, g, d)
                        if left is None or bd is None:
                            continue
                        inv2 = {v: k for k, v in ix2.items()}
                        right, _ = comp(bd, inv2[("outer", e)], c)
                        if right is not None and left != right:
                            return (f"associativity fails: substituting {c!r} at {e!r} and "
                                    f"{d!r} at {g!r} into {b!r} depends on the order")
    return None


class BaezDolan(PolyMonad):
    """The slice monad of ``M``: operations are M-trees, composed by substituting into dots."""

    def __init__(self, M: PolyMonad):
        self.M = M
        self.name = f"BD({M.name})"
        self._contract: dict = {}
        self._fibres: dict = {}

    def types(self, bound):
        return list(self.M.ops(bound))

    def ops(self, bound):
        cache = self.__dict__.setdefault("_cache", {})
        key = ("ops", bound)
        if key not in cache:
            cache[key] = self._bounded_ops(bound)
        return cache[key]

    def _bounded_ops(self, bound):
        """M-trees with at most ``bound`` dots from ``M.ops(bound)`` whose contraction is in bound.

        Subtrees are grouped by their contraction, so the composite of a dot
        with its children is computed once per combination of classes.
        """
        M = self.M
        by_tgt = M.ops_by_target(bound)
        classes: dict = {}  # (type, dots) -> {contraction: [(op, ((e, child_key), ...))]}

        def cls(i, k):
            if (i, k) in classes:
                return classes[(i, k)]
            out: dict = {}
            if k == 0:
                out[M.unit(i)] = [None]
            else:
                for b in by_tgt.get(i, ()):
                    es = M.fibre(b)
                    for split in _compositions(k - 1, len(es)):
                        options = [list(cls(M.src(b, e), m)) for e, m in zip(es, split)]
                        for combo in product(*options):
                            op = self._fold(b, es, split, combo)
                            kids = tuple((e, (M.src(b, e), m, c)) for e, m, c in zip(es, split, combo))
                            out.setdefault(op, []).append((b, kids))
            classes[(i, k)] = out
            return out

        memo: dict = {}

        def expand(i, k, op):
            key = (i, k, op)
            if key in memo:
                return memo[key]
            if k == 0:
                res = [("u", i)]
            else:
                res = []
                for b, kids in classes[(i, k)][op]:
                    parts = [expand(*ck) for _, ck in kids]
                    for chosen in product(*parts):
                        res.append(("n", b, tuple((e, t) for (e, _), t in zip(kids, chosen))))
            memo[key] = res
            return res

        allowed = M.op_set(bound)
        out = []
        for i in M.types(bound):
            for k in range(bound + 1):
                for op in cls(i, k):
                    if op in allowed:
                        out.extend(expand(i, k, op))
        return out

    def _fold(self, b, es, split, combo):
        """Contraction of a dot ``b`` whose children contract to ``combo``."""
        M = self.M
        op = b
        cur = {e: e for e in M.fibre(b)}  # current input -> original child edge
        for e, m, c in zip(es, split, combo):
            if m == 0:
                continue
            if c is None:
                return None
            x = next(k for k, v in cur.items() if v == e)
            ix = M.reindex(op, x, c)
            op = M.compose(op, x, c)
            if op is None:
                return None
            cur = {y: (cur[z] if side == "outer" else None) for y, (side, z) in ix.items()}
        return op

    def fibre(self, t):
        f = self._fibres.get(t)
        if f is None:
            f = self._fibres[t] = tuple(dot_addresses(t))
        return f

    def src(self, t, addr):
        return subterm(t, addr)[1]

    def tgt(self, t):
        """The composite of all dots; ``None`` if some composition is undefined."""
        r = self.contract(t)
        return None if r is None else r[0]

    def unit(self, b):
        M = self.M
        return ("n", b, tuple((e, ("u", M.src(b, e))) for e in M.fibre(b)))

    def contract(self, t):
        """``(op, leafmap)``: the composite operation and, per input, the leaf path it came from."""
        if t in self._contract:
            return self._contract[t]
        M = self.M
        if t[0] == "u":
            u = M.unit(t[1])
            res = (u, {M.fibre(u)[0]: ()})
        else:
            op = t[1]
            cur = {e: (e,) for e in M.fibre(op)}
            for e, child in t[2]:
                if child[0] == "u":
                    continue
                sub = self.contract(child)
                if sub is None:
                    op = None
                    break
                c_op, c_lm = sub
                x = next(k for k, v in cur.items() if v == (e,))
                new_op = M.compose(op, x, c_op)
                if new_op is None:
                    op = None
                    break
                ix = M.reindex(op, x, c_op)
                nxt = {}
                for y, (side, z) in ix.items():
                    nxt[y] = cur[z] if side == "outer" else (e,) + c_lm[z]
                op, cur = new_op, nxt
            res = None if op is None else (op, cur)
        self._contract[t] = res
        return res

    def compose(self, t, addr, u):
        if self.tgt(u) != self.src(t, addr):
            return None
        return _substitute(self, t, addr, u)

    def reindex(self, t, addr, u):
        _, lm = self.contract(u)
        out = {}
        n = len(addr)
        for x in self.fibre(t):
            if x == addr:
                continue
            if x[:n] == addr:
                out[addr + lm[x[n]] + x[n + 1:]] = ("outer", x)
            else:
                out[x] = ("outer", x)
        for y in self.fibre(u):
            out[addr + y] = ("inner", y)
        return out


def _substitute(bd: BaezDolan, t, addr, u):
    if not addr:
        _, lm = bd.contract(u)
        repl = {lm[e]: child for e, child in t[2]}
        return _graft(u, repl, ())
    head = addr[0]
    return ("n", t[1], tuple((e, _substitute(bd, c, addr[1:], u) if e == head else c)
                             for e, c in t[2]))


def _graft(u, repl, path):
    if u[0] == "u":
        return repl[path]
    return ("n", u[1], tuple((e, _graft(c, repl, path + (e,))) for e, c in u[2]))


def baez_dolan(M: PolyMonad) -> BaezDolan:
    return BaezDolan(M)


@lru_cache(maxsize=None)
def tower_monad(k: int) -> PolyMonad:
    """``P^0`` is the identity monad and ``P^(k+1)`` is the slice of ``P^k``."""
    if k == 0:
        return IdentityMonad()
    return BaezDolan(tower_monad(k - 1))


def opetope_tower(k: int, bound: int) -> list[dict]:
    """Stages ``P^0 .. P^k`` within ``bound``.

    Each stage records its monad, its types, its operations, the target of
    every operation and the input types of every operation in fibre order.
    """
    out = []
    for j in range(k + 1):
        M = tower_monad(j)
        ops = list(M.ops(bound))
        out.append({"monad": M, "types": list(M.types(bound)), "ops": ops,
                    "target": {b: M.tgt(b) for b in ops},
                    "sources": {b: [M.src(b, e) for e in M.fibre(b)] for b in ops}})
    return out


def opetopes_of_dim(k: int, bound: int) -> list:
    """The truncated set of k-dimensional opetopes in tree form: ``types(P^k)``."""
    return list(tower_monad(k).types(bound))
