"""Finite rooted non-planar trees with boundary.

A tree is stored as a parent map over its *elements*.  Every element is
either a dot or a leaf; an element's parent is a dot, or ``None`` for the
single element sitting on the root edge.  Edges are named by their upper
element, so the root edge carries the root element's name and the leaf
edges carry the leaf names.  The unit tree is a lone leaf with no dots.

Subdivisions place ordered white dots on edges (root to leaf).  Expanding
a subdivision gives an ordinary tree ``T'`` where each white dot is a
unary dot; kernels are then connected sets of dots of ``T'``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from itertools import permutations, product

__all__ = [
    "Tree",
    "SubdividedTree",
    "unit_tree",
    "validate_tree",
    "canonical_code",
    "find_isomorphism",
    "iter_isomorphisms",
    "is_linear",
    "is_kernel",
    "kernel_root",
    "kernel_span",
    "collapse",
    "fresh_name",
]


class Tree:
    """Rooted tree given by ``parent`` (element -> dot or None) and the set of dots.

    Instances are treated as immutable.  Construction does not validate;
    call :func:`validate_tree` or :meth:`check` for that.
    """

    __slots__ = ("parent", "dots", "leaves", "_children", "_hash")

    def __init__(self, parent: Mapping[str, str | None], dots: Iterable[str] = ()):
        self.parent = dict(parent)
        self.dots = frozenset(dots)
        self.leaves = frozenset(self.parent) - self.dots
        ch: dict[str, list[str]] = {d: [] for d in self.dots}
        for x, p in self.parent.items():
            if p is not None:
                ch.setdefault(p, []).append(x)
        self._children = {k: tuple(sorted(v)) for k, v in ch.items()}
        self._hash = None

    # construction helpers

    @classmethod
    def from_nested(cls, spec) -> "Tree":
        """Build from nested ``(name, [children...])`` tuples; a bare string is a leaf.

        ``("r", [])`` is a null-dot; a bare string at top level is the unit tree.
        """
        parent: dict[str, str | None] = {}
        dots: set[str] = set()

        def walk(node, up):
            if isinstance(node, str):
                parent[node] = up
                return
            name, kids = node
            parent[name] = up
            dots.add(name)
            for k in kids:
                walk(k, name)

        walk(spec, None)
        return cls(parent, dots)

    def to_nested(self, x: str | None = None):
        if x is None:
            x = self.root
        if x not in self.dots:
            return x
        return (x, [self.to_nested(c) for c in self.children(x)])

    # queries

    @property
    def elements(self) -> frozenset:
        return frozenset(self.parent)

    @property
    def root(self) -> str:
        roots = [x for x, p in self.parent.items() if p is None]
        if len(roots) != 1:
            raise ValueError("tree does not have a single root edge")
        return roots[0]

    def children(self, x: str) -> tuple:
        return self._children.get(x, ())

    def is_null(self, x: str) -> bool:
        return x in self.dots and not self._children.get(x)

    @property
    def null_dots(self) -> frozenset:
        return frozenset(d for d in self.dots if not self._children.get(d))

    @property
    def is_unit(self) -> bool:
        return not self.dots

    def path_to_root(self, x: str) -> list:
        out = [x]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out

    def leq(self, a: str, b: str) -> bool:
        """Partial order: ``a <= b`` iff ``b`` lies on the path from ``a`` to the root."""
        while a is not None:
            if a == b:
                return True
            a = self.parent[a]
        return False

    def descendants(self, x: str) -> list:
        """All elements at or above ``x`` (``x`` included), in preorder."""
        out, stack = [], [x]
        while stack:
            y = stack.pop()
            out.append(y)
            stack.extend(reversed(self.children(y)))
        return out

    def minimal_below(self, x: str) -> frozenset:
        """Leaves and null-dots in the subtree at ``x``."""
        return frozenset(y for y in self.descendants(x) if not self.children(y))

    def subtree(self, x: str) -> "Tree":
        keep = self.descendants(x)
        parent = {y: self.parent[y] for y in keep}
        parent[x] = None
        return Tree(parent, [y for y in keep if y in self.dots])

    def depth(self, x: str) -> int:
        return len(self.path_to_root(x)) - 1

    def rename(self, m: Mapping[str, str]) -> "Tree":
        g = lambda y: m.get(y, y)  # noqa: E731
        return Tree({g(x): (None if p is None else g(p)) for x, p in self.parent.items()},
                    [g(d) for d in self.dots])

    def check(self) -> "Tree":
        v = validate_tree(self)
        if v:
            from .errors import ValidationError
            raise ValidationError(v)
        return self

    def __eq__(self, other):
        return isinstance(other, Tree) and self.dots == other.dots and self.parent == other.parent

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dots, frozenset(self.parent.items())))
        return self._hash

    def __repr__(self):
        try:
            return f"Tree({self.to_nested()!r})"
        except ValueError:
            return f"Tree(parent={self.parent!r}, dots={sorted(self.dots)!r})"


def unit_tree(name: str) -> Tree:
    return Tree({name: None})


def validate_tree(t: Tree) -> list[str]:
    """Return a list of violations; an empty list means the tree is valid."""
    out = []
    roots = sorted(x for x, p in t.parent.items() if p is None)
    if len(roots) > 1:
        out.append(f"multiple root edges: {', '.join(roots)}")
    if not t.parent:
        out.append("empty tree: no root edge")
    for x, p in sorted(t.parent.items(), key=lambda kv: kv[0]):
        if p is None:
            continue
        if p not in t.parent:
            out.append(f"element {x}: parent {p} is not an element")
        elif p not in t.dots:
            out.append(f"element {x}: parent {p} is a leaf")
    for d in t.dots - set(t.parent):
        out.append(f"dot {d} has no outgoing edge")
    # follow parent pointers; revisiting the current path means a cycle
    state: dict[str, int] = {}
    for x in sorted(t.parent):
        path, cur = [], x
        while cur is not None and cur in t.parent and cur not in state:
            state[cur] = 1
            path.append(cur)
            cur = t.parent[cur]
        if cur is not None and state.get(cur) == 1:
            out.append(f"not acyclic: cycle through {cur}")
        for y in path:
            state[y] = 2
    return list(dict.fromkeys(out))


def _codes(t: Tree) -> dict:
    """Bottom-up AHU codes for every element."""
    code: dict[str, str] = {}
    for x in sorted(t.parent, key=t.depth, reverse=True):
        if x not in t.dots:
            code[x] = "L"
        else:
            code[x] = "(" + "".join(sorted(code[c] for c in t.children(x))) + ")"
    return code


def canonical_code(t: Tree) -> str:
    """Name-independent code; equal iff the trees are isomorphic."""
    return _codes(t)[t.root]


def iter_isomorphisms(a: Tree, b: Tree):
    """Yield every isomorphism ``a -> b`` as a dict on elements."""
    ca, cb = _codes(a), _codes(b)
    ra, rb = a.root, b.root
    if ca[ra] != cb[rb]:
        return

    def match(x, y):
        # all ways of matching the subtree at x onto the subtree at y
        kx, ky = a.children(x), b.children(y)
        groups: dict[str, tuple[list, list]] = {}
        for c in kx:
            groups.setdefault(ca[c], ([], []))[0].append(c)
        for c in ky:
            groups.setdefault(cb[c], ([], []))[1].append(c)
        pairings = []
        for xs, ys in groups.values():
            pairings.append([list(zip(xs, perm)) for perm in permutations(ys)])
        for choice in product(*pairings):
            pairs = [p for group in choice for p in group]
            subs = [list(match(u, v)) for u, v in pairs]
            for combo in product(*subs):
                m = {x: y}
                for part in combo:
                    m.update(part)
                yield m

    yield from match(ra, rb)


def find_isomorphism(a: Tree, b: Tree) -> dict | None:
    return next(iter_isomorphisms(a, b), None)


def is_linear(t: Tree) -> bool:
    return all(len(t.children(d)) == 1 for d in t.dots)


class SubdividedTree:
    """A tree together with ordered white dots on its edges.

    ``whites`` maps an edge (named by its upper element) to the tuple of
    white-dot names on it, listed from the root side to the leaf side.
    """

    __slots__ = ("base", "whites", "_expanded")

    def __init__(self, base: Tree, whites: Mapping[str, Iterable[str]] | None = None):
        self.base = base
        self.whites = {e: tuple(ws) for e, ws in (whites or {}).items() if ws}
        self._expanded = None

    @property
    def white_dots(self) -> frozenset:
        return frozenset(w for ws in self.whites.values() for w in ws)

    @property
    def black_dots(self) -> frozenset:
        return self.base.dots

    def edge_of(self, w: str) -> tuple[str, int]:
        for e, ws in self.whites.items():
            if w in ws:
                return e, ws.index(w)
        raise KeyError(w)

    @property
    def expanded(self) -> Tree:
        """The tree ``T'`` in which every white dot is a unary dot."""
        if self._expanded is None:
            parent = dict(self.base.parent)
            for e, ws in self.whites.items():
                below = self.base.parent[e]
                for w in ws:
                    parent[w] = below
                    below = w
                parent[e] = below
            self._expanded = Tree(parent, self.base.dots | self.white_dots)
        return self._expanded


def _as_expanded(t) -> Tree:
    return t.expanded if isinstance(t, SubdividedTree) else t


def is_kernel(t, members: Iterable[str]) -> bool:
    """True iff ``members`` is a nonempty connected set of dots of ``T'``."""
    tt = _as_expanded(t)
    k = set(members)
    unknown = k - tt.dots
    if unknown:
        raise KeyError(f"unknown dot(s): {', '.join(sorted(unknown))}")
    if not k:
        return False
    # a subset of a tree is connected iff exactly one member's parent lies outside it
    return sum(1 for x in k if tt.parent[x] not in k) == 1


def kernel_root(t, members: Iterable[str]) -> str:
    tt = _as_expanded(t)
    k = set(members)
    tops = [x for x in k if tt.parent[x] not in k]
    if len(tops) != 1:
        raise ValueError("not a kernel")
    return tops[0]


def kernel_span(t, members: Iterable[str]) -> Tree:
    """The tree spanned by a kernel: its members as dots plus their boundary edges."""
    tt = _as_expanded(t)
    k = set(members)
    if not is_kernel(tt, k):
        raise ValueError("not a kernel")
    parent: dict[str, str | None] = {}
    for x in k:
        parent[x] = tt.parent[x] if tt.parent[x] in k else None
        for c in tt.children(x):
            if c not in k:
                parent[c] = x
    return Tree(parent, k)


def collapse(t: Tree, members: Iterable[str], name: str) -> Tree:
    """Shrink a connected set of dots to one dot called ``name``."""
    k = set(members)
    r = kernel_root(t, k)
    parent = {}
    for x, p in t.parent.items():
        if x in k:
            continue
        parent[x] = name if p in k else p
    parent[name] = t.parent[r]
    return Tree(parent, (t.dots - k) | {name})


def fresh_name(used, hint: str = "n") -> str:
    """Smallest ``hint<i>`` not in ``used`` (``hint`` itself if free)."""
    if hint not in used:
        return hint
    i = 1
    while f"{hint}{i}" in used:
        i += 1
    return f"{hint}{i}"
