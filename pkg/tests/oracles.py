"""Independent brute-force generators and checks used as test oracles.

Nothing here calls the canonical-code or isomorphism machinery of the
package: trees come from raw parent maps and isomorphism is decided by
trying every bijection.
"""

from __future__ import annotations

from itertools import permutations, product

from opetopes.trees import Tree


def labelled_trees(n_elements: int):
    """Every tree on elements e0..e{n-1} rooted at e0, with every choice of null-dots."""
    names = [f"e{i}" for i in range(n_elements)]
    for parents in product(range(n_elements), repeat=n_elements - 1):
        parent = {names[0]: None}
        for i, p in enumerate(parents, start=1):
            if p == i:
                break
            parent[names[i]] = names[p]
        else:
            if not _acyclic(parent):
                continue
            inner = {p for p in parent.values() if p is not None}
            childless = [x for x in names if x not in inner]
            for mask in range(1 << len(childless)):
                nulls = {x for j, x in enumerate(childless) if mask >> j & 1}
                yield Tree(parent, inner | nulls)


def _acyclic(parent) -> bool:
    for x in parent:
        seen, cur = set(), x
        while cur is not None:
            if cur in seen:
                return False
            seen.add(cur)
            cur = parent[cur]
    return True


def brute_isomorphic(a: Tree, b: Tree) -> bool:
    if len(a.dots) != len(b.dots) or len(a.leaves) != len(b.leaves):
        return False
    ad, bd = sorted(a.dots), sorted(b.dots)
    al, bl = sorted(a.leaves), sorted(b.leaves)
    for pd in permutations(bd):
        m = dict(zip(ad, pd))
        for pl in permutations(bl):
            m.update(zip(al, pl))
            if all((a.parent[x] is None and b.parent[m[x]] is None)
                   or (a.parent[x] is not None and b.parent[m[x]] == m[a.parent[x]])
                   for x in a.parent):
                return True
    return False


def connected_subsets(t: Tree):
    """Every nonempty set of dots that is connected through dot-dot edges."""
    dots = sorted(t.dots)
    adj = {d: set() for d in dots}
    for x, p in t.parent.items():
        if x in t.dots and p is not None:
            adj[x].add(p)
            adj[p].add(x)
    for mask in range(1, 1 << len(dots)):
        k = {d for i, d in enumerate(dots) if mask >> i & 1}
        start = next(iter(k))
        seen, todo = {start}, [start]
        while todo:
            for y in adj[todo.pop()] & k:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        yield frozenset(k), seen == k


def planar_trees(max_dots: int, max_leaves: int) -> set:
    """Planar trees as nested tuples of ordered children; a leaf is ``None``."""
    out = set()
    for d in range(0, max_dots + 1):
        out |= {t for t in _planar_exact(d, max_leaves) if planar_leaves(t) <= max_leaves}
    return out


def _planar_exact(d: int, max_leaves: int):
    if d == 0:
        return [None]
    res = []
    # each child consumes a dot or a leaf, which bounds the arity
    for arity in range(0, d - 1 + max_leaves + 1):
        for split in _splits(d - 1, arity):
            for kids in product(*[_planar_exact(s, max_leaves) for s in split]):
                if planar_leaves(kids) <= max_leaves:
                    res.append(tuple(kids))
    return res


def _splits(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def planar_leaves(t) -> int:
    if t is None:
        return 1
    return sum(planar_leaves(c) for c in t)


def planar_dots(t) -> int:
    return 0 if t is None else 1 + sum(planar_dots(c) for c in t)
