"""Constellations: a tree, white dots placed on its edges, and a nesting tree.

The stored form is the combinatorial triple.  The nesting tree ``N`` has
the carrier's dots as leaves and the white dots as null-dots; its own dots
are the spheres.  Names do the bookkeeping: a leaf of ``N`` *is* the carrier
dot with that name, and a null-dot of ``N`` *is* the white dot with that name.

The sphere-family view (containment as a parent function plus positions for
the contentless spheres) is produced by :func:`to_spheres` and consumed by
:func:`from_spheres`.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import ValidationError
from .trees import (
    SubdividedTree,
    Tree,
    collapse,
    fresh_name,
    is_kernel,
    kernel_root,
    kernel_span,
    validate_tree,
)

__all__ = [
    "Constellation",
    "SphereFamily",
    "validate_constellation",
    "from_spheres",
    "to_spheres",
    "nesting_tree",
    "layer_content",
    "enumerate_constellations",
]


class Constellation:
    __slots__ = ("carrier", "whites", "nesting", "_sub")

    def __init__(self, carrier: Tree, whites: Mapping[str, Iterable[str]], nesting: Tree):
        self.carrier = carrier
        self.whites = {e: tuple(ws) for e, ws in whites.items() if ws}
        self.nesting = nesting
        self._sub = None

    @property
    def subdivided(self) -> SubdividedTree:
        if self._sub is None:
            self._sub = SubdividedTree(self.carrier, self.whites)
        return self._sub

    @property
    def expanded(self) -> Tree:
        return self.subdivided.expanded

    @property
    def spheres(self) -> frozenset:
        return self.nesting.dots

    @property
    def outer(self) -> str | None:
        return self.nesting.root if self.nesting.dots else None

    def content(self, x: str) -> frozenset:
        """Dots of ``T'`` (black and white) enclosed by sphere ``x``."""
        if x not in self.nesting.dots:
            raise KeyError(f"unknown sphere {x}")
        return self.nesting.minimal_below(x)

    def check(self) -> "Constellation":
        v = validate_constellation(self)
        if v:
            raise ValidationError(v)
        return self

    def __eq__(self, other):
        return (isinstance(other, Constellation) and self.carrier == other.carrier
                and self.whites == other.whites and self.nesting == other.nesting)

    def __repr__(self):
        return f"Constellation(carrier={self.carrier!r}, whites={self.whites!r}, nesting={self.nesting!r})"


def validate_constellation(c: Constellation) -> list[str]:
    out = [f"carrier: {v}" for v in validate_tree(c.carrier)]
    out += [f"nesting: {v}" for v in validate_tree(c.nesting)]
    if out:
        return out
    seen: set = set()
    for e, ws in sorted(c.whites.items()):
        if e not in c.carrier.parent:
            out.append(f"white dots placed on unknown edge {e}")
        for w in ws:
            if w in seen or w in c.carrier.parent:
                out.append(f"white dot name {w} is not unique")
            seen.add(w)
    leaves, dots = c.nesting.leaves, c.carrier.dots
    for x in sorted(leaves - dots):
        out.append(f"name bijection: nesting leaf {x} is not a dot of the carrier")
    for x in sorted(dots - leaves):
        out.append(f"name bijection: carrier dot {x} is not a leaf of the nesting")
    nulls = c.nesting.null_dots
    for x in sorted(nulls - seen):
        out.append(f"name bijection: null-dot {x} has no white dot")
    for x in sorted(seen - nulls):
        out.append(f"name bijection: white dot {x} is not a null-dot of the nesting")
    if out:
        return out
    tt = c.expanded
    for x in sorted(c.nesting.dots):
        k = c.nesting.minimal_below(x)
        if not is_kernel(tt, k):
            out.append(f"kernel rule violated at {x}: order not respected, "
                       f"content {{{', '.join(sorted(k))}}} is not connected")
    return out


def nesting_tree(c: Constellation) -> Tree:
    return c.nesting


@dataclass
class SphereFamily:
    """Spheres drawn on a carrier tree.

    ``parent`` maps every carrier dot and every sphere to its immediately
    enclosing sphere (or ``None``).  ``null_positions`` lists, per carrier
    edge, the contentless spheres on it from the root side outward.
    """

    parent: dict = field(default_factory=dict)
    null_positions: dict = field(default_factory=dict)

    @property
    def spheres(self) -> frozenset:
        s = {p for p in self.parent.values() if p is not None}
        s |= {w for ws in self.null_positions.values() for w in ws}
        return frozenset(s)

    @property
    def outer(self) -> str | None:
        tops = [x for x, p in self.parent.items() if p is None and x in self.spheres]
        return tops[0] if len(tops) == 1 else None


def from_spheres(carrier: Tree, fam: SphereFamily) -> Constellation:
    errs = validate_tree(carrier)
    if errs:
        raise ValidationError([f"carrier: {e}" for e in errs])
    spheres = fam.spheres
    parent = dict(fam.parent)
    for x in carrier.dots:
        parent.setdefault(x, None)
    for s in spheres:
        parent.setdefault(s, None)
    for x, p in parent.items():
        if p is not None and p not in spheres:
            raise ValidationError(f"crossing spheres: {x} is enclosed by {p}, which is not a sphere")
        if x not in spheres and x not in carrier.dots:
            raise ValidationError(f"unknown element {x}")
    if spheres:
        tops = sorted(x for x, p in parent.items() if p is None)
        if len(tops) != 1 or tops[0] not in spheres:
            raise ValidationError("missing outer sphere")
    nesting = Tree(parent, spheres)
    errs = validate_tree(nesting)
    if errs:
        raise ValidationError(["crossing spheres: " + e for e in errs])
    placed = {w for ws in fam.null_positions.values() for w in ws}
    for s in sorted(spheres):
        if not nesting.children(s) and s not in placed:
            raise ValidationError(f"sphere {s} has no content and no edge position")
        if nesting.children(s) and s in placed:
            raise ValidationError(f"sphere {s} has content but is placed as a null-sphere")
    c = Constellation(carrier, fam.null_positions, nesting)
    tt = c.expanded
    for s in sorted(spheres):
        if not is_kernel(tt, nesting.minimal_below(s)):
            raise ValidationError(f"sphere {s} does not cut a subtree")
    return c.check()


def to_spheres(c: Constellation) -> SphereFamily:
    parent = {x: p for x, p in c.nesting.parent.items()}
    return SphereFamily(parent=parent, null_positions=dict(c.whites))


def layer_content(c: Constellation, x: str) -> Tree:
    """The tree seen between sphere ``x`` and its children.

    Its dots are the children of ``x`` in the nesting: carrier dots and
    white dots stay as they are, each child sphere is shrunk to one dot
    named after the sphere.
    """
    if x not in c.nesting.dots:
        raise KeyError(f"unknown sphere {x}")
    t = kernel_span(c.expanded, c.nesting.minimal_below(x))
    for y in c.nesting.children(x):
        if y in c.nesting.dots and c.nesting.children(y):
            t = collapse(t, c.nesting.minimal_below(y), y)
    return t


# enumeration

def _kernels(tt: Tree) -> list[frozenset]:
    """All connected nonempty dot sets of ``tt``, grown from their roots."""
    out = []

    def grow(current: frozenset, frontier: tuple):
        out.append(current)
        for i, y in enumerate(frontier):
            # add y; the new frontier is what remains after y plus y's dot-children
            nxt = frontier[i + 1:] + tuple(c for c in tt.children(y) if c in tt.dots)
            grow(current | {y}, nxt)

    for r in sorted(tt.dots):
        grow(frozenset([r]), tuple(c for c in tt.children(r) if c in tt.dots))
    return out


def _laminar(full: frozenset, kernels_by_min: dict, budget: int):
    """Yield (spec, cost) for every chain-with-interior of spheres whose outer content is ``full``.

    ``spec`` is ``(multiplicity, members, children)`` where ``children`` is a
    list of atoms (element names) and nested specs.
    """
    for k in range(1, budget + 1):
        for inner, cost in _interior(full, full, kernels_by_min, budget - k):
            yield (k, full, inner), k + cost


def _interior(full, remaining, kernels_by_min, budget):
    if not remaining:
        yield [], 0
        return
    t = min(remaining)
    rest = remaining - {t}
    for tail, cost in _interior(full, rest, kernels_by_min, budget):
        yield [t] + tail, cost
    if budget <= 0:
        return
    for kset in kernels_by_min.get(t, ()):
        if kset == full or not kset <= remaining:
            continue
        for spec, c1 in _laminar(kset, kernels_by_min, budget):
            for tail, c2 in _interior(full, remaining - kset, kernels_by_min, budget - c1):
                yield [spec] + tail, c1 + c2


def enumerate_constellations(carrier: Tree, max_spheres: int, hint: str = "s",
                             white_hint: str = "w"):
    """Yield every constellation on ``carrier`` with at most ``max_spheres`` spheres.

    Null-spheres count towards the bound.  Distinct outputs are distinct as
    constellations over the named carrier (no symmetry reduction).
    """
    used = set(carrier.parent)
    edges = sorted(carrier.parent)
    for w in range(0, max_spheres + 1):
        for placement in combinations_with_replacement(edges, w):
            whites: dict[str, list[str]] = {}
            taken = set(used)
            for e in placement:
                nm = fresh_name(taken, white_hint)
                taken.add(nm)
                whites.setdefault(e, []).append(nm)
            sub = SubdividedTree(carrier, whites)
            tt = sub.expanded
            if not tt.dots:
                continue
            kernels_by_min: dict = {}
            for k in _kernels(tt):
                kernels_by_min.setdefault(min(k), []).append(k)
            full = frozenset(tt.dots)
            budget = max_spheres - w
            if len(full) == 1:
                only = next(iter(full))
                if only in carrier.dots:
                    yield Constellation(carrier, {}, Tree({only: None}))
                else:
                    yield Constellation(carrier, whites, Tree({only: None}, [only]))
            for spec, _ in _laminar(full, kernels_by_min, budget):
                yield Constellation(carrier, whites, _spec_to_tree(spec, sub, taken, hint))


def _spec_to_tree(spec, sub: SubdividedTree, used: set, hint: str) -> Tree:
    parent: dict[str, str | None] = {}
    dots: set[str] = set()
    taken = set(used)
    whites = sub.white_dots

    def name():
        nm = fresh_name(taken, hint)
        taken.add(nm)
        return nm

    def build(sp, up):
        mult, _, inner = sp
        top = None
        for _ in range(mult):
            nm = name()
            parent[nm] = up
            dots.add(nm)
            up = nm
            top = top or nm
        for item in inner:
            if isinstance(item, tuple):
                build(item, up)
            else:
                parent[item] = up
                if item in whites:
                    dots.add(item)
        return top

    build(spec, None)
    return Tree(parent, dots)


def kernel_root_in(c: Constellation, x: str) -> str:
    return kernel_root(c.expanded, c.content(x))
