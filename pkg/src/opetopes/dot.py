"""Graphviz DOT rendering of the constellations of a zoom complex.

Each constellation ``X[k]`` becomes one ``digraph``: the dots of its carrier
``G[k-1]`` are filled nodes, white dots are unfilled circles, the root and
the leaves get small stub nodes, and every sphere is a ``cluster_<name>``
subgraph nested as in ``G[k]``.  Edges point from an element towards the
root.
"""

from __future__ import annotations

from .opetope import ZoomComplex
from .trees import SubdividedTree

__all__ = ["to_dot", "level_to_dot"]


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def level_to_dot(X: ZoomComplex, k: int) -> str:
    carrier = X.tree(k - 1)
    nest = X.tree(k)
    sub = SubdividedTree(carrier, X.whites(k))
    tt = sub.expanded
    whites = sub.white_dots
    lines = [f"digraph {_q(f'X{k}')} {{", "  rankdir=BT;"]
    placed: set = set()

    def node_line(v, pad):
        if v in whites:
            return f"{pad}{_q(v)} [shape=circle, style=solid, label={_q(v)}];"
        return f"{pad}{_q(v)} [shape=circle, style=filled, fillcolor=black, fontcolor=white, label={_q(v)}];"

    def cluster(s, depth):
        pad = "  " * depth
        lines.append(f"{pad}subgraph {_q('cluster_' + s)} {{")
        lines.append(f"{pad}  label={_q(s)};")
        if nest.is_null(s):
            lines.append(node_line(s, pad + "  "))
            placed.add(s)
        for c in nest.children(s):
            if c in nest.dots:
                cluster(c, depth + 1)
            else:
                lines.append(node_line(c, pad + "  "))
                placed.add(c)
        lines.append(f"{pad}}}")

    if nest.dots:
        cluster(nest.root, 1)
    for v in sorted(tt.dots - placed):
        lines.append(node_line(v, "  "))
    stub_root = f"root:{k}"
    lines.append(f"  {_q(stub_root)} [shape=point];")
    for leaf in sorted(tt.leaves):
        lines.append(f"  {_q('leaf:' + leaf)} [shape=point, xlabel={_q(leaf)}];")
    for v, p in sorted(tt.parent.items()):
        src = _q("leaf:" + v) if v in tt.leaves else _q(v)
        dst = _q(stub_root) if p is None else _q(p)
        lines.append(f"  {src} -> {dst} [label={_q(v)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dot(X: ZoomComplex, level: int | None = None) -> str:
    """One graph per constellation, or only level ``level``."""
    if level is not None:
        if not 0 <= level <= X.dimension:
            raise ValueError(f"level {level} out of range 0..{X.dimension}")
        return level_to_dot(X, level)
    return "".join(level_to_dot(X, k) for k in range(X.dimension + 1))
