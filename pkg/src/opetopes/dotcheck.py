"""A small checker for the DOT language, enough to vet our own output.

Covers graphs, subgraphs, node, edge and attribute statements, ``ID = ID``
statements and attribute lists; identifiers may be bare words, numerals or
quoted strings.  HTML labels and ports are not supported.
"""

from __future__ import annotations

import re

__all__ = ["check_dot", "DotSyntaxError", "graph_summaries"]

_TOKEN = re.compile(r"""
    (?P<ws>\s+|//[^\n]*|/\*.*?\*/|\#[^\n]*)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<num>-?(?:\.\d+|\d+(?:\.\d*)?))
  | (?P<id>[A-Za-z_\x80-￿][A-Za-z_0-9\x80-￿]*)
  | (?P<op>->|--|[{}\[\];=,:])
""", re.X | re.S)

_KEYWORDS = {"strict", "graph", "digraph", "subgraph", "node", "edge"}


class DotSyntaxError(ValueError):
    pass


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DotSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        val = m.group()
        if kind == "id" and val.lower() in _KEYWORDS:
            kind = val.lower()
        elif kind in ("str", "num", "id"):
            kind = "ID"
        else:
            kind = val
        out.append((kind, val))
    return out


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0
        self.directed = False
        self.summary: dict = {}

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j][0] if j < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            got = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
            raise DotSyntaxError(f"expected {kind}, got {got!r}")
        self.i += 1
        return self.toks[self.i - 1][1]

    def accept(self, kind):
        if self.peek() == kind:
            self.i += 1
            return True
        return False

    def graph(self):
        self.accept("strict")
        if self.accept("digraph"):
            self.directed = True
        else:
            self.take("graph")
            self.directed = False
        name = self.take("ID") if self.peek() == "ID" else None
        self.summary = {"name": name, "directed": self.directed, "nodes": set(),
                        "edges": 0, "clusters": 0, "depth": 0}
        self.take("{")
        self.stmts(0)
        self.take("}")
        return self.summary

    def stmts(self, depth):
        while self.peek() not in ("}", None):
            self.stmt(depth)
            self.accept(";")

    def attr_list(self):
        while self.accept("["):
            while self.peek() == "ID":
                self.take("ID")
                if self.accept("="):
                    self.take("ID")
                if not self.accept(","):
                    self.accept(";")
            self.take("]")

    def subgraph(self, depth):
        name = None
        if self.accept("subgraph"):
            if self.peek() == "ID":
                name = self.take("ID")
        self.take("{")
        bare = name.strip('"') if name else ""
        if bare.startswith("cluster"):
            self.summary["clusters"] += 1
            depth += 1
            self.summary["depth"] = max(self.summary["depth"], depth)
        self.stmts(depth)
        self.take("}")

    def operand(self, depth):
        if self.peek() in ("subgraph", "{"):
            self.subgraph(depth)
        else:
            nid = self.take("ID")
            if self.accept(":"):
                self.take("ID")
            self.summary["nodes"].add(nid)

    def stmt(self, depth):
        kind = self.peek()
        if kind in ("graph", "node", "edge"):
            self.i += 1
            self.attr_list()
            return
        if kind == "ID" and self.peek(1) == "=":
            self.i += 2
            self.take("ID")
            return
        self.operand(depth)
        while self.peek() in ("->", "--"):
            op = self.take(self.peek())
            if (op == "->") != self.directed:
                raise DotSyntaxError(f"edge operator {op} in a {'di' if self.directed else ''}graph")
            self.operand(depth)
            self.summary["edges"] += 1
        self.attr_list()


def graph_summaries(text: str) -> list[dict]:
    """Parse every graph in ``text``; raise :class:`DotSyntaxError` on bad syntax.

    Each summary records the graph name, node ids, edge count, number of
    clusters and the deepest cluster nesting.
    """
    p = _Parser(_tokens(text))
    out = []
    while p.peek() is not None:
        out.append(p.graph())
    if not out:
        raise DotSyntaxError("no graph found")
    return out


def check_dot(text: str) -> list[str]:
    """Violations of the DOT grammar (empty when the text is valid)."""
    try:
        graph_summaries(text)
    except DotSyntaxError as exc:
        return [str(exc)]
    return []
