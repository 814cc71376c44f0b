"""Reading and writing opetopes as XML documents.

A document holds one ``constellation`` element per nesting tree
``G[0] .. G[n]``.  Inside it the tree is written out as nested ``dot`` and
``leaf`` elements, root first.  A childless dot stands for a null-sphere and
must carry a ``ref``: the null-dot farthest from the root on an edge names
the element above that edge in the previous tree, every other null-dot on
the edge names the next null-dot further out.

    <opetope name="arrow" version="1">
      <constellation name="X0">
        <dot name="0">
          <leaf name="*"/>
        </dot>
      </constellation>
      <constellation name="X1">
        <dot name="1">
          <leaf name="0"/>
        </dot>
      </constellation>
    </opetope>
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape

from .errors import ParseError, ValidationError
from .opetope import ZoomComplex, from_trees, validate_opetope
from .trees import Tree, _codes

__all__ = ["parse", "parse_document", "serialize", "FORMAT_VERSION"]

FORMAT_VERSION = "1"

_ATTRS = {
    "opetope": {"name", "version"},
    "constellation": {"name"},
    "dot": {"name", "ref"},
    "leaf": {"name"},
}


def _check_attrs(el: ET.Element) -> str:
    if el.tag not in _ATTRS:
        raise ParseError(f"unknown tag <{el.tag}>")
    extra = set(el.attrib) - _ATTRS[el.tag]
    if extra:
        raise ParseError(f"unknown attribute {sorted(extra)[0]!r} on <{el.tag}>")
    name = el.get("name")
    if not name:
        raise ParseError(f"<{el.tag}> without name attribute")
    return name


def _read_tree(el: ET.Element, k: int):
    """Return ``(tree, refs)`` for the tree element ``el`` of level ``k``."""
    parent: dict[str, str | None] = {}
    dots: set[str] = set()
    refs: dict[str, str] = {}

    def walk(node, up):
        name = _check_attrs(node)
        if node.tag not in ("dot", "leaf"):
            raise ParseError(f"unexpected <{node.tag}> inside constellation {k}")
        if name in parent:
            raise ParseError(f"duplicate name {name!r} in constellation {k}")
        parent[name] = up
        kids = list(node)
        if node.tag == "leaf":
            if kids:
                raise ParseError(f"leaf {name!r} has children")
            return
        dots.add(name)
        ref = node.get("ref")
        if kids and ref is not None:
            raise ParseError(f"dot {name!r} has children and a ref")
        if not kids:
            if ref is None:
                raise ParseError(f"null-dot without ref: {name!r} in constellation {k}")
            refs[name] = ref
        for c in kids:
            walk(c, name)

    kids = list(el)
    if len(kids) != 1:
        raise ParseError(f"constellation {k} must contain exactly one root element, found {len(kids)}")
    walk(kids[0], None)
    return Tree(parent, dots), refs


def _resolve_refs(refs: dict, tree: Tree, below: Tree | None, k: int) -> dict:
    """Turn ref chains into ordered white-dot lists per edge of ``below``."""
    if not refs:
        return {}
    if below is None:
        raise ParseError(f"null-dot {sorted(refs)[0]!r} in constellation 0")
    null = set(refs)
    pointed: dict[str, str] = {}
    for w, r in sorted(refs.items()):
        if r in null:
            pass
        elif r in below.parent:
            pass
        else:
            raise ParseError(f"dangling ref {r!r} on null-dot {w!r} in constellation {k}")
        if r in pointed:
            raise ParseError(f"ref chain branches: {pointed[r]!r} and {w!r} both refer to {r!r}")
        pointed[r] = w
    whites: dict[str, list] = {}
    seen: set = set()
    for e in sorted(r for r in pointed if r not in null):
        chain, cur = [], pointed[e]
        while cur is not None:
            chain.append(cur)
            seen.add(cur)
            cur = pointed.get(cur)
        whites[e] = list(reversed(chain))
    rest = sorted(null - seen)
    if rest:
        raise ParseError(f"cyclic ref chain through null-dot {rest[0]!r} in constellation {k}")
    return whites


def parse_document(text: str) -> tuple[str, ZoomComplex]:
    """Parse a document; return its name and the opetope it describes."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError(f"malformed markup: {exc}") from None
    name = _check_attrs(root)
    if root.tag != "opetope":
        raise ParseError(f"document root must be <opetope>, not <{root.tag}>")
    version = root.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version!r}")
    levels = list(root)
    if not levels:
        raise ParseError("document has no constellation")
    trees, whites = [], []
    below = None
    for k, el in enumerate(levels):
        _check_attrs(el)
        if el.tag != "constellation":
            raise ParseError(f"unexpected <{el.tag}> at top level")
        t, refs = _read_tree(el, k)
        whites.append(_resolve_refs(refs, t, below, k))
        trees.append(t)
        below = t
    if len(trees[0].leaves) != 1 or len(trees[0].dots) != 1:
        raise ValidationError("constellation 0 must have one dot and one leaf")
    X = from_trees(trees, whites)
    v = validate_opetope(X)
    if v:
        raise ValidationError(v)
    return name, X


def parse(text: str) -> ZoomComplex:
    return parse_document(text)[1]


def _attr(v: str) -> str:
    return '"' + escape(v, {'"': "&quot;"}) + '"'


def serialize(X: ZoomComplex, name: str = "opetope") -> str:
    """Deterministic document text; children appear in canonical-code order."""
    lines = [f"<opetope name={_attr(name)} version={_attr(FORMAT_VERSION)}>"]
    for k, lv in enumerate(X.levels):
        t = lv.tree
        codes = _codes(t)
        refs = {}
        for e, ws in lv.whites.items():
            for i, w in enumerate(ws):
                refs[w] = ws[i + 1] if i + 1 < len(ws) else e
        lines.append(f"  <constellation name={_attr(f'X{k}')}>")

        def emit(x, depth):
            pad = "  " * depth
            if x not in t.dots:
                lines.append(f"{pad}<leaf name={_attr(x)}/>")
                return
            kids = sorted(t.children(x), key=lambda c: (codes[c], c))
            if not kids:
                lines.append(f"{pad}<dot name={_attr(x)} ref={_attr(refs[x])}/>")
                return
            lines.append(f"{pad}<dot name={_attr(x)}>")
            for c in kids:
                emit(c, depth + 1)
            lines.append(f"{pad}</dot>")

        emit(t.root, 2)
        lines.append("  </constellation>")
    lines.append("</opetope>")
    return "\n".join(lines) + "\n"
