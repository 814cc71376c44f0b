"""Command-line front end: ``opetope <command> ...``.

Exit status is 0 on success, 1 on a domain error (an invalid opetope, a
failed gluing) and 2 on usage or document errors.  Diagnostics are a
single line on stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import calculus
from .dot import to_dot
from .errors import OpetopeError, ParseError
from .opetope import enumerate_opetopes, suspend
from .xmlformat import parse_document, serialize

__all__ = ["main", "build_parser"]


class _Usage(Exception):
    pass


def _read(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text)


def _stem(path: str) -> str:
    name = Path(path).name
    return name[:-4] if name.endswith(".xml") else name


def _emit(args, text: str, filename: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text, encoding="utf-8")
        _say(args, f"wrote {out / filename}")
    else:
        sys.stdout.write(text)


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def cmd_validate(args):
    name, X = _read(args.file)
    _say(args, f"ok: {name} is a {X.dimension}-opetope")


def cmd_target(args):
    name, X = _read(args.file)
    _emit(args, serialize(calculus.target(X), f"{name}.target"), f"{_stem(args.file)}.target.xml")


def cmd_source(args):
    name, X = _read(args.file)
    _emit(args, serialize(calculus.source(X, args.name), f"{name}.src-{args.name}"),
          f"{_stem(args.file)}.src-{args.name}.xml")


def cmd_faces(args):
    name, X = _read(args.file)
    stem = _stem(args.file)
    out = Path(args.out) if args.out else Path(args.file).resolve().parent
    out.mkdir(parents=True, exist_ok=True)
    files = [(f"{stem}.target.xml", serialize(calculus.target(X), f"{name}.target"))]
    for s, F in calculus.sources(X).items():
        files.append((f"{stem}.src-{s}.xml", serialize(F, f"{name}.src-{s}")))
    for fn, text in files:
        (out / fn).write_text(text, encoding="utf-8")
        _say(args, f"wrote {out / fn}")


def cmd_glue(args):
    bname, R = _read(args.bottom)
    tname, S = _read(args.top)
    T = calculus.glue(R, args.locus, S)
    _emit(args, serialize(T, f"{bname}.glue-{args.locus}"), f"{_stem(args.bottom)}.glue-{args.locus}.xml")


def cmd_fill(args):
    bname, R = _read(args.bottom)
    tname, S = _read(args.top)
    X = calculus.fill(R, args.locus, S)
    _emit(args, serialize(X, f"{bname}.fill-{args.locus}"), f"{_stem(args.bottom)}.fill-{args.locus}.xml")


def cmd_suspend(args):
    name, X = _read(args.file)
    _emit(args, serialize(suspend(X), f"{name}.susp"), f"{_stem(args.file)}.susp.xml")


def cmd_enumerate(args):
    if args.dim < 0 or args.bound < 0:
        raise _Usage("dimension and bound must be non-negative")
    bound = args.bound
    cap = os.environ.get("OPETOPE_MAX_DOTS")
    if cap:
        try:
            bound = min(bound, int(cap))
        except ValueError:
            raise _Usage(f"OPETOPE_MAX_DOTS must be an integer, got {cap!r}") from None
    found = enumerate_opetopes(args.dim, bound)
    for i, X in enumerate(found):
        _emit(args, serialize(X, f"o{args.dim}-{i}"), f"o{args.dim}-{i}.xml")
    _say(args, f"{len(found)} opetope(s) of dimension {args.dim} within bound {bound}")


def cmd_render(args):
    name, X = _read(args.file)
    try:
        text = to_dot(X, args.level)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    suffix = "" if args.level is None else f".X{args.level}"
    _emit(args, text, f"{_stem(args.file)}{suffix}.dot")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="DIR", help="write results into DIR instead of stdout")
    common.add_argument("--quiet", action="store_true", help="suppress informational messages")
    p = argparse.ArgumentParser(prog="opetope", description="Compute with opetopes stored as XML documents.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check a document").add_argument("file")
    add("target", cmd_target, "write the target facet").add_argument("file")
    add("faces", cmd_faces, "write the target and every source facet").add_argument("file")
    sp = add("source", cmd_source, "write one source facet")
    sp.add_argument("file")
    sp.add_argument("name")
    for name, fn, h in (("glue", cmd_glue, "glue TOP onto facet LOCUS of BOTTOM"),
                        ("fill", cmd_fill, "the filler of a gluing")):
        sp = add(name, fn, h)
        sp.add_argument("bottom")
        sp.add_argument("locus")
        sp.add_argument("top")
    add("suspend", cmd_suspend, "suspend an opetope").add_argument("file")
    sp = add("enumerate", cmd_enumerate, "list all opetopes of a dimension within a bound")
    sp.add_argument("dim", type=int)
    sp.add_argument("bound", type=int)
    sp = add("render", cmd_render, "emit Graphviz DOT")
    sp.add_argument("file")
    sp.add_argument("--level", type=int, default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (_Usage, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OpetopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
