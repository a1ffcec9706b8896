"""Line-oriented text serialization of DP DAGs.

Layout::

    unihirsch-dag 1
    semiring max-plus
    vertices 9
    delta_max 3
    sources 1
    1 0
    sinks 1
    9
    edges 12
    1 2 0
    ...

Blank lines and ``#`` comments are ignored.  The bottom value is spelled
``bottom``.  Writing a parsed file reproduces it byte for byte.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterator, TextIO, Union

from .dag import DagError, DpDag
from .semiring import format_value, parse_value

MAGIC = "unihirsch-dag"
VERSION = 1


class DagFileError(ValueError):
    """The file is not a well-formed DAG description."""


def dumps(dag: DpDag) -> str:
    out = [
        f"{MAGIC} {VERSION}",
        f"semiring {dag.semiring_tag}",
        f"vertices {dag.vertex_count}",
        f"delta_max {dag.delta_max}",
        f"sources {len(dag.sources)}",
    ]
    out += [f"{v} {format_value(a)}" for v, a in sorted(dag.sources.items())]
    out.append(f"sinks {len(dag.sinks)}")
    out += [str(t) for t in dag.sinks]
    out.append(f"edges {len(dag.edges)}")
    out += [f"{u} {v} {format_value(w)}" for u, v, w in dag.edges]
    return "\n".join(out) + "\n"


def _lines(fh: TextIO) -> Iterator[tuple[int, list[str]]]:
    for no, line in enumerate(fh, start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _expect(it, key: str) -> str:
    try:
        no, toks = next(it)
    except StopIteration:
        raise DagFileError(f"unexpected end of file, wanted {key!r}") from None
    if len(toks) != 2 or toks[0] != key:
        raise DagFileError(f"line {no}: expected '{key} <value>'")
    return toks[1]


def _rows(it, count: int, width: int, what: str) -> list[list[str]]:
    rows = []
    for _ in range(count):
        try:
            no, toks = next(it)
        except StopIteration:
            raise DagFileError(f"file ends inside the {what} section") from None
        if len(toks) != width:
            raise DagFileError(f"line {no}: {what} rows have {width} fields")
        rows.append(toks)
    return rows


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DagFileError(f"bad {what} {tok!r}") from None


def _value(tok: str) -> int:
    try:
        return parse_value(tok)
    except ValueError:
        raise DagFileError(f"bad value {tok!r}") from None


def load(fh: TextIO) -> DpDag:
    it = _lines(fh)
    try:
        no, head = next(it)
    except StopIteration:
        raise DagFileError("empty file") from None
    if head != [MAGIC, str(VERSION)]:
        raise DagFileError(f"line {no}: not a {MAGIC} v{VERSION} file")
    tag = _expect(it, "semiring")
    T = _int(_expect(it, "vertices"), "vertex count")
    delta = _int(_expect(it, "delta_max"), "delta_max")
    sources = {
        _int(v, "vertex"): _value(a)
        for v, a in _rows(it, _int(_expect(it, "sources"), "count"), 2, "sources")
    }
    sinks = [_int(t, "vertex") for (t,) in _rows(it, _int(_expect(it, "sinks"), "count"), 1, "sinks")]
    edges = [
        (_int(u, "vertex"), _int(v, "vertex"), _value(w))
        for u, v, w in _rows(it, _int(_expect(it, "edges"), "count"), 3, "edges")
    ]
    extra = next(it, None)
    if extra is not None:
        raise DagFileError(f"line {extra[0]}: trailing content")
    try:
        return DpDag.from_edges(T, edges, sources, sinks, tag, delta)
    except (DagError, ValueError) as exc:
        raise DagFileError(str(exc)) from exc


def loads(text: str) -> DpDag:
    return load(io.StringIO(text))


def read_dag(path: Union[str, Path]) -> DpDag:
    with open(path, encoding="ascii") as fh:
        return load(fh)


def write_dag(dag: DpDag, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(dag), encoding="ascii")
