"""Line-oriented text formats for tile sets, assemblies and assembly trees.

Tile sets::

    temperature 2
    seed A                      # optional
    tile A N=- E=g:1 S=- W=-    # '-' is the null glue, omitted sides are null

Assemblies: one ``x y NAME`` per line.  Trees: ``L <id> <x> <y> <name>`` or
``J <id> <left> <right>``, ids dense from 0 in file order, root last.
Blank lines and ``#`` comments are ignored everywhere.
"""
from __future__ import annotations

from typing import Iterator

from .assembly_tree import AssemblyTree, Join, Leaf
from .core import (Assembly, AssemblyError, Direction, TileSet, TileSystem, TileType,
                   functionally_null_glues, normalize_tileset)


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if words:
            yield no, words


def _int(word: str, no: int, what: str) -> int:
    try:
        return int(word)
    except ValueError:
        raise ParseError(f"bad {what} {word!r}", no) from None


def _glue(word: str, no: int):
    if word == "-":
        return None
    label, sep, strength = word.rpartition(":")
    if not sep or not label:
        raise ParseError(f"glue must look like label:strength or '-', got {word!r}", no)
    s = _int(strength, no, "strength")
    if s < 0:
        raise ParseError(f"negative strength in {word!r}", no)
    return label, s


def parse_tileset(text: str) -> TileSystem:
    temperature = None
    seed = None
    tiles: list[TileType] = []
    where: dict[str, int] = {}
    first_use: dict[str, tuple[int, int]] = {}
    for no, words in _lines(text):
        key = words[0]
        if key == "temperature":
            if len(words) != 2 or temperature is not None:
                raise ParseError("expected a single 'temperature K' line", no)
            temperature = _int(words[1], no, "temperature")
            if temperature < 1:
                raise ParseError("temperature must be positive", no)
        elif key == "seed":
            if len(words) != 2 or seed is not None:
                raise ParseError("expected a single 'seed NAME' line", no)
            seed = words[1]
        elif key == "tile":
            if len(words) < 2:
                raise ParseError("tile needs a name", no)
            name = words[1]
            if name in where:
                raise ParseError(f"duplicate tile name {name!r} (first on line {where[name]})", no)
            where[name] = no
            sides: dict[str, object] = {}
            for item in words[2:]:
                side, eq, word = item.partition("=")
                if not eq or side not in ("N", "E", "S", "W"):
                    raise ParseError(f"expected N=, E=, S= or W=, got {item!r}", no)
                if side in sides:
                    raise ParseError(f"side {side} given twice", no)
                g = _glue(word, no)
                sides[side] = g
                if g is not None and g[1] > 0:
                    label, s = g
                    prev = first_use.setdefault(label, (s, no))
                    if prev[0] != s:
                        raise ParseError(
                            f"glue {label!r} has strength {prev[0]} on line {prev[1]} "
                            f"and {s} on line {no}", no)
            tiles.append(TileType.make(name, **sides))
        else:
            raise ParseError(f"unknown directive {key!r}", no)
    if not tiles:
        raise ParseError("no tiles")
    raw = TileSet(tiles)
    nulled = tuple(functionally_null_glues(raw))
    ts = normalize_tileset(raw)
    try:
        return TileSystem(ts, temperature or 1, seed, nulled)
    except ValueError as e:
        raise ParseError(str(e)) from None


def write_tileset(system: TileSystem | TileSet) -> str:
    if isinstance(system, TileSet):
        system = TileSystem(system)
    out = [f"temperature {system.temperature}"]
    if system.seed is not None:
        out.append(f"seed {system.seed}")
    for t in system.tileset:
        parts = [f"tile {t.name}"]
        for d in Direction:
            g = t.glue(d)
            parts.append(f"{d.name}={g.label}:{g.strength}" if g.strength else f"{d.name}=-")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def parse_assembly(text: str, ts: TileSet) -> Assembly:
    placed: dict = {}
    for no, words in _lines(text):
        if len(words) != 3:
            raise ParseError("expected 'x y NAME'", no)
        x, y = _int(words[0], no, "x"), _int(words[1], no, "y")
        if words[2] not in ts.name_index:
            raise ParseError(f"unknown tile {words[2]!r}", no)
        if (x, y) in placed:
            raise ParseError(f"duplicate position ({x}, {y})", no)
        placed[(x, y)] = ts.name_index[words[2]]
    if not placed:
        raise ParseError("no tiles")
    try:
        return Assembly(placed)
    except (AssemblyError, OverflowError) as e:
        raise ParseError(str(e)) from None


def write_assembly(alpha: Assembly, ts: TileSet) -> str:
    return "".join(f"{x} {y} {ts.names[t]}\n" for (x, y), t in alpha.items())


def parse_tree(text: str, ts: TileSet) -> AssemblyTree:
    nodes: list = []
    for no, words in _lines(text):
        kind = words[0]
        if kind not in ("L", "J") or len(words) != (5 if kind == "L" else 4):
            raise ParseError("expected 'L id x y name' or 'J id left right'", no)
        if _int(words[1], no, "id") != len(nodes):
            raise ParseError(f"node ids must be dense from 0; expected {len(nodes)}", no)
        if kind == "L":
            if words[4] not in ts.name_index:
                raise ParseError(f"unknown tile {words[4]!r}", no)
            nodes.append(Leaf(_int(words[2], no, "x"), _int(words[3], no, "y"),
                              ts.name_index[words[4]]))
        else:
            left, right = _int(words[2], no, "id"), _int(words[3], no, "id")
            if not (0 <= left < len(nodes) and 0 <= right < len(nodes)):
                raise ParseError("join refers to a node not yet defined", no)
            nodes.append(Join(left, right))
    if not nodes:
        raise ParseError("empty tree")
    try:
        return AssemblyTree(nodes)
    except ValueError as e:
        raise ParseError(str(e)) from None


def write_tree(tree: AssemblyTree, ts: TileSet) -> str:
    out = []
    for i, node in enumerate(tree.nodes):
        if isinstance(node, Leaf):
            out.append(f"L {i} {node.x} {node.y} {ts.names[node.tile]}")
        else:
            out.append(f"J {i} {node.left} {node.right}")
    return "\n".join(out) + "\n"
