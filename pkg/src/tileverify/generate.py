"""Instance generators: benchmark families, random systems, polyomino enumeration."""
from __future__ import annotations

import random
from typing import Callable

import numpy as np

from .core import Assembly, Direction, Position, TileSet, TileSystem, TileType, normalize_tileset


def _grid_family(width: int, height: int, temperature: int) -> tuple[TileSystem, Assembly]:
    # one tile type per position, one label per abutment; tile id = row-major rank
    if width < 1 or height < 1:
        raise ValueError("size must be positive")
    n = width * height
    ids = np.arange(n, dtype=np.int64).reshape(height, width)
    glue = np.zeros((n, 4), dtype=np.int32)
    n_h = (width - 1) * height
    h = 1 + np.arange(n_h, dtype=np.int32).reshape(height, width - 1)
    v = 1 + n_h + np.arange(width * (height - 1), dtype=np.int32).reshape(height - 1, width)
    glue[ids[:, :-1].ravel(), Direction.E] = h.ravel()
    glue[ids[:, 1:].ravel(), Direction.W] = h.ravel()
    glue[ids[:-1, :].ravel(), Direction.N] = v.ravel()
    glue[ids[1:, :].ravel(), Direction.S] = v.ravel()
    n_labels = 1 + n_h + v.size
    labels = [""] + [f"h{i}" for i in range(n_h)] + [f"v{i}" for i in range(v.size)]
    strength = np.full(n_labels, temperature, dtype=np.int64)
    strength[0] = 0
    ts = TileSet.from_arrays([f"t{i}" for i in range(n)], labels, strength, glue)
    ys, xs = np.divmod(np.arange(n, dtype=np.int64), width)
    alpha = Assembly.from_arrays(xs, ys, np.arange(n, dtype=np.int64), check=False)
    return TileSystem(ts, temperature), alpha


def generate_square(n: int, temperature: int = 1) -> tuple[TileSystem, Assembly]:
    """``n`` by ``n`` block, distinct tiles, every abutment a private label of strength tau."""
    return _grid_family(n, n, temperature)


def generate_line(n: int, temperature: int = 1) -> tuple[TileSystem, Assembly]:
    return _grid_family(n, 1, temperature)


FAMILIES = {"square": generate_square, "line": generate_line}


def neighbors(p: Position) -> list[Position]:
    x, y = p
    return [(x + dx, y + dy) for dx, dy in (d.vector for d in Direction)]


def random_polyomino(rng: random.Random, k: int) -> list[Position]:
    cells = [(0, 0)]
    have = {(0, 0)}
    while len(cells) < k:
        p = rng.choice(cells)
        q = rng.choice(neighbors(p))
        if q not in have:
            have.add(q)
            cells.append(q)
    return cells


def fixed_polyominoes(k: int) -> list[tuple[Position, ...]]:
    """All fixed polyominoes with ``k`` cells, translated so the row-major least cell is the origin."""
    def norm(cells):
        cells = sorted(cells, key=lambda p: (p[1], p[0]))
        x0, y0 = cells[0]
        return tuple((x - x0, y - y0) for x, y in cells)

    level = {((0, 0),)}
    for _ in range(k - 1):
        nxt = set()
        for shape in level:
            have = set(shape)
            for p in shape:
                for q in neighbors(p):
                    if q not in have:
                        nxt.add(norm(have | {q}))
        level = nxt
    return sorted(level)


def random_tileset(rng: random.Random, n_tiles: int, n_labels: int = 2, max_strength: int = 2,
                   p_null: float = 0.3) -> TileSet:
    strength = {f"g{i}": rng.randint(1, max_strength) for i in range(n_labels)}
    tiles = []
    for i in range(n_tiles):
        sides = {}
        for d in "NESW":
            if rng.random() < p_null:
                sides[d] = None
            else:
                lab = rng.choice(list(strength))
                sides[d] = (lab, strength[lab])
        tiles.append(TileType.make(f"T{i}", **sides))
    return TileSet(tiles)


def random_assembly(rng: random.Random, ts: TileSet, k: int) -> Assembly:
    cells = random_polyomino(rng, k)
    return Assembly([(p, rng.randrange(len(ts))) for p in cells])


def bonded_assembly(cells: list[Position], strength: Callable[[Position, Position], int]
                    ) -> tuple[TileSet, Assembly]:
    """Distinct tile per cell; each abutment gets a private label of the given strength (0 = none)."""
    index = {p: i for i, p in enumerate(cells)}
    sides: list[dict] = [{} for _ in cells]
    for p in cells:
        for d in (Direction.E, Direction.N):
            dx, dy = d.vector
            q = (p[0] + dx, p[1] + dy)
            if q not in index:
                continue
            w = strength(p, q)
            if w > 0:
                lab = f"b{index[p]}_{index[q]}"
                sides[index[p]][d.name] = (lab, w)
                sides[index[q]][d.opposite.name] = (lab, w)
    ts = TileSet(TileType.make(f"P{i}", **s) for i, s in enumerate(sides))
    return ts, Assembly([(p, i) for i, p in enumerate(cells)])


def random_bonded(rng: random.Random, k: int, max_strength: int = 3) -> tuple[TileSet, Assembly]:
    return bonded_assembly(random_polyomino(rng, k),
                           lambda p, q: rng.randint(0, max_strength))


def random_upv_system(rng: random.Random, max_tiles: int = 4, max_size: int = 8
                      ) -> tuple[TileSet, Assembly]:
    """Small temperature-1 system plus candidate assembly, mixing likely-unique and perturbed cases."""
    mode = rng.randrange(5)
    if mode == 0:
        # independent random tiles on a random shape
        ts = random_tileset(rng, rng.randint(1, max_tiles), n_labels=rng.randint(1, 3),
                            max_strength=1, p_null=rng.choice([0.3, 0.5, 0.7]))
        alpha = random_assembly(rng, ts, rng.randint(1, max_size))
    else:
        # a glued shape whose tiles are exactly the tile set, sometimes perturbed
        k = rng.randint(1, max_tiles - 1 if mode == 2 else max_tiles)
        ts, alpha = bonded_assembly(random_polyomino(rng, k),
                                    lambda p, q: int(rng.random() < 0.8))
        tiles = list(ts.tiles)
        if mode == 2 and len(tiles) < max_tiles:
            # add a tile competing for one of the glues, or an inert extra tile
            bound = [(t, d) for t in range(len(tiles)) for d in Direction
                     if tiles[t].glue(d).strength > 0]
            if bound:
                t, d = rng.choice(bound)
                tiles.append(TileType.make(f"X{len(tiles)}", **{d.name: tiles[t].glue(d)}))
            else:
                tiles.append(TileType.make(f"X{len(tiles)}"))
        elif mode == 3 and len(tiles) > 1:
            # make two tiles' opposite faces share a label
            a, b = rng.sample(range(len(tiles)), 2)
            d = rng.choice(list(Direction))
            g = tiles[a].glue(d)
            if g.strength > 0:
                gl = list(tiles[b].glues)
                gl[d.opposite] = g
                tiles[b] = TileType(tiles[b].name, tuple(gl))
        elif mode == 4 and len(alpha) > 1:
            # drop the last grown cell, leaving a glue exposed when it was bound
            last = len(alpha) - 1
            cells = [(p, t) for p, t in alpha.items() if t != last]
            alpha = Assembly(cells)
        try:
            ts = TileSet(tiles)
        except ValueError:
            pass
    return normalize_tileset(ts), alpha
