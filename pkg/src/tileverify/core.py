"""Domain model of the abstract Tile Assembly Model.

Tile sets are stored column-wise: glue labels are interned to dense integer
ids (id 0 is the null glue) and every tile type is a row of four label ids
indexed by :class:`Direction`.  Assemblies are immutable, sorted row-major
(by ``y`` then ``x``), and always have a connected, nonempty domain.

Position ranks (the index of a position in row-major order) are used as
vertex ids by every graph algorithm in the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

Position = tuple[int, int]

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1
NULL_LABEL = ""


class Direction(IntEnum):
    N = 0
    E = 1
    S = 2
    W = 3

    @property
    def vector(self) -> Position:
        return _VECTORS[self]

    @property
    def opposite(self) -> Direction:
        return Direction((self + 2) % 4)

    def __neg__(self) -> Direction:
        return self.opposite

    @classmethod
    def between(cls, p: Position, q: Position) -> Direction:
        """Direction ``d`` with ``q == p + d``."""
        return _BY_VECTOR[(q[0] - p[0], q[1] - p[1])]


_VECTORS = {Direction.N: (0, 1), Direction.E: (1, 0), Direction.S: (0, -1), Direction.W: (-1, 0)}
_BY_VECTOR = {v: d for d, v in _VECTORS.items()}
DX = np.array([0, 1, 0, -1], dtype=np.int64)
DY = np.array([1, 0, -1, 0], dtype=np.int64)


class AssemblyError(ValueError):
    pass


class DisconnectedDomain(AssemblyError):
    def __init__(self, message: str = "domain not connected"):
        super().__init__(message)


class InconsistentOverlap(AssemblyError):
    def __init__(self, position: Position, left: int, right: int):
        super().__init__(f"assemblies disagree at {position}: tile {left} vs tile {right}")
        self.position = position


class Glue(NamedTuple):
    label: str
    strength: int

    @property
    def is_null(self) -> bool:
        return self.strength == 0


NULL_GLUE = Glue(NULL_LABEL, 0)


def _as_glue(g) -> Glue:
    if g is None:
        return NULL_GLUE
    g = Glue(*g)
    if g.strength < 0:
        raise ValueError(f"negative glue strength on {g.label!r}")
    if g.strength == 0 or g.label == NULL_LABEL:
        return NULL_GLUE
    return g


@dataclass(frozen=True)
class TileType:
    name: str
    glues: tuple[Glue, Glue, Glue, Glue]

    def __post_init__(self):
        if len(self.glues) != 4:
            raise ValueError(f"tile {self.name!r} needs exactly four sides")

    @classmethod
    def make(cls, name: str, N=None, E=None, S=None, W=None) -> TileType:
        """Build a tile from per-side ``(label, strength)`` pairs; ``None`` is null."""
        return cls(name, tuple(_as_glue(g) for g in (N, E, S, W)))

    def glue(self, d: Direction) -> Glue:
        return self.glues[d]


class TileSet:
    """Ordered collection of tile types with a global label -> strength table."""

    def __init__(self, tiles: Iterable[TileType]):
        tiles = list(tiles)
        names = [t.name for t in tiles]
        seen: set[str] = set()
        for n in names:
            if n in seen:
                raise ValueError(f"duplicate tile name {n!r}")
            seen.add(n)
        label_names = [NULL_LABEL]
        strengths = [0]
        label_id = {NULL_LABEL: 0}
        glue_ids = np.zeros((len(tiles), 4), dtype=np.int32)
        for i, t in enumerate(tiles):
            for d in Direction:
                g = _as_glue(t.glues[d])
                k = label_id.get(g.label)
                if k is None:
                    k = label_id[g.label] = len(label_names)
                    label_names.append(g.label)
                    strengths.append(g.strength)
                elif strengths[k] != g.strength:
                    raise ValueError(
                        f"glue {g.label!r} used with strengths {strengths[k]} and {g.strength}"
                    )
                glue_ids[i, d] = k
        self._init(names, label_names, np.asarray(strengths, dtype=np.int64), glue_ids)

    def _init(self, names, label_names, label_strength, glue_ids):
        self.names = list(names)
        self.label_names = list(label_names)
        self.label_strength = np.asarray(label_strength, dtype=np.int64)
        self.glue_ids = np.asarray(glue_ids, dtype=np.int32).reshape(len(self.names), 4)
        self.label_strength.setflags(write=False)
        self.glue_ids.setflags(write=False)

    @classmethod
    def from_arrays(cls, names: Sequence[str], label_names: Sequence[str],
                    label_strength, glue_ids) -> TileSet:
        """Construct without per-tile objects; used by the large benchmark families.

        ``label_names[0]`` must be the null label with strength 0.
        """
        if label_names[0] != NULL_LABEL or int(label_strength[0]) != 0:
            raise ValueError("label 0 must be the null glue")
        ts = cls.__new__(cls)
        ts._init(names, label_names, label_strength, glue_ids)
        if len(ts.name_index) != len(ts.names):
            raise ValueError("duplicate tile name")
        if np.any(ts.label_strength[1:] <= 0):
            raise ValueError("non-null labels need positive strength")
        return ts

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[TileType]:
        return iter(self.tiles)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TileSet):
            return NotImplemented
        return self.tiles == other.tiles

    def __repr__(self) -> str:
        return f"TileSet({len(self)} tiles, {len(self.label_names) - 1} labels)"

    @cached_property
    def tiles(self) -> tuple[TileType, ...]:
        return tuple(self.tile(i) for i in range(len(self.names)))

    def tile(self, i: int) -> TileType:
        row = self.glue_ids[i]
        return TileType(self.names[i], tuple(
            Glue(self.label_names[k], int(self.label_strength[k])) for k in row.tolist()
        ))

    @cached_property
    def name_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self.name_index[name]
        except KeyError:
            raise KeyError(f"unknown tile {name!r}") from None

    @cached_property
    def label_table(self) -> dict[str, int]:
        return {n: int(s) for n, s in zip(self.label_names[1:], self.label_strength[1:])}

    def side_label(self, tile: int, d: Direction) -> int:
        return int(self.glue_ids[tile, d])

    def side_strength(self, tile: int, d: Direction) -> int:
        return int(self.label_strength[self.glue_ids[tile, d]])

    def with_glue_ids(self, glue_ids) -> TileSet:
        return TileSet.from_arrays(self.names, self.label_names, self.label_strength, glue_ids)

    def permuted(self, order: Sequence[int]) -> TileSet:
        """Tile set whose ``i``-th tile is this set's ``order[i]``-th tile."""
        return TileSet.from_arrays([self.names[i] for i in order], self.label_names,
                                   self.label_strength, self.glue_ids[list(order)])


@dataclass(frozen=True)
class TileSystem:
    tileset: TileSet
    temperature: int = 1
    seed: str | None = None
    nulled: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.temperature < 1:
            raise ValueError("temperature must be a positive integer")
        if self.seed is not None and self.seed not in self.tileset.name_index:
            raise ValueError(f"seed {self.seed!r} is not a tile in the tile set")


def functionally_null_glues(ts: TileSet) -> list[tuple[str, Direction, str]]:
    """Positive glues that no tile presents on the opposite side, as (tile, side, label)."""
    mask = _functionally_null_mask(ts)
    return [(ts.names[i], Direction(d), ts.label_names[ts.glue_ids[i, d]])
            for i, d in zip(*np.nonzero(mask))]


def _functionally_null_mask(ts: TileSet) -> np.ndarray:
    g = ts.glue_ids
    mask = np.zeros(g.shape, dtype=bool)
    nlab = len(ts.label_names)
    for d in Direction:
        present = np.zeros(nlab, dtype=bool)
        present[g[:, d.opposite]] = True
        mask[:, d] = (g[:, d] != 0) & ~present[g[:, d]]
    return mask


def normalize_tileset(ts: TileSet) -> TileSet:
    mask = _functionally_null_mask(ts)
    if not mask.any():
        return ts
    g = ts.glue_ids.copy()
    g[mask] = 0
    return ts.with_glue_ids(g)


def is_normalized(ts: TileSet) -> bool:
    return not _functionally_null_mask(ts).any()


def interacts(t: TileType, d: Direction, u: TileType) -> bool:
    a, b = t.glue(d), u.glue(Direction(d).opposite)
    return a.label == b.label and a.strength == b.strength and a.strength > 0


def _grid_edges(xs: np.ndarray, ys: np.ndarray):
    """East and north neighbor pairs of a row-major sorted position list."""
    n = len(xs)
    if n < 2:
        e = np.zeros(0, dtype=np.int64)
        return e, e, e
    x0, y0 = int(xs.min()), int(ys.min())
    width = int(xs.max()) - x0 + 1
    keys = (ys - y0) * width + (xs - x0)
    idx = np.arange(n, dtype=np.int64)
    src, dst, dirs = [], [], []
    for d, offset, ok in ((Direction.E, 1, (xs - x0) < width - 1), (Direction.N, width, None)):
        target = keys + offset
        j = np.searchsorted(keys, target)
        j[j >= n] = n - 1
        hit = keys[j] == target
        if ok is not None:
            hit &= ok
        src.append(idx[hit])
        dst.append(j[hit])
        dirs.append(np.full(int(hit.sum()), int(d), dtype=np.int64))
    return np.concatenate(src), np.concatenate(dst), np.concatenate(dirs)


def _is_connected(n: int, src: np.ndarray, dst: np.ndarray) -> bool:
    if n <= 1:
        return True
    if len(src) < n - 1:
        return False
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    k, _ = connected_components(g, directed=False)
    return k == 1


class Assembly:
    """Finite connected partial map from grid positions to tile indices."""

    def __init__(self, placements: Mapping[Position, int] | Iterable[tuple[Position, int]]):
        items = placements.items() if isinstance(placements, Mapping) else placements
        items = list(items)
        xs = np.fromiter((p[0] for p, _ in items), dtype=np.int64, count=len(items))
        ys = np.fromiter((p[1] for p, _ in items), dtype=np.int64, count=len(items))
        tiles = np.fromiter((t for _, t in items), dtype=np.int64, count=len(items))
        self._setup(xs, ys, tiles, check=True)

    @classmethod
    def from_arrays(cls, xs, ys, tiles, check: bool = True) -> Assembly:
        a = cls.__new__(cls)
        a._setup(np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64),
                 np.asarray(tiles, dtype=np.int64), check=check)
        return a

    def _setup(self, xs, ys, tiles, check):
        n = len(xs)
        if n == 0:
            raise AssemblyError("assembly is empty")
        if len(ys) != n or len(tiles) != n:
            raise AssemblyError("coordinate and tile arrays differ in length")
        if min(xs.min(), ys.min()) < INT32_MIN or max(xs.max(), ys.max()) > INT32_MAX:
            raise OverflowError("coordinates must fit in 32-bit signed integers")
        if np.any(tiles < 0):
            raise AssemblyError("negative tile index")
        order = np.lexsort((xs, ys))
        if not np.array_equal(order, np.arange(n)):
            xs, ys, tiles = xs[order], ys[order], tiles[order]
        if check and n > 1:
            dup = (xs[1:] == xs[:-1]) & (ys[1:] == ys[:-1])
            if dup.any():
                i = int(np.argmax(dup))
                raise AssemblyError(f"duplicate position {(int(xs[i]), int(ys[i]))}")
        for arr in (xs, ys, tiles):
            arr.setflags(write=False)
        self.xs, self.ys, self.tiles = xs, ys, tiles
        if check:
            src, dst, _ = self.grid_edges
            if not _is_connected(n, src, dst):
                raise DisconnectedDomain()

    def __len__(self) -> int:
        return len(self.xs)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.rank

    def __getitem__(self, p: Position) -> int:
        return int(self.tiles[self.rank[tuple(p)]])

    def get(self, p: Position, default=None):
        i = self.rank.get(tuple(p))
        return default if i is None else int(self.tiles[i])

    def __iter__(self) -> Iterator[Position]:
        return iter(self.positions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Assembly):
            return NotImplemented
        return (len(self) == len(other) and np.array_equal(self.xs, other.xs)
                and np.array_equal(self.ys, other.ys) and np.array_equal(self.tiles, other.tiles))

    def __hash__(self) -> int:
        return hash((self.xs.tobytes(), self.ys.tobytes(), self.tiles.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {t}" for p, t in list(self.items())[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"Assembly({{{body}{more}}})"

    @cached_property
    def positions(self) -> list[Position]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    @cached_property
    def rank(self) -> dict[Position, int]:
        """Row-major rank of every position."""
        return {p: i for i, p in enumerate(self.positions)}

    def items(self) -> Iterator[tuple[Position, int]]:
        return zip(self.positions, self.tiles.tolist())

    def placements(self) -> dict[Position, int]:
        return dict(self.items())

    @cached_property
    def grid_edges(self):
        """(src, dst, direction) arrays with ``pos[dst] == pos[src] + direction``."""
        return _grid_edges(self.xs, self.ys)

    def grid_neighbors(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(len(self))]
        src, dst, _ = self.grid_edges
        for a, b in zip(src.tolist(), dst.tolist()):
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def restrict(self, ranks: Iterable[int]) -> Assembly:
        idx = np.fromiter(sorted(ranks), dtype=np.int64)
        return Assembly.from_arrays(self.xs[idx], self.ys[idx], self.tiles[idx])

    def tile_names(self, ts: TileSet) -> dict[Position, str]:
        return {p: ts.names[t] for p, t in self.items()}


def check_tiles(alpha: Assembly, ts: TileSet) -> None:
    if int(alpha.tiles.max()) >= len(ts):
        i = int(np.argmax(alpha.tiles >= len(ts)))
        raise AssemblyError(f"tile index {int(alpha.tiles[i])} at {alpha.positions[i]} "
                            f"is not in the tile set")


@dataclass(frozen=True, eq=False)
class BindingGraph:
    """Interacting abutments of an assembly; vertices are row-major position ranks."""

    assembly: Assembly
    src: np.ndarray
    dst: np.ndarray
    direction: np.ndarray
    weight: np.ndarray
    mismatches: np.ndarray  # (k, 2) rank pairs whose abutting glues differ

    @property
    def num_vertices(self) -> int:
        return len(self.assembly)

    @property
    def num_edges(self) -> int:
        return len(self.src)

    def edges(self) -> list[tuple[tuple[Position, Position], int]]:
        pos = self.assembly.positions
        return [((pos[a], pos[b]), w) for a, b, w in
                zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist())]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for a, b in zip(self.src.tolist(), self.dst.tolist()):
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def weight_matrix(self) -> np.ndarray:
        n = self.num_vertices
        m = np.zeros((n, n), dtype=np.int64)
        m[self.src, self.dst] = self.weight
        m[self.dst, self.src] = self.weight
        return m

    def is_connected(self) -> bool:
        return _is_connected(self.num_vertices, self.src, self.dst)


def binding_graph(alpha: Assembly, ts: TileSet) -> BindingGraph:
    check_tiles(alpha, ts)
    src, dst, dirs = alpha.grid_edges
    lab_src = ts.glue_ids[alpha.tiles[src], dirs]
    lab_dst = ts.glue_ids[alpha.tiles[dst], (dirs + 2) % 4]
    strength = ts.label_strength[lab_src]
    bound = (lab_src == lab_dst) & (strength > 0)
    mismatch = (lab_src != lab_dst) & ((strength > 0) | (ts.label_strength[lab_dst] > 0))
    return BindingGraph(alpha, src[bound], dst[bound], dirs[bound], strength[bound],
                        np.stack([src[mismatch], dst[mismatch]], axis=1))


def bond_strength(alpha: Assembly, ts: TileSet, p: Position, q: Position) -> int:
    for r in (p, q):
        if r not in alpha:
            raise KeyError(f"position {r} is not in the assembly")
    v = (q[0] - p[0], q[1] - p[1])
    if v not in _BY_VECTOR:
        return 0
    d = _BY_VECTOR[v]
    t, u = alpha[p], alpha[q]
    check_tiles(alpha, ts)
    a, b = ts.side_label(t, d), ts.side_label(u, d.opposite)
    return ts.side_strength(t, d) if a == b else 0


def stoer_wagner(weights: np.ndarray) -> float:
    """Weight of a global minimum cut of a symmetric weight matrix (inf for one vertex)."""
    w = np.array(weights, dtype=np.int64)
    alive = list(range(len(w)))
    best = math.inf
    while len(alive) > 1:
        sub = w[np.ix_(alive, alive)]
        k = len(alive)
        added = np.zeros(k, dtype=bool)
        conn = sub[0].astype(np.float64)
        added[0] = True
        prev, last = 0, 0
        for _ in range(k - 1):
            masked = np.where(added, -1.0, conn)
            nxt = int(np.argmax(masked))
            added[nxt] = True
            phase_cut = conn[nxt]
            prev, last = last, nxt
            conn = conn + sub[nxt]
        best = min(best, phase_cut)
        s, t = alive[prev], alive[last]
        w[s, :] += w[t, :]
        w[:, s] += w[:, t]
        w[s, s] = 0
        alive.remove(t)
    return best


def min_cut(alpha: Assembly, ts: TileSet) -> float:
    bg = binding_graph(alpha, ts)
    if bg.num_vertices == 1:
        return math.inf
    if not bg.is_connected():
        return 0
    return stoer_wagner(bg.weight_matrix())


def is_stable(alpha: Assembly, ts: TileSet, temperature: int) -> bool:
    return min_cut(alpha, ts) >= temperature


def translate(alpha: Assembly, v: Sequence[int]) -> Assembly:
    dx, dy = int(v[0]), int(v[1])
    return Assembly.from_arrays(alpha.xs + dx, alpha.ys + dy, alpha.tiles, check=False)


def consistent(alpha: Assembly, beta: Assembly) -> bool:
    return _first_conflict(alpha, beta) is None


def _first_conflict(alpha: Assembly, beta: Assembly):
    small, big = (alpha, beta) if len(alpha) <= len(beta) else (beta, alpha)
    for p, t in small.items():
        u = big.get(p)
        if u is not None and u != t:
            a, b = (t, u) if small is alpha else (u, t)
            return p, a, b
    return None


def union(alpha: Assembly, beta: Assembly) -> Assembly:
    conflict = _first_conflict(alpha, beta)
    if conflict is not None:
        raise InconsistentOverlap(*conflict)
    placements = beta.placements()
    placements.update(alpha.items())
    return Assembly(placements)


def is_subassembly(alpha: Assembly, beta: Assembly) -> bool:
    if len(alpha) > len(beta):
        return False
    return all(beta.get(p) == t for p, t in alpha.items())


def find_embedding(beta: Assembly, alpha: Assembly) -> Position | None:
    """Least ``v`` (by y, then x) with ``translate(beta, v)`` a subassembly of ``alpha``."""
    if len(beta) > len(alpha):
        return None
    (bx, by), bt = beta.positions[0], int(beta.tiles[0])
    rel = [((x - bx, y - by), t) for (x, y), t in beta.items()]
    for (ax, ay), at in alpha.items():
        if at != bt:
            continue
        if all(alpha.get((ax + dx, ay + dy)) == t for (dx, dy), t in rel):
            return (ax - bx, ay - by)
    return None


def row_major_key(p: Position) -> tuple[int, int]:
    return (p[1], p[0])
