"""Temperature-1 unique production verification, seeded and hierarchical.

At temperature 1 an assembly containing the seed is producible exactly when
its binding graph is connected, and the subassembly that can grow without
position ``p`` is the seed's component of the binding graph minus ``p``.
Uniqueness then reduces to: no tile other than ``alpha(p)`` can bind at
``p`` to a neighbor ``q`` that is reachable from the seed without ``p``.
Which neighbors are unreachable is read off a depth-first search rooted at
the seed: ``q`` is cut off by ``p`` exactly when it lies in a DFS subtree
of a child ``c`` of ``p`` with ``low(c) >= disc(p)``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import (
    Assembly, BindingGraph, Direction, Position, TileSet, binding_graph, check_tiles,
    is_normalized,
)

UNVISITED, VISITING, VISITED = 0, 1, 2


class Outcome(str, Enum):
    UNIQUE = "unique"
    NOT_PRODUCIBLE = "not-producible"
    NOT_TERMINAL = "not-terminal"
    NOT_UNIQUE = "not-unique"


@dataclass(frozen=True)
class UpvVerdict:
    outcome: Outcome
    position: Position | None = None
    direction: Direction | None = None
    alternative: str | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.outcome is Outcome.UNIQUE

    def describe(self) -> str:
        if self.outcome is not Outcome.NOT_UNIQUE:
            return self.outcome.value + (f": {self.message}" if self.message else "")
        where = f" at {self.position}" if self.position is not None else ""
        via = f" via side {self.direction.name}" if self.direction is not None else ""
        return f"not-unique: tile {self.alternative}{where}{via}" + (
            f" ({self.message})" if self.message else "")


class GlueIndex:
    """Tiles presenting each positive glue on each side: ``(side, label) -> tiles``."""

    def __init__(self, ts: TileSet):
        table: dict[tuple[int, int], list[int]] = defaultdict(list)
        strength = ts.label_strength
        for t, row in enumerate(ts.glue_ids.tolist()):
            for d, lab in enumerate(row):
                if strength[lab] > 0:
                    table[(d, lab)].append(t)
        self.table = {k: tuple(v) for k, v in table.items()}

    def lookup(self, d: Direction, label: int) -> tuple[int, ...]:
        return self.table.get((int(d), int(label)), ())

    def __contains__(self, key) -> bool:
        return (int(key[0]), int(key[1])) in self.table


def build_glue_index(ts: TileSet) -> GlueIndex:
    return GlueIndex(ts)


@dataclass
class BiconnectedDecomposition:
    """DFS state from the seed: discovery/low numbers, tree structure, cut flags.

    ``separates[c]`` says that removing ``parent[c]`` cuts the DFS subtree of
    ``c`` off from the seed.  Subtree of ``v`` = vertices with discovery time
    in ``[disc[v], finish[v])``.
    """

    root: int
    disc: list[int]
    low: list[int]
    finish: list[int]
    parent: list[int]
    children: list[list[int]]
    separates: list[bool]
    cut: list[bool]
    indptr: np.ndarray
    indices: np.ndarray
    steps: int = 0

    def in_subtree(self, v: int, root: int) -> bool:
        return self.disc[root] <= self.disc[v] < self.finish[root]

    def precedes(self, p: int, q: int) -> bool:
        if p == q or self.disc[q] < 0:
            return False
        return any(self.separates[c] and self.in_subtree(q, c) for c in self.children[p])

    def blocks(self) -> list[frozenset[int]]:
        """Vertex sets of the biconnected components (single edges count as blocks)."""
        out = []
        for c in range(len(self.disc)):
            p = self.parent[c]
            if p < 0 or not self.separates[c]:
                continue
            members, stack = {p}, [c]
            while stack:
                v = stack.pop()
                members.add(v)
                stack.extend(k for k in self.children[v] if not self.separates[k])
            out.append(frozenset(members))
        return out


def _csr(n: int, src: np.ndarray, dst: np.ndarray):
    a = np.concatenate([src, dst])
    b = np.concatenate([dst, src])
    order = np.lexsort((b, a))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(a, minlength=n), out=indptr[1:])
    return indptr, b[order]


def decompose(n: int, src, dst, root: int) -> BiconnectedDecomposition:
    """First pass: iterative Hopcroft-Tarjan DFS from ``root``."""
    indptr, indices = _csr(n, np.asarray(src), np.asarray(dst))
    ptr = indptr[:-1].tolist()
    end = indptr[1:].tolist()
    nbr = indices.tolist()
    disc = [-1] * n
    low = [0] * n
    finish = [0] * n
    parent = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    separates = [False] * n
    clock = 1
    disc[root] = 0
    stack = [root]
    steps = 0
    while stack:
        v = stack[-1]
        i = ptr[v]
        if i < end[v]:
            ptr[v] = i + 1
            u = nbr[i]
            steps += 1
            if disc[u] < 0:
                disc[u] = low[u] = clock
                clock += 1
                parent[u] = v
                children[v].append(u)
                stack.append(u)
            elif u != parent[v] and disc[u] < low[v]:
                low[v] = disc[u]
        else:
            stack.pop()
            finish[v] = clock
            p = parent[v]
            if p >= 0:
                if low[v] < low[p]:
                    low[p] = low[v]
                separates[v] = low[v] >= disc[p]
    cut = [False] * n
    for v in range(n):
        if disc[v] < 0:
            continue
        if v == root:
            cut[v] = len(children[v]) >= 2
        else:
            cut[v] = any(separates[c] for c in children[v])
    return BiconnectedDecomposition(root, disc, low, finish, parent, children, separates, cut,
                                    indptr, indices, steps)


@dataclass
class PrecedenceMap:
    """Ordered grid-adjacent rank pairs ``(p, q)`` with ``p`` preceding ``q``."""

    assembly: Assembly
    pairs: set[tuple[int, int]] = field(default_factory=set)
    steps: int = 0

    def holds(self, p: Position, q: Position) -> bool:
        rank = self.assembly.rank
        return (rank[tuple(p)], rank[tuple(q)]) in self.pairs


def _precedence_pairs(alpha: Assembly, dec: BiconnectedDecomposition) -> tuple[set, int]:
    """Second pass: replay the same DFS with visiting/visited marks.

    On entering ``q``, a grid neighbor ``p`` that is still being visited is an
    ancestor of ``q``; ``cur[p]`` is the child of ``p`` whose subtree holds
    ``q``, so ``p`` precedes ``q`` iff that child is separated from the seed
    by ``p``.
    """
    n = len(alpha)
    grid = alpha.grid_neighbors()
    indptr, indices = dec.indptr, dec.indices
    ptr = indptr[:-1].tolist()
    end = indptr[1:].tolist()
    nbr = indices.tolist()
    mark = [UNVISITED] * n
    cur = [-1] * n
    separates = dec.separates
    pairs: set[tuple[int, int]] = set()
    steps = 0
    root = dec.root
    mark[root] = VISITING
    stack = [root]
    while stack:
        v = stack[-1]
        i = ptr[v]
        if i < end[v]:
            ptr[v] = i + 1
            u = nbr[i]
            steps += 1
            if mark[u] == UNVISITED:
                cur[v] = u
                mark[u] = VISITING
                for p in grid[u]:
                    steps += 1
                    if mark[p] == VISITING and separates[cur[p]]:
                        pairs.add((p, u))
                stack.append(u)
        else:
            stack.pop()
            mark[v] = VISITED
    return pairs, steps


def precedes_map(alpha: Assembly, ts: TileSet, seed_pos: Position,
                 bg: BindingGraph | None = None) -> PrecedenceMap:
    if seed_pos not in alpha:
        raise KeyError(f"seed position {seed_pos} is not in the assembly")
    bg = bg if bg is not None else binding_graph(alpha, ts)
    dec = decompose(len(alpha), bg.src, bg.dst, alpha.rank[tuple(seed_pos)])
    pairs, steps = _precedence_pairs(alpha, dec)
    return PrecedenceMap(alpha, pairs, dec.steps + steps)


def precedes(alpha: Assembly, ts: TileSet, seed_pos: Position, p: Position, q: Position) -> bool:
    """True iff removing ``p`` from the binding graph cuts ``q`` off from the seed."""
    for r in (seed_pos, p, q):
        if r not in alpha:
            raise KeyError(f"position {r} is not in the assembly")
    bg = binding_graph(alpha, ts)
    rank = alpha.rank
    dec = decompose(len(alpha), bg.src, bg.dst, rank[tuple(seed_pos)])
    return dec.precedes(rank[tuple(p)], rank[tuple(q)])


def _require_normalized(ts: TileSet) -> None:
    if not is_normalized(ts):
        raise ValueError("tile set has functionally null glues; normalize it first")


def _terminal_violation(alpha: Assembly, ts: TileSet):
    """First (position, side) with a positive glue facing an empty position."""
    g = ts.glue_ids
    strength = ts.label_strength
    for (x, y), t in alpha.items():
        for d in Direction:
            if strength[g[t, d]] > 0:
                dx, dy = d.vector
                if (x + dx, y + dy) not in alpha:
                    return (x, y), d
    return None


def _structural(alpha: Assembly, ts: TileSet, bg: BindingGraph) -> UpvVerdict | None:
    if not bg.is_connected():
        return UpvVerdict(Outcome.NOT_PRODUCIBLE, message="binding graph is not connected")
    bad = _terminal_violation(alpha, ts)
    if bad is not None:
        return UpvVerdict(Outcome.NOT_TERMINAL,
                          message=f"positive glue on unbound side {bad[1].name} of {bad[0]}")
    return None


def _uniqueness(alpha: Assembly, ts: TileSet, anchor: Position, index: GlueIndex,
                bg: BindingGraph) -> UpvVerdict:
    prec = precedes_map(alpha, ts, anchor, bg)
    g = ts.glue_ids
    pos = alpha.positions
    tiles = alpha.tiles.tolist()
    src, dst, dirs = alpha.grid_edges
    # each grid edge (a -> b in direction d) is checked both ways
    for a, b, d in zip(src.tolist(), dst.tolist(), dirs.tolist()):
        for p, q, toward_p in ((a, b, (d + 2) % 4), (b, a, d)):
            if (p, q) in prec.pairs:
                continue
            label = g[tiles[q], toward_p]
            for t in index.lookup(Direction((toward_p + 2) % 4), label):
                if t != tiles[p]:
                    return UpvVerdict(Outcome.NOT_UNIQUE, pos[p], Direction((toward_p + 2) % 4),
                                      ts.names[t], f"can bind to {pos[q]}")
    return UpvVerdict(Outcome.UNIQUE)


def upv_seeded_t1(ts: TileSet, seed: str, alpha: Assembly, anchor: Position | None = None,
                  strict_anchors: bool = False) -> UpvVerdict:
    """Is ``alpha`` the unique terminal assembly of the temperature-1 system seeded by ``seed``?

    ``anchor`` is where the seed sits in ``alpha``; by default the row-major
    least occurrence.  With ``strict_anchors`` every occurrence is tried and
    the first failure is reported.
    """
    _require_normalized(ts)
    check_tiles(alpha, ts)
    s = ts.index(seed)
    occurrences = [p for p, t in alpha.items() if t == s]
    if anchor is not None:
        anchor = tuple(anchor)
        if anchor not in alpha:
            raise KeyError(f"anchor {anchor} is not in the assembly")
        if alpha[anchor] != s:
            raise ValueError(f"anchor {anchor} holds {ts.names[alpha[anchor]]!r}, not {seed!r}")
        anchors = [anchor]
    elif not occurrences:
        return UpvVerdict(Outcome.NOT_PRODUCIBLE, message=f"seed {seed!r} does not occur")
    else:
        anchors = occurrences if strict_anchors else occurrences[:1]
    bg = binding_graph(alpha, ts)
    early = _structural(alpha, ts, bg)
    if early is not None:
        return early
    index = GlueIndex(ts)
    for a in anchors:
        verdict = _uniqueness(alpha, ts, a, index, bg)
        if not verdict:
            return verdict
    return UpvVerdict(Outcome.UNIQUE)


def upv_hier_t1(ts: TileSet, alpha: Assembly, strict_anchors: bool = False) -> UpvVerdict:
    """Is ``alpha`` the unique terminal assembly of the temperature-1 hierarchical system?

    Unique iff every tile type occurs in ``alpha`` and, for every tile type
    ``s``, ``alpha`` is the unique terminal assembly when seeded by ``s``.
    """
    _require_normalized(ts)
    check_tiles(alpha, ts)
    present = np.zeros(len(ts), dtype=bool)
    present[alpha.tiles] = True
    if not present.all():
        missing = ts.names[int(np.argmin(present))]
        return UpvVerdict(Outcome.NOT_UNIQUE, alternative=missing,
                          message="tile type never occurs in the assembly")
    bg = binding_graph(alpha, ts)
    early = _structural(alpha, ts, bg)
    if early is not None:
        return early
    index = GlueIndex(ts)
    anchors: dict[int, list[Position]] = defaultdict(list)
    for p, t in alpha.items():
        if strict_anchors or t not in anchors:
            anchors[t].append(p)
    for t in range(len(ts)):
        for a in anchors[t]:
            verdict = _uniqueness(alpha, ts, a, index, bg)
            if not verdict:
                return verdict
    return UpvVerdict(Outcome.UNIQUE)

