"""Brute-force reference implementations; correctness over speed.

Everything here works from the tile glue objects directly (labels and
strengths as written), not from the interned arrays or binding graphs the
fast algorithms use, and searches the definitions exhaustively.  Size caps
raise :class:`OracleLimit` instead of truncating.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .core import Assembly, Direction, Position, TileSet, find_embedding

Canonical = tuple  # ((x, y), tile) pairs, row-major, least position at the origin

_STEPS = [(d, d.vector) for d in Direction]


class OracleLimit(RuntimeError):
    pass


def canonical(alpha: Assembly | dict) -> Canonical:
    items = alpha.items() if not isinstance(alpha, Assembly) else list(alpha.items())
    items = sorted(items, key=lambda it: (it[0][1], it[0][0]))
    (x0, y0), _ = items[0]
    return tuple(((x - x0, y - y0), t) for (x, y), t in items)


def to_assembly(canon: Canonical) -> Assembly:
    return Assembly(list(canon))


def _bind_table(ts: TileSet) -> dict[tuple[int, Direction, int], int]:
    """Strength with which tile ``t`` binds tile ``u`` placed on its ``d`` side."""
    table = {}
    tiles = ts.tiles
    for t, a in enumerate(tiles):
        for d in Direction:
            g = a.glue(d)
            if g.strength <= 0:
                continue
            for u, b in enumerate(tiles):
                h = b.glue(d.opposite)
                if h.label == g.label and h.strength == g.strength:
                    table[(t, d, u)] = g.strength
    return table


def _bonds(placed: dict[Position, int], table) -> list[tuple[Position, Position, int]]:
    out = []
    for (x, y), t in placed.items():
        for d in (Direction.E, Direction.N):
            dx, dy = d.vector
            q = (x + dx, y + dy)
            u = placed.get(q)
            if u is not None and (t, d, u) in table:
                out.append(((x, y), q, table[(t, d, u)]))
    return out


def producible_oracle(alpha: Assembly, ts: TileSet, temperature: int, max_size: int = 20) -> bool:
    """Subset dynamic program over the definition of an assembly tree.

    A set of positions is buildable iff it is a single tile or splits into two
    buildable parts whose seam is at least the temperature.
    """
    n = len(alpha)
    if n > max_size:
        raise OracleLimit(f"assembly has {n} tiles; oracle cap is {max_size}")
    placed = alpha.placements()
    rank = {p: i for i, p in enumerate(placed)}
    edges = [(1 << rank[p], 1 << rank[q], w) for p, q, w in _bonds(placed, _bind_table(ts))]

    def seam(a: int, b: int) -> int:
        return sum(w for u, v, w in edges if (u & a and v & b) or (u & b and v & a))

    @lru_cache(maxsize=None)
    def buildable(mask: int) -> bool:
        if mask & (mask - 1) == 0:
            return True
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            part = sub | low
            other = mask ^ part
            if other and seam(part, other) >= temperature and buildable(part) and buildable(other):
                return True
            if sub == 0:
                return False
            sub = (sub - 1) & rest

    return buildable((1 << n) - 1)


def min_cut_oracle(alpha: Assembly, ts: TileSet, max_size: int = 16) -> float:
    """Minimum over all bipartitions of the bond strength crossing them."""
    n = len(alpha)
    if n > max_size:
        raise OracleLimit(f"assembly has {n} tiles; oracle cap is {max_size}")
    if n == 1:
        return float("inf")
    placed = alpha.placements()
    rank = {p: i for i, p in enumerate(placed)}
    edges = [(rank[p], rank[q], w) for p, q, w in _bonds(placed, _bind_table(ts))]
    best = float("inf")
    for mask in range(1, 1 << (n - 1)):
        cut = sum(w for u, v, w in edges if ((mask >> u) ^ (mask >> v)) & 1)
        best = min(best, cut)
    return best


def _closure(ts: TileSet, temperature: int, max_size: int, cap: int) -> Iterator[Canonical]:
    """Producible assemblies up to ``max_size`` tiles, each yielded once when found."""
    table = _bind_table(ts)
    found: set[Canonical] = set()
    queue: deque[Canonical] = deque()
    done: list[Canonical] = []

    def add(c: Canonical):
        if c in found:
            return False
        if len(found) >= cap:
            raise OracleLimit(f"more than {cap} producible assemblies")
        found.add(c)
        queue.append(c)
        return True

    for t in range(len(ts)):
        c = (((0, 0), t),)
        if add(c):
            yield c
    while queue:
        x = queue.popleft()
        done.append(x)
        xmap = dict(x)
        for y in done:
            if len(x) + len(y) > max_size:
                continue
            for c in _combine(xmap, y, table, temperature):
                if add(c):
                    yield c


def _combine(xmap: dict, y: Canonical, table, temperature: int) -> Iterator[Canonical]:
    offsets = set()
    for (px, py), t in xmap.items():
        for d, (dx, dy) in _STEPS:
            for (qx, qy), u in y:
                if (t, d, u) in table:
                    offsets.add((px + dx - qx, py + dy - qy))
    for vx, vy in offsets:
        moved = {(qx + vx, qy + vy): u for (qx, qy), u in y}
        if any(p in xmap for p in moved):
            continue
        seam = 0
        for (px, py), t in moved.items():
            for d, (dx, dy) in _STEPS:
                u = xmap.get((px + dx, py + dy))
                if u is not None:
                    seam += table.get((t, d, u), 0)
        # both parts are stable, so the union is stable iff the seam reaches tau
        if seam >= temperature:
            merged = dict(xmap)
            merged.update(moved)
            yield canonical(merged)


def enumerate_producible(ts: TileSet, temperature: int, max_size: int,
                         cap: int = 50_000) -> set[Canonical]:
    return set(_closure(ts, temperature, max_size, cap))


def _can_attach_tile(placed: dict[Position, int], ts: TileSet, table) -> bool:
    """Some tile type binds (at temperature 1) to some empty neighbor position."""
    for (x, y), t in placed.items():
        for d, (dx, dy) in _STEPS:
            q = (x + dx, y + dy)
            if q in placed:
                continue
            if any((t, d, u) in table for u in range(len(ts))):
                return True
    return False


def upv_hier_oracle(ts: TileSet, alpha: Assembly, temperature: int = 1, max_size: int = 8,
                    max_tiles: int = 4, cap: int = 50_000) -> bool:
    """Unique production by enumeration: every producible assembly embeds in ``alpha``.

    The closure is explored to ``2|alpha|`` tiles and stops at the first
    assembly with no embedding.  An assembly that is not embeddable but
    minimal has two producible children that do embed, so each has at most
    ``|alpha|`` tiles and the bound is enough.
    """
    if temperature != 1:
        raise ValueError("the enumeration oracle is for temperature 1")
    if len(alpha) > max_size or len(ts) > max_tiles:
        raise OracleLimit("instance exceeds the oracle size caps")
    target = canonical(alpha)
    seen_target = False
    for c in _closure(ts, temperature, 2 * len(alpha), cap):
        if c == target:
            seen_target = True
        if len(c) > len(alpha) or find_embedding(to_assembly(c), alpha) is None:
            return False
    if not seen_target:
        return False
    return not _can_attach_tile(alpha.placements(), ts, _bind_table(ts))


def upv_seeded_oracle(ts: TileSet, seed: str, alpha: Assembly, anchor: Position,
                      max_size: int = 8, max_tiles: int = 4) -> bool:
    """Seeded temperature-1 unique production by exhaustive single-tile accretion."""
    if len(alpha) > max_size or len(ts) > max_tiles:
        raise OracleLimit("instance exceeds the oracle size caps")
    s = ts.index(seed)
    anchor = tuple(anchor)
    if alpha.get(anchor) != s:
        raise ValueError("anchor does not hold the seed tile")
    table = _bind_table(ts)
    target = alpha.placements()
    start = frozenset([(anchor, s)])
    seen = {start}
    queue = deque([start])
    while queue:
        cur = dict(queue.popleft())
        for (x, y), t in list(cur.items()):
            for d, (dx, dy) in _STEPS:
                q = (x + dx, y + dy)
                if q in cur:
                    continue
                for u in range(len(ts)):
                    if (t, d, u) not in table:
                        continue
                    if target.get(q) != u:
                        return False
                    grown = frozenset(cur.items() | {(q, u)})
                    if grown not in seen:
                        seen.add(grown)
                        queue.append(grown)
    if frozenset(target.items()) not in seen:
        return False
    return not _can_attach_tile(target, ts, table)


def precedes_oracle(alpha: Assembly, ts: TileSet, seed_pos: Position, p: Position,
                    q: Position) -> bool:
    """Delete ``p``, search from the seed; true iff ``q`` is not reached."""
    placed = alpha.placements()
    adj: dict[Position, list[Position]] = {r: [] for r in placed}
    for a, b, _ in _bonds(placed, _bind_table(ts)):
        adj[a].append(b)
        adj[b].append(a)
    p, q, seed_pos = tuple(p), tuple(q), tuple(seed_pos)
    if seed_pos == p:
        return True
    seen = {seed_pos}
    queue = deque([seed_pos])
    while queue:
        r = queue.popleft()
        for s in adj[r]:
            if s != p and s not in seen:
                seen.add(s)
                queue.append(s)
    return q not in seen


def all_partitions(items: list) -> Iterator[list[list]]:
    """Every set partition of ``items`` (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in all_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def all_full_binary_trees(items: tuple) -> Iterator:
    """Every unordered full binary tree with the given labelled leaves, as nested pairs."""
    if len(items) == 1:
        yield items[0]
        return
    first, rest = items[0], items[1:]
    # the side holding ``first`` picks a subset of the rest; the other side is nonempty
    for k in range(len(rest)):
        for chosen in combinations(rest, k):
            left = (first,) + chosen
            right = tuple(x for x in rest if x not in chosen)
            for lt in all_full_binary_trees(left):
                for rt in all_full_binary_trees(right):
                    yield (lt, rt)
