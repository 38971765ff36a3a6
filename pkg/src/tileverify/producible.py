"""Hierarchical producibility by greedy component merging.

Both deciders start from one component per tile and repeatedly merge two
components whose seam (total strength of interacting glues between them)
is at least the temperature.  Any maximal greedy order reaches a single
component exactly when the assembly is producible, so the merge history
doubles as a witness assembly tree.

Component ids are row-major position ranks.  The fast decider keeps the id
of the larger side when merging (ties keep the smaller id), so an id is
always a position inside its component.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field

import numpy as np

from .assembly_tree import AssemblyTree, Join, Leaf
from .core import Assembly, TileSet, binding_graph


@dataclass
class MergeLog:
    """Merges in the order they happened; ``(survivor, absorbed, seam)``."""

    size: int
    entries: list[tuple[int, int, int]] = field(default_factory=list)

    def append(self, survivor: int, absorbed: int, seam: int) -> None:
        self.entries.append((survivor, absorbed, seam))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def partition(self) -> list[frozenset[int]]:
        """Replay the log from singletons and return the resulting components."""
        members = {i: [i] for i in range(self.size)}
        for a, b, _ in self.entries:
            if a not in members or b not in members or a == b:
                raise ValueError(f"merge of unknown component ({a}, {b})")
            members[a].extend(members.pop(b))
        return sorted(frozenset(m) for m in members.values())


@dataclass
class ComponentGraph:
    """Dynamic graph of components with summed seam strengths.

    ``adj[c]`` maps each neighboring component of ``c`` to the seam strength;
    dead components have an empty map.  The heap holds integer-encoded pairs
    ``(-seam, salt, lo, hi)`` and entries whose seam no longer matches
    ``adj`` are stale and skipped when popped.
    """

    n: int
    adj: list[dict[int, int]]
    size: list[int]
    heap: list[int]
    rng: random.Random | None = None
    pops: int = 0
    folds: int = 0
    salt_range: int = 1

    @classmethod
    def from_edges(cls, n, src, dst, weight, rng=None) -> ComponentGraph:
        adj: list[dict[int, int]] = [{} for _ in range(n)]
        g = cls(n, adj, [1] * n, [], rng, salt_range=1 << 30 if rng is not None else 1)
        for a, b, w in zip(src.tolist(), dst.tolist(), weight.tolist()):
            adj[a][b] = w
            adj[b][a] = w
        g.heap = [g._key(a, b, w) for a, b, w in
                  zip(src.tolist(), dst.tolist(), weight.tolist())]
        heapq.heapify(g.heap)
        return g

    def _key(self, a: int, b: int, w: int) -> int:
        if a > b:
            a, b = b, a
        salt = self.rng.randrange(self.salt_range) if self.rng is not None else 0
        return ((-w * self.salt_range + salt) * self.n + a) * self.n + b

    def pop_max(self):
        """Strongest live pair ``(a, b, seam)``, or None once no pair is left."""
        n, heap, adj = self.n, self.heap, self.adj
        while heap:
            key = heapq.heappop(heap)
            self.pops += 1
            rest, b = divmod(key, n)
            rest, a = divmod(rest, n)
            w = -(rest // self.salt_range)
            if adj[a].get(b) == w:
                return a, b, w
        return None

    def merge(self, a: int, b: int) -> tuple[int, int]:
        """Fold the smaller of ``a``, ``b`` into the larger; returns (survivor, absorbed)."""
        size, adj = self.size, self.adj
        if size[a] > size[b] or (size[a] == size[b] and a < b):
            c1, c2 = a, b
        else:
            c1, c2 = b, a
        nb1, nb2 = adj[c1], adj[c2]
        adj[c2] = {}
        del nb1[c2]
        for c, w in nb2.items():
            if c == c1:
                continue
            self.folds += 1
            nbc = adj[c]
            del nbc[c2]
            total = nbc.get(c1, 0) + w
            nbc[c1] = total
            nb1[c] = total
            heapq.heappush(self.heap, self._key(c1, c, total))
        size[c1] += size[c2]
        return c1, c2

    def seam(self, a: int, b: int) -> int:
        return self.adj[a].get(b, 0)


@dataclass
class MergeRun:
    producible: bool
    log: MergeLog
    pops: int = 0
    folds: int = 0


def greedy_merge(alpha: Assembly, ts: TileSet, temperature: int,
                 rng: random.Random | None = None) -> MergeRun:
    """Run the heap-driven decider and return its merge log and operation counts.

    With ``rng`` given, ties between equally strong pairs are broken randomly
    instead of by least ``(min id, max id)``.
    """
    _check_temperature(temperature)
    bg = binding_graph(alpha, ts)
    n = len(alpha)
    g = ComponentGraph.from_edges(n, bg.src, bg.dst, bg.weight, rng)
    log = MergeLog(n)
    remaining = n
    while remaining > 1:
        top = g.pop_max()
        if top is None or top[2] < temperature:
            return MergeRun(False, log, g.pops, g.folds)
        a, b, w = top
        c1, c2 = g.merge(a, b)
        log.append(c1, c2, w)
        remaining -= 1
    return MergeRun(True, log, g.pops, g.folds)


def is_producible_fast(alpha: Assembly, ts: TileSet, temperature: int, witness: bool = True,
                       rng: random.Random | None = None) -> tuple[bool, AssemblyTree | None]:
    run = greedy_merge(alpha, ts, temperature, rng)
    if not run.producible:
        return False, None
    return True, replay_merge_log(alpha, run.log) if witness else None


def naive_merge(alpha: Assembly, ts: TileSet, temperature: int) -> MergeRun:
    """Round-based decider: each round rescans every pair of components.

    The first qualifying pair (least ids) is merged; the merged component keeps
    the smaller id.
    """
    _check_temperature(temperature)
    bg = binding_graph(alpha, ts)
    n = len(alpha)
    comp = np.arange(n, dtype=np.int64)
    weight = bg.weight.astype(np.float64)
    log = MergeLog(n)
    rounds = 0
    for _ in range(n - 1):
        rounds += 1
        ca, cb = comp[bg.src], comp[bg.dst]
        cross = ca != cb
        lo = np.minimum(ca, cb)[cross]
        hi = np.maximum(ca, cb)[cross]
        if lo.size == 0:
            return MergeRun(False, log, rounds, 0)
        pairs, inverse = np.unique(lo * n + hi, return_inverse=True)
        seams = np.bincount(inverse.ravel(), weights=weight[cross])
        ok = np.flatnonzero(seams >= temperature)
        if ok.size == 0:
            return MergeRun(False, log, rounds, 0)
        a, b = divmod(int(pairs[ok[0]]), n)
        comp[comp == b] = a
        log.append(a, b, int(seams[ok[0]]))
    return MergeRun(True, log, rounds, 0)


def is_producible_naive(alpha: Assembly, ts: TileSet, temperature: int,
                        witness: bool = True) -> tuple[bool, AssemblyTree | None]:
    run = naive_merge(alpha, ts, temperature)
    if not run.producible:
        return False, None
    return True, replay_merge_log(alpha, run.log) if witness else None


def replay_merge_log(alpha: Assembly, log: MergeLog) -> AssemblyTree:
    """Assembly tree whose leaves are ``alpha``'s tiles and whose joins follow ``log``."""
    n = len(alpha)
    if log.size != n:
        raise ValueError(f"log is for {log.size} positions, assembly has {n}")
    nodes: list = [Leaf(x, y, t) for (x, y), t in alpha.items()]
    top = list(range(n))
    alive = [True] * n
    for a, b, _ in log:
        if not (0 <= a < n and 0 <= b < n) or a == b or not alive[a] or not alive[b]:
            raise ValueError(f"merge of unknown component ({a}, {b})")
        nodes.append(Join(top[a], top[b]))
        top[a] = len(nodes) - 1
        alive[b] = False
    if len(log) != n - 1:
        raise ValueError(f"log leaves {n - len(log)} components; expected 1")
    return AssemblyTree(nodes)


def _check_temperature(temperature: int) -> None:
    if temperature < 1:
        raise ValueError("temperature must be a positive integer")
