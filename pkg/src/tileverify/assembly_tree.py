"""Assembly trees: representation, validation, sibling-pair search, union surgery.

An :class:`AssemblyTree` is a flat, topologically ordered list of nodes
(children before parents, root last), which is also its file layout.  A
node is either a :class:`Leaf` holding a placed tile or a :class:`Join`
holding the indices of its two children.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, NamedTuple, Sequence

from .core import (
    Assembly, Direction, InconsistentOverlap, Position, TileSet, _first_conflict,
    check_tiles, is_stable, row_major_key,
)


class Leaf(NamedTuple):
    x: int
    y: int
    tile: int

    @property
    def position(self) -> Position:
        return (self.x, self.y)


class Join(NamedTuple):
    left: int
    right: int


class AssemblyTree:
    """Full binary tree; every non-root node is the child of exactly one later node."""

    def __init__(self, nodes: Iterable[Leaf | Join]):
        nodes = tuple(nodes)
        if not nodes:
            raise ValueError("assembly tree has no nodes")
        used = [False] * len(nodes)
        for i, node in enumerate(nodes):
            if isinstance(node, Join):
                if node.left == node.right:
                    raise ValueError(f"node {i} joins node {node.left} with itself")
                for c in node:
                    if not 0 <= c < i:
                        raise ValueError(f"node {i} references child {c} not defined before it")
                    if used[c]:
                        raise ValueError(f"node {c} has two parents")
                    used[c] = True
            elif not isinstance(node, Leaf):
                raise TypeError(f"node {i} is neither a leaf nor a join")
        if used[-1]:
            raise ValueError("root must be the last node")
        orphans = [i for i in range(len(nodes) - 1) if not used[i]]
        if orphans:
            raise ValueError(f"node {orphans[0]} is not reachable from the root")
        self.nodes = nodes

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"AssemblyTree({len(self.leaves())} leaves)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, AssemblyTree):
            return NotImplemented
        table: dict = {}
        return self._shape_ids(table)[-1] == other._shape_ids(table)[-1]

    def leaves(self) -> list[Leaf]:
        return [n for n in self.nodes if isinstance(n, Leaf)]

    def parents(self) -> list[int | None]:
        par: list[int | None] = [None] * len(self.nodes)
        for i, node in enumerate(self.nodes):
            if isinstance(node, Join):
                par[node.left] = par[node.right] = i
        return par

    def depth(self) -> int:
        depth = [0] * len(self.nodes)
        for i, node in enumerate(self.nodes):
            if isinstance(node, Join):
                depth[i] = 1 + max(depth[node.left], depth[node.right])
        return depth[-1]

    def subtree(self, i: int) -> AssemblyTree:
        keep = sorted(self.descendants(i))
        remap = {old: new for new, old in enumerate(keep)}
        out = []
        for old in keep:
            node = self.nodes[old]
            out.append(Join(remap[node.left], remap[node.right]) if isinstance(node, Join) else node)
        return AssemblyTree(out)

    def descendants(self, i: int) -> set[int]:
        seen, stack = set(), [i]
        while stack:
            j = stack.pop()
            seen.add(j)
            node = self.nodes[j]
            if isinstance(node, Join):
                stack.extend(node)
        return seen

    def _shape_ids(self, table: dict) -> list[int]:
        # hash-consing: equal ids <=> identical subtrees (positions, tiles and shape)
        ids = []
        for node in self.nodes:
            key = node if isinstance(node, Leaf) else (ids[node.left], ids[node.right])
            ids.append(table.setdefault(key, len(table)))
        return ids

    def contains_subtree(self, other: AssemblyTree) -> bool:
        """True iff ``other`` appears, unmodified, as the subtree of some node."""
        table: dict = {}
        mine = set(self._shape_ids(table))
        return other._shape_ids(table)[-1] in mine

    def assembly(self) -> Assembly:
        return Assembly([(leaf.position, leaf.tile) for leaf in self.leaves()])

    def position_sets(self) -> list[frozenset[Position]]:
        sets: list[frozenset[Position]] = []
        for node in self.nodes:
            if isinstance(node, Leaf):
                sets.append(frozenset([node.position]))
            else:
                sets.append(sets[node.left] | sets[node.right])
        return sets


@dataclass
class TreeCheck:
    ok: bool
    reason: str = ""
    node: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _pair_strength(ts: TileSet, t: int, d: int, u: int) -> int:
    g = ts.glue_ids
    lab = g[t, d]
    return int(ts.label_strength[lab]) if lab == g[u, (d + 2) % 4] else 0


def validate(tree: AssemblyTree, alpha: Assembly, ts: TileSet, temperature: int) -> TreeCheck:
    """Check that ``tree`` certifies that ``alpha`` is producible at ``temperature``.

    Leaves must be exactly the placements of ``alpha``, siblings must occupy
    disjoint positions, and every join's seam must reach the temperature.
    Each child is itself checked recursively, so a join with a strong enough
    seam between stable children is stable, and no min-cut is needed.
    """
    check_tiles(alpha, ts)
    leaves = tree.leaves()
    if len(leaves) != len(alpha):
        return TreeCheck(False, f"tree has {len(leaves)} leaves, assembly has {len(alpha)} tiles")
    for i, node in enumerate(tree.nodes):
        if isinstance(node, Leaf) and alpha.get(node.position) != node.tile:
            return TreeCheck(False, f"leaf {i} at {node.position} does not match the assembly", i)
    sets: list = [None] * len(tree.nodes)
    for i, node in enumerate(tree.nodes):
        if isinstance(node, Leaf):
            sets[i] = {node.position}
            continue
        a, b = sets[node.left], sets[node.right]
        sets[node.left] = sets[node.right] = None
        small, big = (a, b) if len(a) <= len(b) else (b, a)
        seam = 0
        for p in small:
            if p in big:
                return TreeCheck(False, f"children of node {i} share position {p}", i)
            t = alpha[p]
            for d in Direction:
                dx, dy = d.vector
                q = (p[0] + dx, p[1] + dy)
                if q in big:
                    seam += _pair_strength(ts, t, d, alpha[q])
        if seam < temperature:
            return TreeCheck(False, f"join {i} has seam strength {seam} < {temperature}", i)
        big |= small
        sets[i] = big
    return TreeCheck(True)


class HierarchicalDivision:
    """Position-set skeleton of an assembly tree over an arbitrary ground set.

    ``kids[i]`` is ``None`` for a leaf (whose element is ``elements[i]``) or a
    pair of child indices; nodes are topologically ordered with the root last.
    """

    def __init__(self, kids: Sequence[tuple[int, int] | None], elements: Sequence[Hashable]):
        self.kids = list(kids)
        self.elements = list(elements)
        sets: list[frozenset] = []
        for i, k in enumerate(self.kids):
            if k is None:
                sets.append(frozenset([self.elements[i]]))
            else:
                l, r = k
                if sets[l] & sets[r]:
                    raise ValueError(f"children of node {i} overlap")
                sets.append(sets[l] | sets[r])
        self.sets = sets

    @classmethod
    def from_tree(cls, tree: AssemblyTree) -> HierarchicalDivision:
        kids = [tuple(n) if isinstance(n, Join) else None for n in tree.nodes]
        elems = [n.position if isinstance(n, Leaf) else None for n in tree.nodes]
        return cls(kids, elems)

    @classmethod
    def from_nested(cls, nested) -> HierarchicalDivision:
        """Build from nested pairs, e.g. ``((1, 2), (3, 4))``; non-tuples are leaves."""
        kids: list = []
        elems: list = []

        def walk(x) -> int:
            if isinstance(x, tuple):
                l, r = walk(x[0]), walk(x[1])
                kids.append((l, r))
                elems.append(None)
            else:
                kids.append(None)
                elems.append(x)
            return len(kids) - 1

        walk(nested)
        return cls(kids, elems)

    @property
    def ground(self) -> frozenset:
        return self.sets[-1]


def find_sibling_pair(division: HierarchicalDivision, partition: Iterable[Iterable[Hashable]]):
    """Two distinct classes ``C1``, ``C2`` of ``partition`` and sibling nodes inside them.

    Returns ``(C1, C2, C1', C2')`` with ``C1' <= C1``, ``C2' <= C2`` and
    ``C1'``, ``C2'`` the position sets of two siblings of ``division``.
    """
    classes = [frozenset(c) for c in partition]
    ground = division.ground
    if len(ground) < 2:
        raise ValueError("ground set needs at least two elements")
    owner: dict = {}
    for k, c in enumerate(classes):
        if not c:
            raise ValueError("partition has an empty class")
        for x in c:
            if x in owner:
                raise ValueError(f"element {x!r} is in two classes")
            owner[x] = k
    if set(owner) != ground:
        raise ValueError("classes do not cover the ground set exactly")
    if len(classes) == 1:
        raise ValueError("partition must not be the single class {S}")

    label: list[int | None] = []
    for i, k in enumerate(division.kids):
        if k is None:
            label.append(owner[division.elements[i]])
        else:
            a, b = label[k[0]], label[k[1]]
            label.append(a if a is not None and a == b else None)
    node = len(division.kids) - 1
    while True:
        l, r = division.kids[node]
        if label[l] is not None and label[r] is not None:
            return classes[label[l]], classes[label[r]], division.sets[l], division.sets[r]
        node = l if label[l] is None else r


class _Node:
    __slots__ = ("parent", "left", "right", "leaf")

    def __init__(self, leaf: Leaf | None = None):
        self.parent: _Node | None = None
        self.left: _Node | None = None
        self.right: _Node | None = None
        self.leaf = leaf


def _mutable_copy(tree: AssemblyTree):
    nodes: list[_Node] = []
    leaf_at: dict[Position, _Node] = {}
    for node in tree.nodes:
        if isinstance(node, Leaf):
            m = _Node(node)
            leaf_at[node.position] = m
        else:
            m = _Node()
            m.left, m.right = nodes[node.left], nodes[node.right]
            m.left.parent = m.right.parent = m
        nodes.append(m)
    return nodes, leaf_at


def _snapshot(root: _Node) -> AssemblyTree:
    out: list = []
    index: dict[int, int] = {}
    stack: list[tuple[_Node, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if node.leaf is not None:
            index[id(node)] = len(out)
            out.append(node.leaf)
        elif expanded:
            index[id(node)] = len(out)
            out.append(Join(index[id(node.left)], index[id(node.right)]))
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return AssemblyTree(out)


@dataclass
class TreeSurgery:
    """Combine assembly trees of two consistent, overlapping assemblies.

    The tree of ``alpha`` replaces the ``beta`` leaf at the least shared
    position; every other shared position then has two leaves, and each
    duplicate is removed by splicing out the ``beta`` leaf and the least
    common ancestor of the pair.  The ``alpha`` subtree is never modified.
    """

    tree_a: AssemblyTree
    alpha: Assembly
    tree_b: AssemblyTree
    beta: Assembly
    ts: TileSet
    temperature: int
    debug: bool = False
    rounds: int = 0
    duplicate_counts: list[int] = field(default_factory=list)
    alpha_nodes: list[_Node] = field(default_factory=list)
    root: _Node | None = None

    def run(self) -> AssemblyTree:
        for name, tree, asm in (("first", self.tree_a, self.alpha),
                                ("second", self.tree_b, self.beta)):
            check = validate(tree, asm, self.ts, self.temperature)
            if not check:
                raise ValueError(f"{name} tree does not validate: {check.reason}")
        conflict = _first_conflict(self.alpha, self.beta)
        if conflict is not None:
            raise InconsistentOverlap(*conflict)
        shared = sorted((p for p in self.alpha.positions if p in self.beta), key=row_major_key)
        if not shared:
            raise ValueError("assemblies do not overlap")

        self.alpha_nodes, leaf_a = _mutable_copy(self.tree_a)
        nodes_b, leaf_b = _mutable_copy(self.tree_b)
        self.root = nodes_b[-1]
        self._replace(leaf_b[shared[0]], self.alpha_nodes[-1])
        self._record()
        for p in shared[1:]:
            self._eliminate(leaf_a[p], leaf_b[p])
            self.rounds += 1
            self._record()
        return _snapshot(self.root)

    def _replace(self, old: _Node, new: _Node) -> None:
        parent = old.parent
        new.parent = parent
        if parent is None:
            self.root = new
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    def _eliminate(self, l1: _Node, l2: _Node) -> None:
        ancestors = set()
        node = l1
        while node is not None:
            ancestors.add(id(node))
            node = node.parent
        r2 = l2
        while id(r2.parent) not in ancestors:
            r2 = r2.parent
        a = r2.parent
        r1 = a.left if a.right is r2 else a.right
        if r2 is l2:
            self._replace(a, r1)
            return
        self._replace(l2, r1)
        self._replace(a, r2)

    def _record(self) -> None:
        sets: dict[int, set] = {}
        leaves = 0
        stack: list[tuple[_Node, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if node.leaf is not None:
                leaves += 1
                sets[id(node)] = {node.leaf.position}
            elif expanded:
                sets[id(node)] = sets[id(node.left)] | sets[id(node.right)]
                if self.debug:
                    self._check_stable(sets[id(node)])
            else:
                stack += [(node, True), (node.right, False), (node.left, False)]
        self.duplicate_counts.append(leaves - len(sets[id(self.root)]))

    def _check_stable(self, positions: set) -> None:
        placed = [(p, self.alpha.get(p, self.beta.get(p))) for p in positions]
        asm = Assembly(placed)
        if not is_stable(asm, self.ts, self.temperature):
            raise AssertionError(f"unstable intermediate node over {sorted(positions)}")


def merge_trees(tree_a: AssemblyTree, alpha: Assembly, tree_b: AssemblyTree, beta: Assembly,
                ts: TileSet, temperature: int, debug: bool = False) -> AssemblyTree:
    """Assembly tree for ``union(alpha, beta)`` containing ``tree_a`` unchanged."""
    return TreeSurgery(tree_a, alpha, tree_b, beta, ts, temperature, debug).run()
