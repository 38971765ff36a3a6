import pytest

from conftest import square_2x2
from tileverify.core import Assembly, TileSet, TileType, translate
from tileverify.generate import generate_line, random_upv_system
from tileverify.oracle import (OracleLimit, _bind_table, _combine, all_full_binary_trees,
                               all_partitions, canonical, enumerate_producible, find_embedding,
                               precedes_oracle, producible_oracle, to_assembly, upv_hier_oracle,
                               upv_seeded_oracle)

g = TileType.make


def test_canonical_is_translation_invariant():
    a = Assembly({(3, 4): 0, (4, 4): 1, (3, 5): 0})
    assert canonical(a) == canonical(translate(a, (-10, 2)))
    assert canonical(a)[0] == ((0, 0), 0)
    assert canonical(a) != canonical(Assembly({(3, 4): 1, (4, 4): 0, (3, 5): 0}))
    assert to_assembly(canonical(a)) == translate(a, (-3, -4))


def test_producible_oracle_examples():
    ts, alpha = square_2x2(1)
    assert producible_oracle(Assembly({(0, 0): 0}), ts, 7)
    assert not producible_oracle(alpha, ts, 2)
    assert producible_oracle(alpha, ts, 1)
    big = Assembly({(i, 0): 0 for i in range(21)})
    with pytest.raises(OracleLimit):
        producible_oracle(big, ts, 1)


def test_enumerate_inert_tile():
    assert enumerate_producible(TileSet([g("A")]), 1, 4) == {(((0, 0), 0),)}


def test_enumerate_domino():
    ts = TileSet([g("A", E=("x", 1)), g("B", W=("x", 1))])
    got = enumerate_producible(ts, 1, 2)
    assert got == {(((0, 0), 0),), (((0, 0), 1),), (((0, 0), 0), ((1, 0), 1))}


def test_enumerate_self_extending_row():
    ts = TileSet([g("A", E=("x", 1), W=("x", 1))])
    got = enumerate_producible(ts, 1, 4)
    assert got == {tuple(((i, 0), 0) for i in range(n)) for n in range(1, 5)}


def test_enumerate_cap_is_an_error():
    ts = TileSet([g("A", E=("x", 1), W=("x", 1), N=("y", 1), S=("y", 1))])
    with pytest.raises(OracleLimit):
        enumerate_producible(ts, 1, 8, cap=20)


def test_enumeration_is_closed(rng):
    for _ in range(10):
        ts, _ = random_upv_system(rng)
        found = enumerate_producible(ts, 1, 5)
        table = _bind_table(ts)
        assert all((((0, 0), t),) in found for t in range(len(ts)))
        for x in found:
            for y in found:
                if len(x) + len(y) <= 5:
                    assert set(_combine(dict(x), y, table, 1)) <= found


def test_enumeration_at_temperature_two():
    ts, _ = square_2x2(1)
    found = enumerate_producible(ts, 2, 4)
    # nothing binds at strength 1 when two are needed
    assert found == {(((0, 0), t),) for t in range(4)}


def test_precedes_oracle_examples():
    system, path = generate_line(3)
    ts = system.tileset
    assert precedes_oracle(path, ts, (0, 0), (1, 0), (2, 0))
    assert not precedes_oracle(path, ts, (0, 0), (2, 0), (1, 0))
    sq_ts, square = square_2x2(1)
    assert not precedes_oracle(square, sq_ts, (0, 0), (1, 0), (1, 1))


def test_seeded_oracle_examples():
    ts = TileSet([g("s", E=("x", 1)), g("t", W=("x", 1))])
    dom = Assembly({(0, 0): 0, (1, 0): 1})
    assert upv_seeded_oracle(TileSet([g("s")]), "s", Assembly({(0, 0): 0}), (0, 0))
    assert upv_seeded_oracle(ts, "s", dom, (0, 0))
    ts3 = TileSet(list(ts) + [g("u", W=("x", 1))])
    assert not upv_seeded_oracle(ts3, "s", dom, (0, 0))
    with pytest.raises(ValueError):
        upv_seeded_oracle(ts, "s", dom, (1, 0))


def test_hier_oracle_examples():
    assert upv_hier_oracle(TileSet([g("A")]), Assembly({(0, 0): 0}))
    ts = TileSet([g("A", E=("x", 1)), g("B", W=("x", 1))])
    assert upv_hier_oracle(ts, Assembly({(0, 0): 0, (1, 0): 1}))
    row = TileSet([g("A", E=("x", 1), W=("x", 1))])
    assert not upv_hier_oracle(row, Assembly({(0, 0): 0, (1, 0): 0}))
    with pytest.raises(OracleLimit):
        upv_hier_oracle(ts, Assembly({(i, 0): 0 for i in range(9)}))


def full_enumeration_verdict(ts, alpha):
    """Unique production from the complete closure to twice the target size, no early exit."""
    found = enumerate_producible(ts, 1, 2 * len(alpha))
    if canonical(alpha) not in found:
        return False
    if any(find_embedding(to_assembly(c), alpha) is None for c in found):
        return False
    table = _bind_table(ts)
    for (x, y), t in alpha.items():
        for d in range(4):
            dx, dy = [(0, 1), (1, 0), (0, -1), (-1, 0)][d]
            if (x + dx, y + dy) not in alpha and any(k[0] == t and k[1] == d for k in table):
                return False
    return True


def test_bounded_join_matches_full_enumeration(rng):
    for _ in range(120):
        ts, alpha = random_upv_system(rng, max_tiles=3, max_size=4)
        assert upv_hier_oracle(ts, alpha) == full_enumeration_verdict(ts, alpha)


def test_partition_and_tree_counts():
    bell = [1, 1, 2, 5, 15, 52, 203]
    for n in range(7):
        assert sum(1 for _ in all_partitions(list(range(n)))) == bell[n]
    double_factorial = {1: 1, 2: 1, 3: 3, 4: 15, 5: 105, 6: 945}
    for n, want in double_factorial.items():
        assert sum(1 for _ in all_full_binary_trees(tuple(range(n)))) == want
