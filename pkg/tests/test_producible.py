import random

import pytest

from conftest import domino, square_2x2
from corpora import random_producibility_corpus
from tileverify.assembly_tree import Leaf, validate
from tileverify.core import Assembly, AssemblyError, TileSet, TileType, binding_graph
from tileverify.generate import generate_line, generate_square, random_bonded
from tileverify.oracle import producible_oracle
from tileverify.producible import (ComponentGraph, MergeLog, greedy_merge, is_producible_fast,
                                   is_producible_naive, replay_merge_log)

DECIDERS = [is_producible_fast, is_producible_naive]


@pytest.mark.parametrize("decide", DECIDERS)
def test_single_tile_any_temperature(decide):
    ts, _ = domino()
    alpha = Assembly({(4, 4): 0})
    for tau in (1, 5):
        ok, tree = decide(alpha, ts, tau)
        assert ok and tree.nodes == (Leaf(4, 4, 0),)


@pytest.mark.parametrize("decide", DECIDERS)
def test_square_needs_cooperation(decide):
    ts, alpha = square_2x2(1)
    assert decide(alpha, ts, 2) == (False, None)
    ok, tree = decide(alpha, ts, 1)
    assert ok and len(tree) == 7 and validate(tree, alpha, ts, 1)


@pytest.mark.parametrize("decide", DECIDERS)
def test_t_junction_of_weak_bonds(decide):
    ts = TileSet([
        TileType.make("M", W=("l", 1), E=("r", 1), N=("u", 1)),
        TileType.make("L", E=("l", 1)),
        TileType.make("R", W=("r", 1)),
        TileType.make("U", S=("u", 1)),
    ])
    alpha = Assembly({(1, 0): 0, (0, 0): 1, (2, 0): 2, (1, 1): 3})
    assert not producible_oracle(alpha, ts, 2)
    assert decide(alpha, ts, 2) == (False, None)


@pytest.mark.parametrize("decide", DECIDERS)
def test_rows_at_their_bond_strength(decide):
    for tau in (1, 2, 3):
        system, alpha = generate_line(12, tau)
        ok, tree = decide(alpha, system.tileset, tau)
        assert ok and validate(tree, alpha, system.tileset, tau)
        assert decide(alpha, system.tileset, tau + 1)[0] is False


def test_mismatched_neighbors_block_production():
    ts = TileSet([TileType.make("A", E=("g", 2)), TileType.make("B", W=("h", 2)),
                  TileType.make("C", W=("g", 2), E=("h", 2))])
    alpha = Assembly({(0, 0): 0, (1, 0): 1})
    assert is_producible_fast(alpha, ts, 1)[0] is False
    assert is_producible_naive(alpha, ts, 1)[0] is False


def test_unknown_tile_is_an_error():
    ts, _ = domino()
    with pytest.raises(AssemblyError):
        is_producible_fast(Assembly({(0, 0): 7}), ts, 1)


def test_temperature_must_be_positive():
    ts, alpha = domino()
    with pytest.raises(ValueError):
        is_producible_fast(alpha, ts, 0)


def test_witness_flag():
    ts, alpha = domino()
    assert is_producible_fast(alpha, ts, 1, witness=False) == (True, None)


def test_replay_merge_log():
    ts, alpha = domino()
    assert replay_merge_log(Assembly({(0, 0): 0}), MergeLog(1)).nodes == (Leaf(0, 0, 0),)
    log = MergeLog(2, [(0, 1, 1)])
    tree = replay_merge_log(alpha, log)
    assert len(tree) == 3 and validate(tree, alpha, ts, 1)
    with pytest.raises(ValueError, match="unknown component"):
        replay_merge_log(alpha, MergeLog(2, [(0, 5, 1)]))
    with pytest.raises(ValueError, match="unknown component"):
        replay_merge_log(alpha, MergeLog(2, [(0, 1, 1), (0, 1, 1)]))
    with pytest.raises(ValueError, match="expected 1"):
        replay_merge_log(alpha, MergeLog(2))


def test_merge_log_partition():
    log = MergeLog(4, [(0, 1, 2), (3, 2, 1)])
    assert log.partition() == sorted([frozenset({0, 1}), frozenset({2, 3})])
    with pytest.raises(ValueError):
        MergeLog(2, [(0, 0, 1)]).partition()


def test_square_log_replays_to_valid_tree():
    ts, alpha = square_2x2(1)
    run = greedy_merge(alpha, ts, 1)
    assert run.producible and len(run.log) == 3
    assert run.log.partition() == [frozenset(range(4))]
    assert validate(replay_merge_log(alpha, run.log), alpha, ts, 1)


def test_survivor_is_larger_side():
    system, alpha = generate_line(6, 1)
    run = greedy_merge(alpha, system.tileset, 1)
    sizes = {i: 1 for i in range(6)}
    for a, b, _ in run.log:
        assert sizes[a] >= sizes[b]
        sizes[a] += sizes.pop(b)


def test_seam_bookkeeping_matches_recount(rng):
    for _ in range(40):
        ts, alpha = random_bonded(rng, rng.randint(2, 12), max_strength=3)
        bg = binding_graph(alpha, ts)
        g = ComponentGraph.from_edges(len(alpha), bg.src, bg.dst, bg.weight)
        owner = list(range(len(alpha)))
        while True:
            top = g.pop_max()
            if top is None:
                break
            c1, c2 = g.merge(top[0], top[1])
            owner = [c1 if o == c2 else o for o in owner]
            expected: dict = {}
            for a, b, w in zip(bg.src.tolist(), bg.dst.tolist(), bg.weight.tolist()):
                ca, cb = owner[a], owner[b]
                if ca != cb:
                    expected[(ca, cb)] = expected.get((ca, cb), 0) + w
                    expected[(cb, ca)] = expected.get((cb, ca), 0) + w
            stored = {(c, d): w for c in range(len(alpha)) for d, w in g.adj[c].items()}
            assert stored == expected


def test_deciders_agree_with_oracle(rng_seed):
    for ts, alpha, tau in random_producibility_corpus(rng_seed, count=150):
        expected = producible_oracle(alpha, ts, tau)
        for decide in DECIDERS:
            ok, tree = decide(alpha, ts, tau)
            assert ok == expected, (alpha, tau)
            if ok:
                assert validate(tree, alpha, ts, tau)


def test_randomized_tie_breaking_keeps_verdict(rng_seed):
    for i, (ts, alpha, tau) in enumerate(random_producibility_corpus(rng_seed + 1, count=30)):
        base = is_producible_fast(alpha, ts, tau)[0]
        for j in range(10):
            ok, tree = is_producible_fast(alpha, ts, tau, rng=random.Random(i * 100 + j))
            assert ok == base
            if ok:
                assert validate(tree, alpha, ts, tau)


def test_oracle_at_temperature_one_is_connectivity(rng_seed):
    for ts, alpha, _ in random_producibility_corpus(rng_seed + 2, count=80):
        assert producible_oracle(alpha, ts, 1) == binding_graph(alpha, ts).is_connected()


def test_square_family_is_producible():
    for tau in (1, 2):
        system, alpha = generate_square(6, tau)
        ok, tree = is_producible_fast(alpha, system.tileset, tau)
        assert ok and validate(tree, alpha, system.tileset, tau)
        assert is_producible_naive(alpha, system.tileset, tau)[0]
