"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import random
import time

import pytest

from corpora import exhaustive_small, random_producibility_corpus, two_type_tilesets
from surgery_pairs import surgery_pairs
from test_assembly_tree import sibling_pair_ok
from tileverify.assembly_tree import HierarchicalDivision, TreeSurgery, find_sibling_pair, validate
from tileverify.bench import bench, loglog_slope
from tileverify.core import Assembly, TileSet, TileType, binding_graph, is_stable, union
from tileverify.generate import (bonded_assembly, generate_line, generate_square, random_polyomino,
                                 random_upv_system)
from tileverify.oracle import (all_full_binary_trees, all_partitions, precedes_oracle,
                               producible_oracle, upv_hier_oracle, upv_seeded_oracle)
from tileverify.producible import is_producible_fast, is_producible_naive
from tileverify.upv import precedes_map, upv_hier_t1, upv_seeded_t1

g = TileType.make


def producibility_corpus(seed):
    items = random_producibility_corpus(seed, count=520)
    for ts, alpha in exhaustive_small(two_type_tilesets(seed)):
        for tau in (1, 2, 3):
            items.append((ts, alpha, tau))
    return items


def test_criterion_1_oracle_equivalence(rng_seed, criterion):
    t0 = time.perf_counter()
    corpus = producibility_corpus(rng_seed)
    disagree = 0
    for ts, alpha, tau in corpus:
        want = producible_oracle(alpha, ts, tau)
        fast = is_producible_fast(alpha, ts, tau, witness=False)[0]
        naive = is_producible_naive(alpha, ts, tau, witness=False)[0]
        disagree += not (want == fast == naive)
    elapsed = time.perf_counter() - t0
    criterion(1, disagree == 0 and elapsed < 60,
              f"{len(corpus)} instances, {disagree} disagreements, {elapsed:.1f}s")


def test_criterion_2_stable_but_not_producible(criterion):
    ts = TileSet([g("A", E=("ab", 1), N=("ac", 1)), g("B", W=("ab", 1), N=("bd", 1)),
                  g("C", S=("ac", 1), E=("cd", 1)), g("D", S=("bd", 1), W=("cd", 1))])
    alpha = Assembly({(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3})
    got = (is_stable(alpha, ts, 2), is_producible_fast(alpha, ts, 2)[0],
           is_producible_naive(alpha, ts, 2)[0], producible_oracle(alpha, ts, 2))
    criterion(2, got == (True, False, False, False),
              f"stable={got[0]} fast={got[1]} naive={got[2]} oracle={got[3]}")


def test_criterion_3_witness_soundness(rng_seed, criterion):
    checked = failures = 0
    for ts, alpha, tau in producibility_corpus(rng_seed):
        for decide in (is_producible_fast, is_producible_naive):
            ok, tree = decide(alpha, ts, tau)
            if ok:
                checked += 1
                failures += not validate(tree, alpha, ts, tau)
    criterion(3, failures == 0 and checked > 0, f"{checked} witness trees, {failures} invalid")


def test_criterion_4_order_independence(rng_seed, criterion):
    corpus = random_producibility_corpus(rng_seed + 4, count=50, max_size=10)
    changed = runs = 0
    for i, (ts, alpha, tau) in enumerate(corpus):
        base = is_producible_fast(alpha, ts, tau)[0]
        for j in range(20):
            ok, tree = is_producible_fast(alpha, ts, tau, rng=random.Random(1000 * i + j))
            runs += 1
            changed += ok != base or (ok and not validate(tree, alpha, ts, tau))
    criterion(4, changed == 0, f"{len(corpus)} instances x 20 shuffles, {changed} changed")


def test_criterion_5_union_surgery(rng_seed, criterion):
    pairs = surgery_pairs(rng_seed + 5, count=200)
    bad = 0
    for ts, tau, alpha, ta, beta, tb in pairs:
        s = TreeSurgery(ta, alpha, tb, beta, ts, tau, debug=True)
        merged = s.run()
        bad += not (validate(merged, union(alpha, beta), ts, tau) and merged.contains_subtree(ta))
    criterion(5, bad == 0, f"{len(pairs)} overlapping pairs, {bad} failures")


def test_criterion_6_sibling_pairs_exhaustive(criterion):
    cases = failures = 0
    for n in range(2, 7):
        parts = [p for p in all_partitions(list(range(n))) if len(p) > 1]
        for nested in all_full_binary_trees(tuple(range(n))):
            d = HierarchicalDivision.from_nested(nested)
            for part in parts:
                cases += 1
                failures += not sibling_pair_ok(d, part, find_sibling_pair(d, part))
    criterion(6, failures == 0, f"{cases} (tree, partition) cases up to 6 leaves, {failures} failures")


def hand_built_upv_cases():
    s_t = [g("s", E=("x", 1)), g("t", W=("x", 1))]
    dom = Assembly({(0, 0): 0, (1, 0): 1})
    seeded = [
        (TileSet([g("s")]), "s", Assembly({(0, 0): 0}), (0, 0), True),
        (TileSet(s_t), "s", dom, (0, 0), True),
        (TileSet(s_t + [g("u", W=("x", 1))]), "s", dom, (0, 0), False),
    ]
    hier = [
        (TileSet([g("A")]), Assembly({(0, 0): 0}), True),
        (TileSet(s_t), dom, True),
        (TileSet([g("A", E=("x", 1), W=("x", 1))]), Assembly({(0, 0): 0, (1, 0): 0}), False),
    ]
    return seeded, hier


def test_criterion_7_upv_equivalence(rng_seed, criterion):
    rng = random.Random(rng_seed + 7)
    seeded, hier = hand_built_upv_cases()
    mismatches = 0
    for ts, s, alpha, anchor, want in seeded:
        mismatches += bool(upv_seeded_t1(ts, s, alpha, anchor)) != want
        mismatches += upv_seeded_oracle(ts, s, alpha, anchor) != want
    for ts, alpha, want in hier:
        mismatches += bool(upv_hier_t1(ts, alpha)) != want
        mismatches += upv_hier_oracle(ts, alpha) != want
    systems = 0
    for _ in range(320):
        ts, alpha = random_upv_system(rng)
        systems += 1
        mismatches += bool(upv_hier_t1(ts, alpha)) != upv_hier_oracle(ts, alpha)
        for anchor in alpha.positions:
            s = ts.names[alpha[anchor]]
            mismatches += (bool(upv_seeded_t1(ts, s, alpha, anchor))
                           != upv_seeded_oracle(ts, s, alpha, anchor))
    criterion(7, mismatches == 0,
              f"{systems} random systems + {len(seeded) + len(hier)} hand-built, "
              f"{mismatches} disagreements")


def test_criterion_8_precedence(rng_seed, criterion):
    rng = random.Random(rng_seed + 8)
    assemblies = pairs = wrong = 0
    while assemblies < 200:
        cells = random_polyomino(rng, rng.randint(2, 50))
        ts, alpha = bonded_assembly(cells, lambda p, q: int(rng.random() < 0.75))
        if not binding_graph(alpha, ts).is_connected():
            continue
        assemblies += 1
        seed = rng.choice(alpha.positions)
        pm = precedes_map(alpha, ts, seed)
        for p in alpha:
            for q in ((p[0] + 1, p[1]), (p[0] - 1, p[1]), (p[0], p[1] + 1), (p[0], p[1] - 1)):
                if q in alpha:
                    pairs += 1
                    wrong += pm.holds(p, q) != precedes_oracle(alpha, ts, seed, p, q)
    spread = {}
    for name, make, sizes in (("path", generate_line, (1000, 4000, 16000)),
                              ("grid", generate_square, (32, 64, 128))):
        ratios = []
        for n in sizes:
            system, alpha = make(n)
            ratios.append(precedes_map(alpha, system.tileset, alpha.positions[0]).steps / len(alpha))
        spread[name] = max(ratios) / min(ratios)
    linear = all(v <= 1.1 for v in spread.values())
    criterion(8, wrong == 0 and linear,
              f"{assemblies} assemblies, {pairs} ordered pairs, {wrong} wrong; "
              f"steps per tile spread path {spread['path']:.3f} grid {spread['grid']:.3f}")


@pytest.mark.slow
def test_criterion_9_scaling(criterion):
    t0 = time.perf_counter()
    sizes = [10_000, 31_623, 100_000, 316_228, 1_000_000]
    recs = bench(["square"], sizes, repetitions=3, naive_limit=10_000)
    elapsed = time.perf_counter() - t0
    slope = loglog_slope(recs)
    agree = all(r.naive_agrees for r in recs if r.naive_agrees is not None)
    naive_runs = sum(r.naive_agrees is not None for r in recs)
    detail = ", ".join(f"{r.n}:{r.ns / 1e9:.2f}s" for r in recs)
    criterion(9, slope <= 1.25 and elapsed < 600 and agree and naive_runs >= 1,
              f"slope {slope:.3f}, sweep {elapsed:.0f}s, naive agrees on {naive_runs} "
              f"instance(s); {detail}")
