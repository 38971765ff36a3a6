"""Command-line entry point.

Exit status: 0 affirmative verdict, 1 negative verdict, 2 bad input or usage.
Verdicts go to standard output, diagnostics to standard error.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import bench as benchmod
from .assembly_tree import merge_trees, validate
from .core import AssemblyError, TileSystem
from .formats import (ParseError, parse_assembly, parse_tileset, parse_tree, write_assembly,
                      write_tileset, write_tree)
from .generate import FAMILIES, random_bonded
from .producible import is_producible_fast, is_producible_naive
from .upv import upv_hier_t1, upv_seeded_t1

OK, NO, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _system(args):
    system = parse_tileset(_read(args.tileset))
    for name, side, label in system.nulled:
        print(f"note: glue {label!r} on {side.name} side of {name!r} has no partner; "
              "treated as null", file=sys.stderr)
    return system


def _temperature(args, system) -> int:
    return args.temperature if args.temperature is not None else system.temperature


def _require_t1(system) -> None:
    if system.temperature != 1:
        raise UsageError(f"unique production checks are for temperature 1, "
                         f"tile set declares {system.temperature}")


def cmd_check_producible(args) -> int:
    system = _system(args)
    ts = system.tileset
    alpha = parse_assembly(_read(args.assembly), ts)
    tau = _temperature(args, system)
    decide = is_producible_naive if args.naive else is_producible_fast
    ok, tree = decide(alpha, ts, tau, witness=args.witness is not None)
    print("producible" if ok else "not-producible")
    if ok and args.witness:
        Path(args.witness).write_text(write_tree(tree, ts), encoding="utf-8")
    return OK if ok else NO


def cmd_upv_seeded(args) -> int:
    system = _system(args)
    _require_t1(system)
    seed = args.seed or system.seed
    if seed is None:
        raise UsageError("no seed: pass --seed or add a 'seed' line to the tile set")
    alpha = parse_assembly(_read(args.assembly), system.tileset)
    anchor = None
    if args.anchor:
        try:
            x, y = (int(v) for v in args.anchor.split(","))
        except ValueError:
            raise UsageError(f"--anchor expects X,Y, got {args.anchor!r}") from None
        anchor = (x, y)
    verdict = upv_seeded_t1(system.tileset, seed, alpha, anchor, args.strict_anchors)
    print(verdict.describe())
    return OK if verdict else NO


def cmd_upv_hier(args) -> int:
    system = _system(args)
    _require_t1(system)
    alpha = parse_assembly(_read(args.assembly), system.tileset)
    verdict = upv_hier_t1(system.tileset, alpha, args.strict_anchors)
    print(verdict.describe())
    return OK if verdict else NO


def cmd_union_trees(args) -> int:
    system = _system(args)
    ts = system.tileset
    tau = _temperature(args, system)
    alpha = parse_assembly(_read(args.assembly_a), ts)
    beta = parse_assembly(_read(args.assembly_b), ts)
    tree_a = parse_tree(_read(args.tree_a), ts)
    tree_b = parse_tree(_read(args.tree_b), ts)
    merged = merge_trees(tree_a, alpha, tree_b, beta, ts, tau)
    text = write_tree(merged, ts)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return OK


def cmd_validate_tree(args) -> int:
    system = _system(args)
    ts = system.tileset
    alpha = parse_assembly(_read(args.assembly), ts)
    tree = parse_tree(_read(args.tree), ts)
    check = validate(tree, alpha, ts, _temperature(args, system))
    print("valid" if check else f"invalid: {check.reason}")
    return OK if check else NO


def cmd_bench(args) -> int:
    sizes = benchmod.geometric_sizes(args.min, args.max, args.factor)
    records = benchmod.bench([args.family], sizes, args.repetitions, args.temperature,
                             args.naive_max)
    benchmod.write_csv(records)
    bad = [r for r in records if r.naive_agrees is False]
    for r in bad:
        print(f"naive and fast deciders disagree at n={r.n}", file=sys.stderr)
    return NO if bad else OK


def cmd_gen(args) -> int:
    if args.family == "random":
        rng = random.Random(args.seed_rng)
        print(f"seed-rng {args.seed_rng}", file=sys.stderr)
        ts, alpha = random_bonded(rng, args.n, args.temperature + 1)
        tiles = write_tileset(TileSystem(ts, args.temperature))
    else:
        system, alpha = FAMILIES[args.family](args.n, args.temperature)
        ts = system.tileset
        tiles = write_tileset(system)
    Path(args.out_tileset).write_text(tiles, encoding="utf-8")
    Path(args.out_assembly).write_text(write_assembly(alpha, ts), encoding="utf-8")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tileverify", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, temperature=True):
        sp.add_argument("--tileset", required=True)
        if temperature:
            sp.add_argument("--temperature", type=int, default=None,
                            help="overrides the tile set's temperature line")

    sp = sub.add_parser("check-producible", help="decide hierarchical producibility")
    common(sp)
    sp.add_argument("--assembly", required=True)
    sp.add_argument("--naive", action="store_true", help="use the round-based reference decider")
    sp.add_argument("--witness", help="write an assembly tree here when producible")
    sp.set_defaults(func=cmd_check_producible)

    sp = sub.add_parser("upv-seeded", help="seeded temperature-1 unique production")
    common(sp, temperature=False)
    sp.add_argument("--assembly", required=True)
    sp.add_argument("--seed")
    sp.add_argument("--anchor", help="X,Y position of the seed in the assembly")
    sp.add_argument("--strict-anchors", action="store_true")
    sp.set_defaults(func=cmd_upv_seeded)

    sp = sub.add_parser("upv-hier", help="hierarchical temperature-1 unique production")
    common(sp, temperature=False)
    sp.add_argument("--assembly", required=True)
    sp.add_argument("--strict-anchors", action="store_true")
    sp.set_defaults(func=cmd_upv_hier)

    sp = sub.add_parser("union-trees", help="assembly tree for the union of two assemblies")
    common(sp)
    for side in ("a", "b"):
        sp.add_argument(f"--assembly-{side}", required=True)
        sp.add_argument(f"--tree-{side}", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_union_trees)

    sp = sub.add_parser("validate-tree", help="check an assembly tree against an assembly")
    common(sp)
    sp.add_argument("--assembly", required=True)
    sp.add_argument("--tree", required=True)
    sp.set_defaults(func=cmd_validate_tree)

    sp = sub.add_parser("bench", help="time the fast decider; CSV on standard output")
    sp.add_argument("--family", choices=sorted(FAMILIES), default="square")
    sp.add_argument("--min", type=int, default=10_000)
    sp.add_argument("--max", type=int, default=1_000_000)
    sp.add_argument("--factor", type=float, default=10 ** 0.5)
    sp.add_argument("--repetitions", type=int, default=3)
    sp.add_argument("--temperature", type=int, default=1)
    sp.add_argument("--naive-max", type=int, default=benchmod.NAIVE_LIMIT,
                    help="also run the naive decider up to this many tiles")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("gen", help="write a generated tile set and assembly")
    sp.add_argument("--family", choices=sorted(FAMILIES) + ["random"], required=True)
    sp.add_argument("--n", type=int, required=True,
                    help="side length for square, length for line, tile count for random")
    sp.add_argument("--temperature", type=int, default=1)
    sp.add_argument("--seed-rng", type=int, default=0, help="64-bit seed for random families")
    sp.add_argument("--out-tileset", required=True)
    sp.add_argument("--out-assembly", required=True)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, AssemblyError, UsageError, OSError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return ERROR
