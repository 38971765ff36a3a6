"""Verification tools for the abstract Tile Assembly Model."""
from .assembly_tree import (AssemblyTree, HierarchicalDivision, Join, Leaf, TreeCheck,
                            find_sibling_pair, merge_trees, validate)
from .core import (Assembly, AssemblyError, Direction, DisconnectedDomain, Glue,
                   InconsistentOverlap, TileSet, TileSystem, TileType, binding_graph,
                   bond_strength, consistent, find_embedding, interacts, is_normalized,
                   is_stable, is_subassembly, min_cut, normalize_tileset, translate, union)
from .producible import MergeLog, is_producible_fast, is_producible_naive, replay_merge_log
from .upv import (Outcome, UpvVerdict, build_glue_index, precedes, precedes_map, upv_hier_t1,
                  upv_seeded_t1)

__version__ = "0.1.0"
