"""Timing harness for the fast producibility decider."""
from __future__ import annotations

import csv
import gc
import math
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .generate import FAMILIES
from .producible import greedy_merge, naive_merge

NAIVE_LIMIT = 10_000


@dataclass
class BenchRecord:
    family: str
    n: int
    ns: int
    pops: int
    folds: int
    naive_agrees: bool | None = None

    def row(self) -> list:
        return [self.family, self.n, self.ns, self.pops, self.folds]


def geometric_sizes(lo: int, hi: int, factor: float) -> list[int]:
    if lo < 1 or hi < lo or factor <= 1:
        raise ValueError("need 1 <= min <= max and factor > 1")
    sizes, n = [], float(lo)
    while n <= hi * (1 + 1e-9):
        sizes.append(int(round(n)))
        n *= factor
    return sizes


def instance(family: str, n: int, temperature: int = 1):
    """Benchmark instance with about ``n`` tiles (squares use side ``isqrt(n)``)."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    size = max(1, math.isqrt(n)) if family == "square" else n
    return FAMILIES[family](size, temperature)


def time_once(alpha, ts, temperature) -> tuple[int, object]:
    enabled = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter_ns()
        run = greedy_merge(alpha, ts, temperature)
        return time.perf_counter_ns() - t0, run
    finally:
        if enabled:
            gc.enable()


def bench(families: Iterable[str], sizes: Iterable[int], repetitions: int = 3,
          temperature: int = 1, naive_limit: int = NAIVE_LIMIT) -> list[BenchRecord]:
    records = []
    sizes = list(sizes)
    for family in families:
        for n in sizes:
            system, alpha = instance(family, n, temperature)
            ts = system.tileset
            times, run = [], None
            for _ in range(repetitions):
                ns, run = time_once(alpha, ts, temperature)
                times.append(ns)
            rec = BenchRecord(family, len(alpha), int(statistics.median(times)), run.pops, run.folds)
            if len(alpha) <= naive_limit:
                rec.naive_agrees = naive_merge(alpha, ts, temperature).producible == run.producible
            records.append(rec)
    return records


def write_csv(records: Iterable[BenchRecord], out: TextIO | None = None) -> None:
    w = csv.writer(out or sys.stdout, lineterminator="\n")
    w.writerow(["family", "n", "ns", "pops", "folds"])
    for r in records:
        w.writerow(r.row())


def loglog_slope(records: Iterable[BenchRecord]) -> float:
    """Least-squares slope of log(time) against log(tile count)."""
    records = list(records)
    x = np.log([r.n for r in records])
    y = np.log([r.ns for r in records])
    return float(np.polyfit(x, y, 1)[0])
