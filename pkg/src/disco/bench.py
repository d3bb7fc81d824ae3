"""Latency and precision benchmarks.

``bench_latency`` times discovery against fake registries with injected
delay in three modes: ``serial`` (one registry request at a time),
``concurrent`` (fan-out) and ``cached`` (warm local cache).
``bench_precision`` runs labeled queries against an engine and scores each
result set.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import IO

from disco.agent import AgentConfig
from disco.clock import LogicalClock
from disco.engine import CACHE, Engine
from disco.matcher import precision
from disco.testing.fakes import FakeRegistry
from disco.testing.fixtures import synthetic_stores

MODES = ("serial", "concurrent", "cached")
BENCH_QUERY = "weather"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class LatencyRow:
    size: int
    mode: str
    median_ms: float
    p95_ms: float
    runs: int


def percentile(samples: list[float], pct: float) -> float:
    """Linear-interpolated percentile, ``pct`` in [0, 100]."""
    ordered = sorted(samples)
    if len(ordered) == 1:
        return ordered[0]
    pos = (len(ordered) - 1) * pct / 100.0
    lo = int(pos)
    hi = min(lo + 1, len(ordered) - 1)
    return ordered[lo] + (ordered[hi] - ordered[lo]) * (pos - lo)


def _time_mode(engine: Engine, mode: str, runs: int, query: str) -> list[float]:
    samples = []
    if mode == "cached":
        engine.discover(query)  # warm
    for _ in range(runs):
        if mode == "cached":
            result = engine.discover(query)
            if result.origin != CACHE:
                raise RuntimeError("cached run went to the registries")
        else:
            result = engine.discover(query, use_cache=False, serial=(mode == "serial"))
        samples.append(result.discovery_time * 1000.0)
    return samples


def bench_latency(sizes=(10, 100, 1000), modes=MODES, delay_ms: float = 100.0, runs: int = 20,
                  registries: int = 4, query: str = BENCH_QUERY, seed: int = 0) -> list[LatencyRow]:
    for mode in modes:
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
    rows = []
    for size in sizes:
        fakes = [FakeRegistry(store, delay=delay_ms / 1000.0)
                 for store in synthetic_stores(size, registries, seed)]
        # generous deadlines: serial mode must not time out at the largest delay
        budget = max(30.0, 4 * registries * delay_ms / 1000.0)
        cfg = AgentConfig(fakes, per_registry_deadline=budget, overall_deadline=budget)
        for mode in modes:
            engine = Engine(cfg, clock=LogicalClock())
            samples = _time_mode(engine, mode, runs, query)
            rows.append(LatencyRow(size, mode, statistics.median(samples), percentile(samples, 95), runs))
    return rows


def write_latency_csv(rows: list[LatencyRow], fp: IO[str]) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["size", "mode", "median_ms", "p95_ms"])
    for r in rows:
        w.writerow([r.size, r.mode, f"{r.median_ms:.3f}", f"{r.p95_ms:.3f}"])


def parse_corpus(text: str) -> list[tuple[str, set[str]]]:
    """``query | key,key,...`` per line; blank lines and ``#`` comments skipped."""
    records = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.count("|") != 1:
            raise CorpusError(f"line {n}: expected 'query | key,key,...'")
        query, keys = (part.strip() for part in line.split("|"))
        if not query:
            raise CorpusError(f"line {n}: empty query")
        records.append((query, {k.strip() for k in keys.split(",") if k.strip()}))
    return records


@dataclass(frozen=True)
class PrecisionRow:
    query: str
    retrieved: int
    relevant_retrieved: int
    precision: float
    discovery_ms: float
    retrieved_keys: tuple[str, ...] = ()


def bench_precision(engine: Engine, corpus) -> tuple[list[PrecisionRow], float]:
    """Per-query precision and the mean over all queries.

    ``corpus`` is a path or a list of (query, relevant keys). Queries bypass
    the cache so each is scored on a fresh registry round trip.
    """
    if not isinstance(corpus, list):
        corpus = parse_corpus(Path(corpus).read_text(encoding="utf-8"))
    rows = []
    for query, relevant in corpus:
        result = engine.discover(query, use_cache=False)
        m = precision(result.candidates, relevant, result.discovery_time)
        rows.append(PrecisionRow(query, m.retrieved_count, m.relevant_retrieved_count, m.precision,
                                 m.discovery_time * 1000.0,
                                 tuple(c.service_key for c in result.candidates)))
    mean = statistics.fmean(r.precision for r in rows) if rows else 0.0
    return rows, mean


def write_precision_csv(rows: list[PrecisionRow], mean: float, fp: IO[str]) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["query", "retrieved", "relevant_retrieved", "precision", "discovery_ms"])
    for r in rows:
        w.writerow([r.query, r.retrieved, r.relevant_retrieved, f"{r.precision:.6f}", f"{r.discovery_ms:.3f}"])
    w.writerow(["*mean*", sum(r.retrieved for r in rows), sum(r.relevant_retrieved for r in rows),
                f"{mean:.6f}", ""])
