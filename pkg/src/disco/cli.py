"""Command-line entry point: ``disco publish|discover|cache|bench|serve``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from disco import bench, kernels
from disco.agent import AllRegistriesFailed
from disco.cache import LocalCache
from disco.config import ConfigError, EngineConfig, load_config
from disco.engine import Engine, publish
from disco.matcher import QueryError, render_response
from disco.registry import DEFAULT_CATEGORY, RegistryError, RegistryStore
from disco.testing.fixtures import seed_drms
from disco.wire.client import RegistryCallError
from disco.wire.service import serve_registry

log = logging.getLogger("disco")


def default_cache_file() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "disco" / "cache.jsonl"


def _cache_path(cfg: EngineConfig) -> Path | None:
    if cfg.cache_file == "-":
        return None
    return Path(cfg.cache_file) if cfg.cache_file else default_cache_file()


def load_cache(cfg: EngineConfig) -> LocalCache:
    cache = LocalCache(cfg.ttl)
    path = _cache_path(cfg)
    if path is not None and path.exists():
        with path.open(encoding="utf-8") as fp:
            cache.load(fp)
    return cache


def save_cache(cfg: EngineConfig, cache: LocalCache) -> None:
    path = _cache_path(cfg)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with tmp.open("w", encoding="utf-8") as fp:
        cache.dump(fp)
    tmp.replace(path)


def build_engine(cfg: EngineConfig) -> Engine:
    cfg.validate()
    return Engine(cfg.agent_config(), cfg.synonym_table(), cfg.ttl, cfg.threshold, cache=load_cache(cfg))


def _parse_service(spec: str) -> tuple[str, str]:
    name, sep, category = spec.rpartition(":")
    if not sep:
        return spec, DEFAULT_CATEGORY
    return name, category or DEFAULT_CATEGORY


def cmd_publish(cfg, args, out):
    services = [_parse_service(s) for s in args.service]
    business_key, service_keys = publish(args.registry, args.business, services)
    print(f"business {business_key} {args.business}", file=out)
    for key, (name, category) in zip(service_keys, services):
        print(f"service  {key} {name} [{category}]", file=out)
    return 0


def cmd_discover(cfg, args, out):
    if args.format:
        cfg.format = args.format
    engine = build_engine(cfg)
    result = engine.discover(args.query, use_cache=not args.no_cache, serial=args.serial)
    out.write(render_response(result.candidates, cfg.format))
    if cfg.format == "table":
        print(f"# origin={result.origin} time={result.discovery_time * 1000:.1f}ms", file=out)
        for endpoint, status in result.per_registry_status.items():
            print(f"# {endpoint}: {status}", file=out)
    if not args.no_cache:
        save_cache(cfg, engine.cache)
    return 0


def cmd_cache(cfg, args, out):
    cfg.validate()
    cache = load_cache(cfg)
    now = time.time()
    if args.action == "stats":
        s = cache.stats(now)
        print(f"entries {s.total} (fresh {s.fresh}, stale {s.stale})", file=out)
        print(f"lookups {s.lookups} (hits {s.hits}, misses {s.misses})", file=out)
        for category, count in s.per_category.items():
            print(f"category {category} {count}", file=out)
    elif args.action == "sweep":
        print(f"evicted {cache.evict_expired(now)}", file=out)
        save_cache(cfg, cache)
    elif args.action == "dump":
        if args.file:
            with open(args.file, "w", encoding="utf-8") as fp:
                n = cache.dump(fp)
            print(f"dumped {n} entries to {args.file}", file=out)
        else:
            cache.dump(out)
    elif args.action == "import":
        if not args.file:
            raise ConfigError("cache import needs a FILE")
        with open(args.file, encoding="utf-8") as fp:
            n = cache.load(fp)
        save_cache(cfg, cache)
        print(f"imported {n} entries", file=out)
    return 0


def _write(path, writer, *payload, out):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fp:
            writer(*payload, fp)
    else:
        writer(*payload, out)


def cmd_bench(cfg, args, out):
    if args.kind == "latency":
        sizes = [int(s) for s in args.sizes.split(",") if s]
        modes = [m.strip() for m in args.modes.split(",") if m.strip()]
        rows = bench.bench_latency(sizes, modes, args.delay_ms, args.runs, args.fake_registries)
        _write(args.out, bench.write_latency_csv, rows, out=out)
    else:
        if not args.corpus:
            raise ConfigError("bench precision needs --corpus")
        cfg.cache_file = "-"
        engine = build_engine(cfg)
        rows, mean = bench.bench_precision(engine, args.corpus)
        _write(args.out, bench.write_precision_csv, rows, mean, out=out)
        print(f"mean precision {mean:.4f} over {len(rows)} queries", file=sys.stderr)
    return 0


def load_seed(store: RegistryStore, path) -> None:
    """Seed a store from JSON: ``{"businesses": [{"name", "key"?, "services": [...]}]}``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    for b in data.get("businesses", []):
        bkey = store.save_business(b["name"], b.get("lang", "en"), key=b.get("key"))
        for s in b.get("services", []):
            store.save_service(bkey, s["name"], s.get("lang", "en"), s.get("category", DEFAULT_CATEGORY),
                               key=s.get("key"))


def cmd_serve(cfg, args, out):
    store = RegistryStore(args.operator)
    if args.drms_example:
        seed_drms(store)
    if args.seed:
        load_seed(store, args.seed)
    print(f"serving {len(store)} services at http://{args.host}:{args.port}/uddi", file=out, flush=True)
    serve_registry(store, args.host, args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="disco", description="Dynamic web service discovery broker.")
    parser.add_argument("--config", help="key=value config file (default ./disco.conf if present)")
    parser.add_argument("--registry", dest="registries", action="append", default=[],
                        help="registry endpoint URL (repeatable)")
    parser.add_argument("--registry-file", help="file listing registry endpoints")
    parser.add_argument("--synonyms", help="synonym table file")
    parser.add_argument("--ttl", type=float, help="cache TTL in seconds")
    parser.add_argument("--threshold", type=float, help="minimum match score")
    parser.add_argument("--cache-file", help="cache snapshot path ('-' keeps the cache in memory)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("publish", help="register a business and services in a registry")
    p.add_argument("--registry", dest="registry", required=True, help="registry endpoint URL")
    p.add_argument("--business", required=True)
    p.add_argument("--service", action="append", default=[], metavar="NAME[:CATEGORY]")
    p.set_defaults(func=cmd_publish)

    p = sub.add_parser("discover", help="find services matching a query")
    p.add_argument("query", help='e.g. "machine activation where business_name~microsoft"')
    p.add_argument("--no-cache", action="store_true", help="bypass the local cache")
    p.add_argument("--serial", action="store_true", help="query registries one at a time")
    p.add_argument("--format", choices=("table", "records"))
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("cache", help="inspect or maintain the local cache")
    p.add_argument("action", choices=("stats", "sweep", "dump", "import"))
    p.add_argument("file", nargs="?", help="dump target / import source")
    p.set_defaults(func=cmd_cache)

    p = sub.add_parser("bench", help="latency and precision benchmarks")
    p.add_argument("kind", choices=("latency", "precision"))
    p.add_argument("--sizes", default="10,100,1000")
    p.add_argument("--modes", default="serial,concurrent,cached")
    p.add_argument("--delay-ms", type=float, default=100.0)
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--registries", dest="fake_registries", type=int, default=4,
                   help="number of fake registries (latency)")
    p.add_argument("--corpus", help="labeled corpus: 'query | key,key' per line")
    p.add_argument("--out", help="CSV output file (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run a registry endpoint")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--operator", default="disco.local")
    p.add_argument("--seed", help="JSON file of businesses and services to preload")
    p.add_argument("--drms-example", action="store_true", help="preload the Microsoft DRMS Dev example")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("fuzzy kernel backend: %s", kernels.BACKEND)
    try:
        cfg = load_config(args.config)
        if args.registries and args.command != "publish":
            cfg.registries = args.registries
        for name in ("registry_file", "synonyms", "ttl", "threshold", "cache_file"):
            value = getattr(args, name)
            if value is not None:
                setattr(cfg, name, value)
        return args.func(cfg, args, out)
    except (ConfigError, QueryError, RegistryError, RegistryCallError, AllRegistriesFailed,
            bench.CorpusError, ValueError, OSError) as exc:
        print(f"disco: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
