"""Local cache of discovered service references.

Entries live in one repository per category and are reachable through an
inverted index over the tokens of their service and business names. Every
entry carries the time it was stored and a TTL; an entry is stale once
``now - stored_at > ttl``. Time is always passed in by the caller.
"""

from __future__ import annotations

import json
import threading
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable

from disco.matcher import CanonicalQuery, tokenize

DEFAULT_TTL = 300.0


@dataclass(frozen=True)
class ServiceRef:
    service_key: str
    business_key: str
    service_name: str
    business_name: str
    endpoint: str = ""
    lang: str = "en"


@dataclass(frozen=True)
class CacheEntry:
    ref: ServiceRef
    category: str
    stored_at: float
    ttl: float

    def is_stale(self, now: float) -> bool:
        return now - self.stored_at > self.ttl

    @property
    def service_key(self) -> str:
        return self.ref.service_key

    def tokens(self) -> set[str]:
        return set(tokenize(self.ref.service_name)) | set(tokenize(self.ref.business_name))


@dataclass(frozen=True)
class LookupResult:
    fresh: list[CacheEntry]
    had_stale: bool


@dataclass(frozen=True)
class CacheStats:
    per_category: dict[str, int]
    total: int
    fresh: int
    stale: int
    hits: int
    misses: int

    @property
    def lookups(self) -> int:
        return self.hits + self.misses


class LocalCache:
    def __init__(self, default_ttl: float = DEFAULT_TTL):
        if default_ttl <= 0:
            raise ValueError("ttl must be positive")
        self.default_ttl = default_ttl
        self._repos: dict[str, dict[str, CacheEntry]] = {}
        self._category_of: dict[str, str] = {}
        self._postings: dict[str, set[tuple[str, str]]] = {}
        self._hits = 0
        self._misses = 0
        self._lock = threading.Lock()

    # index maintenance; callers hold the lock

    def _unlink(self, service_key: str) -> CacheEntry | None:
        category = self._category_of.pop(service_key, None)
        if category is None:
            return None
        repo = self._repos[category]
        entry = repo.pop(service_key)
        if not repo:
            del self._repos[category]
        posting = (category, service_key)
        for token in entry.tokens():
            bucket = self._postings.get(token)
            if bucket is not None:
                bucket.discard(posting)
                if not bucket:
                    del self._postings[token]
        return entry

    def _link(self, entry: CacheEntry) -> None:
        key = entry.service_key
        self._repos.setdefault(entry.category, {})[key] = entry
        self._category_of[key] = entry.category
        for token in entry.tokens():
            self._postings.setdefault(token, set()).add((entry.category, key))

    def put(self, ref: ServiceRef, category: str, now: float, ttl: float | None = None) -> CacheEntry:
        """Store ``ref`` under ``category``, replacing any entry with the same service key."""
        ttl = self.default_ttl if ttl is None else ttl
        if ttl <= 0:
            raise ValueError("ttl must be positive")
        if not category:
            raise ValueError("category must be non-empty")
        entry = CacheEntry(ref, category, now, ttl)
        with self._lock:
            self._unlink(ref.service_key)
            self._link(entry)
        return entry

    def lookup(self, q: CanonicalQuery, now: float) -> LookupResult:
        """Fresh entries reachable from any expanded query token.

        Category constraints in ``q`` restrict which repositories count.
        Stale entries are never returned, only flagged.
        """
        category_rules = q.category_constraints()
        with self._lock:
            found: set[tuple[str, str]] = set()
            for token in q.expanded_tokens:
                found |= self._postings.get(token, set())
            fresh = []
            had_stale = False
            for category, key in found:
                if not all(rule.test(category) for rule in category_rules):
                    continue
                entry = self._repos[category][key]
                if entry.is_stale(now):
                    had_stale = True
                else:
                    fresh.append(entry)
            if fresh:
                self._hits += 1
            else:
                self._misses += 1
        fresh.sort(key=lambda e: e.service_key)
        return LookupResult(fresh, had_stale)

    def evict_expired(self, now: float) -> int:
        with self._lock:
            expired = [e.service_key for repo in self._repos.values() for e in repo.values() if e.is_stale(now)]
            for key in expired:
                self._unlink(key)
        return len(expired)

    def discard(self, service_key: str) -> bool:
        with self._lock:
            return self._unlink(service_key) is not None

    def stats(self, now: float | None = None) -> CacheStats:
        with self._lock:
            per_category = {c: len(repo) for c, repo in sorted(self._repos.items())}
            entries = [e for repo in self._repos.values() for e in repo.values()]
            hits, misses = self._hits, self._misses
        stale = 0 if now is None else sum(e.is_stale(now) for e in entries)
        return CacheStats(per_category, len(entries), len(entries) - stale, stale, hits, misses)

    def entries(self) -> list[CacheEntry]:
        with self._lock:
            entries = [e for repo in self._repos.values() for e in repo.values()]
        entries.sort(key=lambda e: (e.category, e.service_key))
        return entries

    def postings(self) -> dict[str, set[tuple[str, str]]]:
        with self._lock:
            return {t: set(p) for t, p in self._postings.items()}

    def repositories(self) -> dict[str, dict[str, CacheEntry]]:
        with self._lock:
            return {c: dict(repo) for c, repo in self._repos.items()}

    def token_counts(self) -> Counter:
        with self._lock:
            return Counter({t: len(p) for t, p in self._postings.items()})

    def __len__(self):
        with self._lock:
            return len(self._category_of)

    # snapshot: one JSON object per line

    def dump(self, fp: IO[str]) -> int:
        entries = self.entries()
        for e in entries:
            record = {"category": e.category, "stored_at": e.stored_at, "ttl": e.ttl, **vars(e.ref)}
            fp.write(json.dumps(record, sort_keys=True) + "\n")
        return len(entries)

    def load(self, lines: Iterable[str]) -> int:
        count = 0
        for line in lines:
            if not line.strip():
                continue
            record = json.loads(line)
            category = record.pop("category")
            stored_at = record.pop("stored_at")
            ttl = record.pop("ttl")
            self.put(ServiceRef(**record), category, stored_at, ttl)
            count += 1
        return count
