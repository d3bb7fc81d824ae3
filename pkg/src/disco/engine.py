"""Discovery broker: cache first, registries on a miss.

One call to :meth:`Engine.discover` runs the whole pipeline::

    normalize -> expand synonyms -> cache lookup
      fresh hits  -> score, threshold, constraints, rank        (origin=cache)
      otherwise   -> fan out to registries -> score, threshold,
                     constraints, rank -> write survivors back  (origin=web)
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from disco import matcher
from disco.agent import Agent, AgentConfig, RegistryStatus
from disco.cache import DEFAULT_TTL, LocalCache, ServiceRef
from disco.clock import SystemClock
from disco.matcher import CanonicalQuery, ScoredCandidate, SynonymTable
from disco.registry import DEFAULT_CATEGORY
from disco.wire.client import connect

log = logging.getLogger(__name__)

CACHE = "cache"
WEB = "web"


@dataclass
class DiscoveryResult:
    query: CanonicalQuery
    candidates: list[ScoredCandidate]
    origin: str
    discovery_time: float
    per_registry_status: dict[str, RegistryStatus] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return bool(self.candidates)

    def metrics(self, relevant=()) -> matcher.MetricsReport:
        return matcher.precision(self.candidates, relevant, self.discovery_time)


class Engine:
    def __init__(
        self,
        agent: Agent | AgentConfig,
        synonyms: SynonymTable | None = None,
        ttl: float = DEFAULT_TTL,
        threshold: float = matcher.DEFAULT_THRESHOLD,
        clock=None,
        cache: LocalCache | None = None,
    ):
        if not 0.0 <= threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        self.agent = agent if isinstance(agent, Agent) else Agent(agent)
        self.synonyms = synonyms or SynonymTable()
        self.threshold = threshold
        self.clock = clock or SystemClock()
        self.cache = cache if cache is not None else LocalCache(ttl)
        self.ttl = ttl

    def translate(self, raw: str) -> CanonicalQuery:
        return matcher.expand_synonyms(matcher.normalize(raw), self.synonyms)

    def _select(self, q: CanonicalQuery, cands) -> list[ScoredCandidate]:
        cands = matcher.apply_threshold(cands, self.threshold)
        return matcher.rank(matcher.csp_filter(cands, q.constraints))

    def _from_cache(self, q: CanonicalQuery) -> list[ScoredCandidate]:
        now = self.clock.now()
        hits = self.cache.lookup(q, now)
        if hits.had_stale:
            self.cache.evict_expired(now)
        return self._select(q, (
            ScoredCandidate(
                e.ref.service_key, e.ref.business_key, e.ref.service_name, e.ref.business_name,
                matcher.score_candidate(q, e.ref.service_name, e.ref.business_name),
                CACHE, e.category, e.ref.endpoint, e.ref.lang,
            )
            for e in hits.fresh
        ))

    def discover(self, raw_query: str, use_cache: bool = True, serial: bool = False) -> DiscoveryResult:
        """Run one discovery.

        ``use_cache=False`` neither reads nor writes the local cache.
        ``serial=True`` queries registries one at a time instead of
        concurrently. Raises AllRegistriesFailed when the registries are
        needed and none answers.
        """
        started = time.perf_counter()
        q = self.translate(raw_query)
        if use_cache:
            cached = self._from_cache(q)
            if cached:
                return DiscoveryResult(q, cached, CACHE, time.perf_counter() - started)

        fan = self.agent.serial_fan_out(q) if serial else self.agent.fan_out(q)
        found = self._select(q, (
            ScoredCandidate(
                s.service_key, s.business_key, s.service_name, s.business_name,
                matcher.score_candidate(q, s.service_name, s.business_name),
                WEB, s.category, s.endpoint, s.lang,
            )
            for s in fan.merged
        ))
        if use_cache:
            now = self.clock.now()
            for c in found:
                ref = ServiceRef(c.service_key, c.business_key, c.service_name, c.business_name, c.endpoint, c.lang)
                self.cache.put(ref, c.category, now, self.ttl)
        log.debug("discover %r: %d web results", raw_query, len(found))
        return DiscoveryResult(q, found, WEB, time.perf_counter() - started, fan.per_registry_status)

    def publish(self, registry_endpoint, business_name: str,
                services: list[tuple[str, str]] = (), lang: str = "en") -> tuple[str, list[str]]:
        return publish(registry_endpoint, business_name, services, lang)


def publish(registry_endpoint, business_name: str, services: list[tuple[str, str]] = (),
            lang: str = "en", timeout: float = 10.0) -> tuple[str, list[str]]:
    """Register a business and its (name, category) services remotely.

    Returns the generated business key and service keys.
    """
    client = connect(registry_endpoint)
    business = client.save_business(business_name, lang, timeout)
    keys = []
    for name, category in services:
        detail = client.save_service(business.business_key, name, lang, category or DEFAULT_CATEGORY, timeout)
        keys.append(detail.service.service_key)
    return business.business_key, keys
