"""Indexer-based dynamic web service discovery.

A UDDI-lite registry (``disco.registry`` + ``disco.wire``) and a discovery
broker (``disco.engine``) that checks a TTL-stamped, category-partitioned
local cache before fanning out to registries concurrently.
"""

from disco.agent import Agent, AgentConfig, AllRegistriesFailed, FanOutResult
from disco.cache import CacheEntry, LocalCache, ServiceRef
from disco.clock import LogicalClock, SystemClock
from disco.engine import DiscoveryResult, Engine, publish
from disco.matcher import (
    CanonicalQuery,
    Constraint,
    MetricsReport,
    ScoredCandidate,
    SynonymTable,
    normalize,
)
from disco.registry import RegistryStore

__version__ = "0.1.0"
