"""Deterministic scaffolding: fake registries, clocks, fixtures and oracles."""

from disco.clock import LogicalClock
from disco.testing.fakes import FAILURE_MODES, FakeRegistry
from disco.testing.fixtures import (
    DRMS_BUSINESS_KEY,
    DRMS_BUSINESS_NAME,
    DRMS_OPERATOR,
    DRMS_SERVICES,
    LabeledCorpus,
    distractor_corpus,
    exact_match_corpus,
    drms_store,
    seed_drms,
    synthetic_stores,
)
from disco.testing.oracles import (
    audit_cache,
    oracle_edit_component,
    oracle_edit_distance,
    oracle_filter,
    oracle_find_businesses,
    oracle_lookup,
    oracle_precision,
    oracle_score,
)
