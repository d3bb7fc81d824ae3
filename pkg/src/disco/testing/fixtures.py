"""Fixture corpora: the Microsoft example document and synthetic registries."""

from __future__ import annotations

import random
import uuid
from dataclasses import dataclass

from disco.registry import DEFAULT_CATEGORY, RegistryStore

DRMS_OPERATOR = "ms.com"
DRMS_BUSINESS_KEY = "c13cc7b2-642d-41d0-b2dd-7bb531a18997"
DRMS_BUSINESS_NAME = "Microsoft DRMS Dev"
DRMS_SERVICES = (
    ("6166f8b2-436d-4001-9f68-f37ff8b47ea3", "Certification"),
    ("7ae6c133-4471-4deb-93a5-1158aaa826b8", "Machine Activation"),
    ("52616482-653c-45f3-ae08-e4d4ca8b66c2", "Server Enrollment"),
)


def seed_drms(store: RegistryStore) -> RegistryStore:
    store.save_business(DRMS_BUSINESS_NAME, "en", key=DRMS_BUSINESS_KEY)
    for key, name in DRMS_SERVICES:
        store.save_service(DRMS_BUSINESS_KEY, name, "en", DEFAULT_CATEGORY, key=key)
    return store


def drms_store() -> RegistryStore:
    return seed_drms(RegistryStore(DRMS_OPERATOR))


def stable_key(*parts) -> str:
    return str(uuid.uuid5(uuid.NAMESPACE_URL, "disco:" + "/".join(map(str, parts))))


_TOPICS = ("weather", "payment", "image", "geocode", "translate", "shipping", "invoice",
           "calendar", "storage", "search", "currency", "stock", "email", "sms", "map")
_SUFFIXES = ("service", "lookup", "gateway", "api", "feed", "converter", "tracker")
_CATEGORIES = ("images", "files", "html", DEFAULT_CATEGORY)


def synthetic_stores(size: int, registries: int = 4, seed: int = 0) -> list[RegistryStore]:
    """``size`` services spread round-robin over ``registries`` stores.

    Service names are "<topic> <suffix> <n>", so a topic token matches about
    1/15 of the corpus. The first service in every store is a "weather" one,
    so the benchmark query has hits at any size.
    """
    rng = random.Random(seed)
    stores = [RegistryStore(f"registry-{i}.local") for i in range(registries)]
    business_keys = [[] for _ in stores]
    for i in range(size):
        r = i % registries
        store = stores[r]
        if not business_keys[r] or rng.random() < 0.2:
            business_keys[r].append(store.save_business(f"Vendor {r}-{len(business_keys[r])}", "en",
                                                        key=stable_key(seed, "b", r, len(business_keys[r]))))
        topic = _TOPICS[0] if i < registries else rng.choice(_TOPICS)
        name = f"{topic} {rng.choice(_SUFFIXES)} {i}"
        store.save_service(rng.choice(business_keys[r]), name, "en", rng.choice(_CATEGORIES),
                           key=stable_key(seed, "s", i))
    return stores


def pseudo_words(count: int, rng: random.Random, length: int = 8) -> list[str]:
    """Distinct letter-only words, none a substring of another."""
    consonants = "bcdfgklmnprstvz"
    vowels = "aeiou"
    words: list[str] = []
    while len(words) < count:
        w = "".join(rng.choice(consonants) + rng.choice(vowels) for _ in range(length // 2))
        if all(w not in other and other not in w for other in words):
            words.append(w)
    return words


@dataclass
class LabeledCorpus:
    store: RegistryStore
    queries: list[tuple[str, set[str]]]

    def to_text(self) -> str:
        return "".join(f"{q} | {','.join(sorted(rel))}\n" for q, rel in self.queries)


def exact_match_corpus(services: int = 100, queries: int = 20, seed: int = 7) -> LabeledCorpus:
    """Every query is the full, unique name of exactly one service.

    No service or business name contains another's name, so the registries
    return only the target and precision is 1.0 for every query.
    """
    rng = random.Random(seed)
    names = pseudo_words(services, rng)
    store = RegistryStore("exact.local")
    owners = [store.save_business(f"Vendor {b}", "en", key=stable_key("exact", "b", b)) for b in range(10)]
    keys = []
    for i, name in enumerate(names):
        keys.append(store.save_service(owners[i % len(owners)], name, key=stable_key("exact", "s", i)))
    picks = rng.sample(range(services), queries)
    return LabeledCorpus(store, [(names[i], {keys[i]}) for i in picks])


def distractor_corpus(services: int = 100, queries: int = 20, seed: int = 11) -> LabeledCorpus:
    """Each query's target has a twin under another business with the same
    full name; the twin is not relevant, so precision is forced to 0.5."""
    rng = random.Random(seed)
    names = pseudo_words(services - queries, rng)
    store = RegistryStore("distractor.local")
    owners = [store.save_business(f"Vendor {b}", "en", key=stable_key("dist", "b", b)) for b in range(10)]
    labeled = []
    for i, name in enumerate(names):
        owner = owners[i % len(owners)]
        key = store.save_service(owner, name, key=stable_key("dist", "s", i))
        if i < queries:
            twin_owner = owners[(i + 1) % len(owners)]
            store.save_service(twin_owner, name, key=stable_key("dist", "twin", i))
            labeled.append((name, {key}))
    return LabeledCorpus(store, labeled)
