"""Brute-force reference implementations.

These deliberately share no code with the production modules: they
re-derive tokens, predicates and distances from first principles so they can
act as independent evidence in differential tests.
"""

from __future__ import annotations

import re

_WORD = re.compile(r"[^\W_]+")


def oracle_tokens(text: str) -> set[str]:
    return set(_WORD.findall(text.lower()))


def oracle_edit_distance(a: str, b: str) -> int:
    """Classic Levenshtein distance with the full (len(a)+1) x (len(b)+1) table."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1),
            )
    return table[len(a)][len(b)]


def oracle_edit_component(a: str, b: str) -> float:
    a, b = a.lower(), b.lower()
    if not a and not b:
        return 1.0
    return 1 - oracle_edit_distance(a, b) / max(len(a), len(b))


def _holds(attribute_value: str, op: str, value: str) -> bool:
    x, v = attribute_value.casefold(), value.casefold()
    if op == "equals":
        return x == v
    if op == "contains":
        return x.find(v) >= 0
    if op == "prefix":
        return x[: len(v)] == v
    raise ValueError(op)


def oracle_filter(cands, constraints):
    """Subset of ``cands`` meeting every (attribute, op, value) constraint."""
    kept = []
    for c in cands:
        ok = True
        for k in constraints:
            if not _holds(getattr(c, k.attribute), k.op, k.value):
                ok = False
        if ok:
            kept.append(c)
    return kept


def oracle_lookup(entries, tokens, now: float, category_rules=()):
    """Linear scan: (fresh matches sorted by key, whether any match was stale)."""
    wanted = set(tokens)
    fresh, had_stale = [], False
    for e in entries:
        names = oracle_tokens(e.ref.service_name) | oracle_tokens(e.ref.business_name)
        if not names & wanted:
            continue
        if not all(_holds(e.category, r.op, r.value) for r in category_rules):
            continue
        if now - e.stored_at > e.ttl:
            had_stale = True
        else:
            fresh.append(e)
    fresh.sort(key=lambda e: e.ref.service_key)
    return fresh, had_stale


def oracle_precision(retrieved_keys, relevant_keys) -> float:
    retrieved = set(retrieved_keys)
    if not retrieved:
        return 0.0
    return sum(1 for k in retrieved if k in set(relevant_keys)) / len(retrieved)


def oracle_find_businesses(businesses, query: str):
    q = query.upper()
    hits = [b for b in businesses if q in b.name.upper()]
    return sorted(hits, key=lambda b: (b.name, b.business_key))


def oracle_score(tokens, synonym_tokens, fields, penalty: float = 0.9) -> float:
    """Exhaustive max over every (token, field) pair."""
    best = 0.0
    for t in list(tokens) + list(synonym_tokens):
        weight = penalty if t in synonym_tokens and t not in tokens else 1.0
        for f in fields:
            a, b = t.lower(), f.lower()
            sub = 1.0 if (a in b or b in a) else 0.0
            best = max(best, weight * max(sub, oracle_edit_component(a, b)))
    return best


def audit_cache(cache) -> list[str]:
    """Walk repositories and index; return every inconsistency found."""
    problems = []
    repos = cache.repositories()
    postings = cache.postings()
    live = {}
    for category, repo in repos.items():
        if not repo:
            problems.append(f"empty repository {category!r}")
        for key, entry in repo.items():
            if entry.category != category:
                problems.append(f"{key} filed under {category!r} but tagged {entry.category!r}")
            if key in live:
                problems.append(f"{key} present in two repositories")
            live[key] = entry
    for key, entry in live.items():
        for token in oracle_tokens(entry.ref.service_name) | oracle_tokens(entry.ref.business_name):
            if (entry.category, key) not in postings.get(token, ()):
                problems.append(f"{key} unreachable from token {token!r}")
    for token, bucket in postings.items():
        if not bucket:
            problems.append(f"empty posting list for {token!r}")
        for category, key in bucket:
            entry = repos.get(category, {}).get(key)
            if entry is None:
                problems.append(f"posting {token!r} -> {key} dangles")
            elif token not in oracle_tokens(entry.ref.service_name) | oracle_tokens(entry.ref.business_name):
                problems.append(f"posting {token!r} -> {key} not among its name tokens")
    if len(live) != len(cache):
        problems.append(f"size {len(cache)} != {len(live)} live entries")
    return problems
