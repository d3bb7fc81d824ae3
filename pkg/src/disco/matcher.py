"""Query translation, keyword/fuzzy scoring, constraint filtering and ranking."""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Iterable

from disco import kernels

SYNONYM_PENALTY = 0.9
DEFAULT_THRESHOLD = 0.5

ATTRIBUTES = ("business_name", "service_name", "category")
OPS = {"=": "equals", "~": "contains", "^": "prefix"}

_TOKEN_RE = re.compile(r"[^\W_]+")
_CLAUSE_START = re.compile(
    r"(?:^|\s+)where\s+(?=(?:business_name|service_name|category)\s*[=~^])", re.IGNORECASE)
_CLAUSE_RE = re.compile(r"(business_name|service_name|category)\s*([=~^])\s*(.*?)\s*", re.IGNORECASE | re.DOTALL)


class QueryError(ValueError):
    pass


class EmptyQueryError(QueryError):
    pass


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on runs of non-alphanumerics, first occurrence order."""
    return list(dict.fromkeys(_TOKEN_RE.findall(text.lower())))


@dataclass(frozen=True)
class Constraint:
    attribute: str
    op: str
    value: str

    def __post_init__(self):
        if self.attribute not in ATTRIBUTES:
            raise QueryError(f"unknown constraint attribute: {self.attribute!r}")
        if self.op not in OPS.values():
            raise QueryError(f"unknown constraint operator: {self.op!r}")
        if not self.value:
            raise QueryError("constraint value must be non-empty")

    def test(self, actual: str) -> bool:
        actual = actual.casefold()
        wanted = self.value.casefold()
        if self.op == "equals":
            return actual == wanted
        if self.op == "contains":
            return wanted in actual
        return actual.startswith(wanted)

    def satisfied_by(self, candidate) -> bool:
        return self.test(getattr(candidate, self.attribute))

    def __str__(self):
        symbol = {v: k for k, v in OPS.items()}[self.op]
        return f"where {self.attribute}{symbol}{self.value}"


ConstraintSet = tuple  # tuple[Constraint, ...], conjunctive


@dataclass(frozen=True)
class CanonicalQuery:
    raw: str
    text: str
    tokens: tuple[str, ...]
    expanded_tokens: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()

    @property
    def synonym_tokens(self) -> tuple[str, ...]:
        direct = set(self.tokens)
        return tuple(t for t in self.expanded_tokens if t not in direct)

    def category_constraints(self) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.attribute == "category")


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def parse_constraints(clauses: str) -> tuple[Constraint, ...]:
    constraints = []
    for clause in _CLAUSE_START.split(clauses):
        if not clause.strip():
            continue
        m = _CLAUSE_RE.fullmatch(clause)
        if m is None:
            raise QueryError(f"cannot parse constraint clause: {clause!r}")
        attribute, symbol, value = m.groups()
        constraints.append(Constraint(attribute.lower(), OPS[symbol], _unquote(value)))
    return tuple(constraints)


def normalize(raw: str) -> CanonicalQuery:
    """Translate a user query into tokens plus a conjunctive constraint set.

    Trailing ``where ATTR=V`` (equals), ``where ATTR~V`` (contains) and
    ``where ATTR^V`` (prefix) clauses become constraints; the text before the
    first clause is tokenized. No synonym expansion happens here.
    """
    m = _CLAUSE_START.search(raw)
    text, clauses = (raw, "") if m is None else (raw[: m.start()], raw[m.start():])
    tokens = tuple(tokenize(text))
    if not tokens:
        raise EmptyQueryError(f"query has no searchable terms: {raw!r}")
    return CanonicalQuery(raw, text.strip(), tokens, tokens, parse_constraints(clauses))


class SynonymTable:
    """Symmetric token -> synonyms map.

    File format: one group per line, comma separated, ``#`` starts a comment.
    Every member of a group is a synonym of every other member.
    """

    def __init__(self, entries: dict[str, Iterable[str]] | None = None):
        self.entries: dict[str, set[str]] = {}
        for token, synonyms in (entries or {}).items():
            for synonym in synonyms:
                self.add(token, synonym)

    @staticmethod
    def _clean(word: str) -> str:
        return " ".join(word.lower().split())

    def add(self, a: str, b: str) -> None:
        a, b = self._clean(a), self._clean(b)
        if not a or not b or a == b:
            return
        self.entries.setdefault(a, set()).add(b)
        self.entries.setdefault(b, set()).add(a)

    def add_group(self, words: Iterable[str]) -> None:
        words = [w for w in (self._clean(w) for w in words) if w]
        for i, a in enumerate(words):
            for b in words[i + 1:]:
                self.add(a, b)

    @classmethod
    def parse(cls, text: str) -> "SynonymTable":
        table = cls()
        for line in text.splitlines():
            line = line.split("#", 1)[0]
            if line.strip():
                table.add_group(line.split(","))
        return table

    @classmethod
    def load(cls, path) -> "SynonymTable":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def synonyms(self, token: str) -> set[str]:
        return self.entries.get(token, set())

    def __len__(self):
        return len(self.entries)


def expand_synonyms(q: CanonicalQuery, table: SynonymTable | None) -> CanonicalQuery:
    expanded = dict.fromkeys(q.tokens)
    if table is not None:
        for token in q.tokens:
            for synonym in sorted(table.synonyms(token)):
                expanded.setdefault(synonym)
    return replace(q, expanded_tokens=tuple(expanded))


def fuzzy_score(a: str, b: str) -> float:
    """Similarity in [0, 1]: 1.0 when either string contains the other
    (prefix, suffix or infix, case-insensitive), else normalized
    Levenshtein similarity."""
    return kernels.fuzzy_score(a, b)


def score_candidate(q: CanonicalQuery, service_name: str, business_name: str) -> float:
    direct = set(q.tokens)
    weights = [1.0 if t in direct else SYNONYM_PENALTY for t in q.expanded_tokens]
    return kernels.best_score(q.expanded_tokens, weights, (service_name, business_name))


@dataclass(frozen=True)
class ScoredCandidate:
    service_key: str
    business_key: str
    service_name: str
    business_name: str
    score: float
    origin: str  # "cache" or "web"
    category: str = "uncategorized"
    endpoint: str = ""
    lang: str = "en"

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score out of range: {self.score}")
        if self.origin not in ("cache", "web"):
            raise ValueError(f"bad origin: {self.origin!r}")


def apply_threshold(cands: Iterable[ScoredCandidate], threshold: float = DEFAULT_THRESHOLD) -> list[ScoredCandidate]:
    return [c for c in cands if c.score >= threshold]


def csp_filter(cands: Iterable[ScoredCandidate], constraints: Iterable[Constraint]) -> list[ScoredCandidate]:
    """Keep candidates satisfying every constraint, preserving order."""
    constraints = tuple(constraints)
    return [c for c in cands if all(k.satisfied_by(c) for k in constraints)]


def rank_key(c: ScoredCandidate):
    return (-c.score, c.service_name, c.service_key, c.endpoint)


def rank(cands: Iterable[ScoredCandidate]) -> list[ScoredCandidate]:
    return sorted(cands, key=rank_key)


@dataclass(frozen=True)
class MetricsReport:
    retrieved_count: int
    relevant_retrieved_count: int
    precision: float
    discovery_time: float = 0.0  # seconds


def precision(result: Iterable, relevant: Iterable[str], discovery_time: float = 0.0) -> MetricsReport:
    """Share of distinct retrieved services whose key is in ``relevant``.

    ``result`` may hold candidates or bare service keys. An empty result has
    precision 0.
    """
    keys = {getattr(r, "service_key", r) for r in result}
    hits = len(keys & set(relevant))
    return MetricsReport(len(keys), hits, hits / len(keys) if keys else 0.0, discovery_time)


NO_SERVICE = "no service found"

_COLUMNS = ("origin", "score", "service", "business", "category", "service_key", "business_key", "endpoint")


def render_response(results: list[ScoredCandidate], fmt: str = "table") -> str:
    """User-facing rendering: ``table`` (aligned text) or ``records`` (JSON lines)."""
    if fmt == "records":
        return "".join(json.dumps(asdict(c), sort_keys=True) + "\n" for c in results)
    if fmt != "table":
        raise ValueError(f"unknown output format: {fmt!r}")
    if not results:
        return NO_SERVICE + "\n"
    rows = [_COLUMNS] + [
        (c.origin, f"{c.score:.3f}", c.service_name, c.business_name, c.category,
         c.service_key, c.business_key, c.endpoint)
        for c in results
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(len(_COLUMNS))]
    return "".join("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def parse_records(text: str) -> list[ScoredCandidate]:
    return [ScoredCandidate(**json.loads(line)) for line in text.splitlines() if line.strip()]
