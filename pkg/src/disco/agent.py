"""Discovery agents: query every listed registry and merge what comes back."""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path

from disco.matcher import CanonicalQuery
from disco.wire import codec
from disco.wire.client import RegistryCallError, RegistryClient, connect, endpoint_id

OK = "ok"
TIMEOUT = "timeout"
TRANSPORT_ERROR = "transport_error"
PROTOCOL_ERROR = "protocol_error"


@dataclass(frozen=True)
class FoundService:
    service_key: str
    business_key: str
    service_name: str
    business_name: str
    category: str
    endpoint: str
    lang: str = "en"


@dataclass(frozen=True)
class RegistryStatus:
    state: str
    count: int = 0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.state == OK

    def __str__(self):
        return f"ok({self.count})" if self.ok else f"{self.state}: {self.detail}"


@dataclass
class AgentConfig:
    registries: list = field(default_factory=list)
    per_registry_deadline: float = 2.0
    overall_deadline: float = 5.0

    def __post_init__(self):
        if not self.registries:
            raise ValueError("agent needs at least one registry")
        if self.per_registry_deadline <= 0 or self.overall_deadline <= 0:
            raise ValueError("deadlines must be positive")
        if self.per_registry_deadline > self.overall_deadline:
            raise ValueError("per_registry_deadline must not exceed overall_deadline")
        ids = [endpoint_id(r) for r in self.registries]
        if len(set(ids)) != len(ids):
            raise ValueError("registry endpoints must be distinct")


@dataclass(frozen=True)
class FanOutResult:
    merged: list[FoundService]
    per_registry_status: dict[str, RegistryStatus]
    elapsed: float


class AllRegistriesFailed(Exception):
    def __init__(self, statuses: dict[str, RegistryStatus], elapsed: float = 0.0):
        detail = "; ".join(f"{e}: {s}" for e, s in statuses.items())
        super().__init__(f"no registry answered ({detail})")
        self.statuses = statuses
        self.elapsed = elapsed


def read_registry_list(path) -> list[str]:
    """Endpoints from a file: one per line, ``#`` comments."""
    endpoints = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            endpoints.append(line)
    return endpoints


def wire_requests(q: CanonicalQuery) -> list:
    """One find_business and one find_service per expanded token.

    Registries match names by substring, so hits for the full query text are
    always a subset of the hits for its tokens; the text itself is not sent.
    """
    requests = []
    for term in q.expanded_tokens:
        requests.append(codec.FindBusinessRequest(term))
        requests.append(codec.FindServiceRequest(term))
    return requests


def flatten(resp: codec.BusinessListResponse, endpoint: str) -> list[FoundService]:
    return [
        FoundService(s.service_key, s.business_key, s.name, b.name, s.category, endpoint, s.lang)
        for b in resp.business_infos
        for s in b.services
    ]


def merge(per_registry: list[tuple[str, list[FoundService]]]) -> list[FoundService]:
    """Concatenate in registry order, dropping repeats of (service_key, endpoint).

    The same service key reported by two endpoints is kept twice: they are
    distinct sources.
    """
    seen: set[tuple[str, str]] = set()
    merged = []
    for endpoint, services in per_registry:
        for s in services:
            key = (s.service_key, endpoint)
            if key not in seen:
                seen.add(key)
                merged.append(s)
    return merged


def _status_for(exc: RegistryCallError) -> RegistryStatus:
    return RegistryStatus(exc.status, 0, str(exc))


class Agent:
    """Fan-out coordinator over a fixed list of registries.

    Safe to call from several threads at once; the only shared state is the
    call counter.
    """

    def __init__(self, config: AgentConfig):
        self.config = config
        self.clients: list[RegistryClient] = [connect(r) for r in config.registries]
        self._count_lock = threading.Lock()
        self.fan_outs = 0

    @property
    def endpoints(self) -> list[str]:
        return [c.endpoint for c in self.clients]

    def _bump(self):
        with self._count_lock:
            self.fan_outs += 1

    @staticmethod
    def _call(client: RegistryClient, req, timeout: float) -> list[FoundService]:
        if isinstance(req, codec.FindServiceRequest):
            resp = client.find_service(req, timeout)
        else:
            resp = client.find_business(req, timeout)
        return flatten(resp, client.endpoint)

    def _finish(self, outcomes, started: float) -> FanOutResult:
        statuses: dict[str, RegistryStatus] = {}
        per_registry = []
        for client, result in zip(self.clients, outcomes):
            if isinstance(result, RegistryStatus):
                statuses[client.endpoint] = result
                continue
            services = merge([(client.endpoint, result)])
            statuses[client.endpoint] = RegistryStatus(OK, len(services))
            per_registry.append((client.endpoint, services))
        elapsed = time.monotonic() - started
        if not any(s.ok for s in statuses.values()):
            raise AllRegistriesFailed(statuses, elapsed)
        return FanOutResult(merge(per_registry), statuses, elapsed)

    def fan_out(self, q: CanonicalQuery) -> FanOutResult:
        """Query all registries concurrently, one thread per request.

        Returns whatever succeeded by the overall deadline; registries that
        did not answer in time are reported as timeouts.
        """
        self._bump()
        cfg = self.config
        started = time.monotonic()
        end = started + cfg.overall_deadline
        requests = wire_requests(q)
        timeout = min(cfg.per_registry_deadline, cfg.overall_deadline)
        pool = ThreadPoolExecutor(max_workers=len(self.clients) * len(requests), thread_name_prefix="agent")
        try:
            futures = [[pool.submit(self._call, c, r, timeout) for r in requests] for c in self.clients]
            wait([f for fs in futures for f in fs], timeout=max(0.0, end - time.monotonic()))
        finally:
            pool.shutdown(wait=False, cancel_futures=True)
        outcomes = []
        for client_futures in futures:
            found: list[FoundService] = []
            status = None
            for f in client_futures:
                if not f.done():
                    status = RegistryStatus(TIMEOUT, 0, "overall deadline reached")
                    break
                exc = f.exception()
                if exc is not None:
                    status = _status_for(exc) if isinstance(exc, RegistryCallError) else \
                        RegistryStatus(PROTOCOL_ERROR, 0, repr(exc))
                    break
                found.extend(f.result())
            outcomes.append(status if status is not None else found)
        return self._finish(outcomes, started)

    def serial_fan_out(self, q: CanonicalQuery) -> FanOutResult:
        """Same contract as :meth:`fan_out`, one request at a time."""
        self._bump()
        cfg = self.config
        started = time.monotonic()
        end = started + cfg.overall_deadline
        requests = wire_requests(q)
        outcomes = []
        for client in self.clients:
            registry_end = min(time.monotonic() + cfg.per_registry_deadline, end)
            found: list[FoundService] = []
            status = None
            for req in requests:
                remaining = registry_end - time.monotonic()
                if remaining <= 0:
                    status = RegistryStatus(TIMEOUT, 0, "deadline reached")
                    break
                try:
                    found.extend(self._call(client, req, remaining))
                except RegistryCallError as exc:
                    status = _status_for(exc)
                    break
            outcomes.append(status if status is not None else found)
        return self._finish(outcomes, started)


def fan_out(cfg: AgentConfig, q: CanonicalQuery) -> FanOutResult:
    return Agent(cfg).fan_out(q)


def serial_fan_out(cfg: AgentConfig, q: CanonicalQuery) -> FanOutResult:
    return Agent(cfg).serial_fan_out(q)
