"""Blocking registry client with per-call deadlines."""

from __future__ import annotations

import http.client
import socket
import time
from typing import Protocol
from urllib.parse import urlsplit

from disco.wire import codec
from disco.wire.service import CONTENT_TYPE


class RegistryCallError(Exception):
    """A remote registry call did not produce a usable answer."""

    status = "transport_error"


class RegistryTimeout(RegistryCallError):
    status = "timeout"


class RegistryUnavailable(RegistryCallError):
    """Connection refused, reset, or otherwise not reachable."""

    status = "transport_error"


class RegistryProtocolError(RegistryCallError):
    """The registry answered, but not with the expected document."""

    status = "protocol_error"


class RegistryFault(RegistryProtocolError):
    """The registry answered with an error dispositionReport."""

    def __init__(self, report: codec.DispositionReport):
        super().__init__(f"{report.err_code}: {report.message}")
        self.report = report


class Transport(Protocol):
    endpoint: str

    def exchange(self, payload: bytes, timeout: float) -> bytes:
        """Send one document, return the reply. Raises RegistryCallError."""


class HttpTransport:
    def __init__(self, url: str):
        parts = urlsplit(url)
        if parts.scheme != "http" or not parts.hostname:
            raise ValueError(f"unsupported endpoint: {url!r}")
        self.endpoint = url
        self._host = parts.hostname
        self._port = parts.port or 80
        self._path = parts.path or "/uddi"

    def exchange(self, payload: bytes, timeout: float) -> bytes:
        if timeout <= 0:
            raise RegistryTimeout(f"{self.endpoint}: deadline already passed")
        deadline = time.monotonic() + timeout
        conn = http.client.HTTPConnection(self._host, self._port, timeout=timeout)
        try:
            conn.request("POST", self._path, body=payload, headers={"Content-Type": CONTENT_TYPE})
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise RegistryTimeout(f"{self.endpoint}: deadline exceeded")
            conn.sock.settimeout(remaining)
            resp = conn.getresponse()
            body = resp.read()
        except socket.timeout:
            raise RegistryTimeout(f"{self.endpoint}: no answer within {timeout:.3f}s") from None
        except http.client.HTTPException as exc:
            raise RegistryProtocolError(f"{self.endpoint}: {exc!r}") from None
        except OSError as exc:
            raise RegistryUnavailable(f"{self.endpoint}: {exc}") from None
        finally:
            conn.close()
        if resp.status != 200:
            raise RegistryProtocolError(f"{self.endpoint}: HTTP {resp.status}")
        return body


def endpoint_id(endpoint) -> str:
    return endpoint if isinstance(endpoint, str) else endpoint.endpoint


class RegistryClient:
    """Typed calls over a transport; decodes replies and raises on faults."""

    def __init__(self, transport: Transport):
        self.transport = transport
        self.endpoint = transport.endpoint

    def call(self, msg, timeout: float):
        reply = self.transport.exchange(codec.encode(msg), timeout)
        try:
            decoded = codec.decode(reply)
        except codec.WireError as exc:
            raise RegistryProtocolError(f"{self.endpoint}: {exc}") from None
        if isinstance(decoded, codec.DispositionReport) and not decoded.ok:
            raise RegistryFault(decoded)
        return decoded

    def _expect(self, msg, cls, timeout):
        reply = self.call(msg, timeout)
        if not isinstance(reply, cls):
            raise RegistryProtocolError(
                f"{self.endpoint}: expected {cls.__name__}, got {type(reply).__name__}")
        return reply

    def find_business(self, req: codec.FindBusinessRequest, timeout: float) -> codec.BusinessListResponse:
        return self._expect(req, codec.BusinessListResponse, timeout)

    def find_service(self, req: codec.FindServiceRequest, timeout: float) -> codec.BusinessListResponse:
        return self._expect(req, codec.BusinessListResponse, timeout)

    def save_business(self, name: str, lang: str = "en", timeout: float = 10.0) -> codec.BusinessDetail:
        return self._expect(codec.SaveBusinessRequest(name, lang), codec.BusinessDetail, timeout)

    def save_service(self, business_key: str, name: str, lang: str = "en",
                     category: str = codec.DEFAULT_CATEGORY, timeout: float = 10.0) -> codec.ServiceDetail:
        req = codec.SaveServiceRequest(business_key, name, lang, category)
        return self._expect(req, codec.ServiceDetail, timeout)

    def update_service(self, service: codec.ServiceInfo, timeout: float = 10.0) -> codec.ServiceDetail:
        req = codec.SaveServiceRequest(service.business_key, service.name, service.lang,
                                       service.category, service.service_key)
        return self._expect(req, codec.ServiceDetail, timeout)

    def delete_business(self, business_key: str, timeout: float = 10.0) -> None:
        self._expect(codec.DeleteBusinessRequest(business_key), codec.DispositionReport, timeout)

    def delete_service(self, service_key: str, timeout: float = 10.0) -> None:
        self._expect(codec.DeleteServiceRequest(service_key), codec.DispositionReport, timeout)


def connect(endpoint) -> RegistryClient:
    """Client for an ``http://`` URL or any object with ``exchange``."""
    if isinstance(endpoint, RegistryClient):
        return endpoint
    if isinstance(endpoint, str):
        return RegistryClient(HttpTransport(endpoint))
    return RegistryClient(endpoint)


def remote_find(endpoint, req: codec.FindBusinessRequest, deadline: float) -> codec.BusinessListResponse:
    """One find_business round trip; ``deadline`` is seconds from now."""
    return connect(endpoint).find_business(req, deadline)
