"""Registry endpoint: dispatches wire documents to a RegistryStore."""

from __future__ import annotations

import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable

from disco.registry import NotFoundError, RegistryStore, ValidationError
from disco.wire import codec
from disco.wire.codec import (
    BusinessDetail,
    BusinessInfo,
    BusinessListResponse,
    DispositionReport,
    ServiceDetail,
    ServiceInfo,
)

log = logging.getLogger(__name__)

MAX_BUSINESS_INFOS = 100
UDDI_PATH = "/uddi"
CONTENT_TYPE = "text/xml; charset=utf-8"


def _service_info(s) -> ServiceInfo:
    return ServiceInfo(s.service_key, s.business_key, s.name, s.lang, s.category)


class RegistryService:
    """Turns one request document into exactly one response document.

    ``handle`` never raises: malformed input, unknown messages and store
    errors all come back as a dispositionReport.
    """

    def __init__(self, store: RegistryStore, max_infos: int = MAX_BUSINESS_INFOS):
        self.store = store
        self.max_infos = max_infos

    def _report(self, err_code: str, message: str = "") -> DispositionReport:
        return DispositionReport(err_code, message, self.store.operator_id)

    def _business_list(self, groups) -> BusinessListResponse:
        truncated = len(groups) > self.max_infos
        infos = tuple(
            BusinessInfo(b.business_key, b.name, b.lang, tuple(_service_info(s) for s in services))
            for b, services in groups[: self.max_infos]
        )
        return BusinessListResponse(self.store.operator_id, infos, truncated)

    def find_business(self, req: codec.FindBusinessRequest) -> BusinessListResponse:
        return self._business_list(self.store.find_businesses(req.name))

    def find_service(self, req: codec.FindServiceRequest) -> BusinessListResponse:
        by_owner: dict[str, list] = {}
        for s in self.store.find_services(req.name):
            by_owner.setdefault(s.business_key, []).append(s)
        groups = []
        for business_key, services in by_owner.items():
            try:
                groups.append((self.store.get_business(business_key), services))
            except NotFoundError:
                # owner deleted between the two reads
                continue
        groups.sort(key=lambda g: (g[0].name, g[0].business_key))
        return self._business_list(groups)

    def save_business(self, req: codec.SaveBusinessRequest) -> BusinessDetail:
        if req.business_key:
            self.store.update_business(req.business_key, req.name)
            key = req.business_key
        else:
            key = self.store.save_business(req.name, req.lang)
        b = self.store.get_business(key)
        return BusinessDetail(self.store.operator_id, b.business_key, b.name, b.lang)

    def save_service(self, req: codec.SaveServiceRequest) -> ServiceDetail:
        if req.service_key:
            self.store.update_service(req.service_key, req.name, req.category)
            key = req.service_key
        else:
            key = self.store.save_service(req.business_key, req.name, req.lang, req.category)
        return ServiceDetail(self.store.operator_id, _service_info(self.store.get_service(key)))

    def delete_business(self, req: codec.DeleteBusinessRequest) -> DispositionReport:
        self.store.delete_business(req.business_key)
        return self._report(codec.E_SUCCESS)

    def delete_service(self, req: codec.DeleteServiceRequest) -> DispositionReport:
        self.store.delete_service(req.service_key)
        return self._report(codec.E_SUCCESS)

    def dispatch(self, msg):
        handlers = {
            codec.FindBusinessRequest: self.find_business,
            codec.FindServiceRequest: self.find_service,
            codec.SaveBusinessRequest: self.save_business,
            codec.SaveServiceRequest: self.save_service,
            codec.DeleteBusinessRequest: self.delete_business,
            codec.DeleteServiceRequest: self.delete_service,
        }
        handler = handlers.get(type(msg))
        if handler is None:
            return self._report(codec.E_FATAL_ERROR, f"not a request: {type(msg).__name__}")
        return handler(msg)

    def handle(self, data: bytes) -> bytes:
        try:
            response = self.dispatch(codec.decode(data))
        except codec.EmptyNameError as exc:
            response = self._report(codec.E_NAME_TOO_SHORT, str(exc))
        except codec.WireError as exc:
            response = self._report(codec.E_FATAL_ERROR, str(exc))
        except NotFoundError as exc:
            response = self._report(codec.E_INVALID_KEY_PASSED, str(exc))
        except ValidationError as exc:
            code = codec.E_NAME_TOO_SHORT if "name" in str(exc) else codec.E_FATAL_ERROR
            response = self._report(code, str(exc))
        except Exception as exc:  # the endpoint must always answer
            log.exception("registry request failed")
            response = self._report(codec.E_FATAL_ERROR, f"internal error: {exc}")
        return codec.encode(response)


class _Handler(BaseHTTPRequestHandler):
    server: "RegistryServer"
    protocol_version = "HTTP/1.1"

    def do_POST(self):
        if self.path.rstrip("/") != UDDI_PATH:
            self.send_error(404)
            return
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length)
        try:
            reply = self.server.handler(body)
        except Exception:
            log.exception("handler failed")
            self.send_error(500)
            return
        self.send_response(200)
        self.send_header("Content-Type", CONTENT_TYPE)
        self.send_header("Content-Length", str(len(reply)))
        self.end_headers()
        self.wfile.write(reply)

    def log_message(self, format, *args):
        log.debug("%s - %s", self.address_string(), format % args)


class RegistryServer(ThreadingHTTPServer):
    """HTTP binding: POST one XML document to ``/uddi``, get one back.

    ``handler`` maps request bytes to response bytes; normally
    :meth:`RegistryService.handle`, but test fakes substitute their own.
    """

    daemon_threads = True
    request_queue_size = 128

    def __init__(self, handler: Callable[[bytes], bytes], host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _Handler)
        self.handler = handler
        self._thread: threading.Thread | None = None

    def handle_error(self, request, client_address):
        # clients that hit their deadline hang up mid-reply
        log.debug("connection from %s dropped", client_address, exc_info=True)

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}{UDDI_PATH}"

    def start(self) -> "RegistryServer":
        if self._thread is not None:
            return self
        self._thread = threading.Thread(target=self.serve_forever, args=(0.05,),
                                        name=f"registry-{self.url}", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()


def serve_registry(store: RegistryStore, host: str = "127.0.0.1", port: int = 8080) -> None:
    """Serve ``store`` over HTTP until interrupted."""
    server = RegistryServer(RegistryService(store).handle, host, port)
    log.info("registry %s serving at %s", store.operator_id, server.url)
    try:
        server.serve_forever()
    finally:
        server.server_close()
