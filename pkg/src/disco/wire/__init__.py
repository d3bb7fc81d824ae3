from disco.wire.codec import (
    BusinessDetail,
    BusinessInfo,
    BusinessListResponse,
    DeleteBusinessRequest,
    DeleteServiceRequest,
    DispositionReport,
    FindBusinessRequest,
    FindServiceRequest,
    SaveBusinessRequest,
    SaveServiceRequest,
    ServiceDetail,
    ServiceInfo,
    WireError,
    WireParseError,
    WireProtocolError,
    WireValidationError,
    decode,
    encode,
)
from disco.wire.client import (
    HttpTransport,
    RegistryCallError,
    RegistryClient,
    RegistryFault,
    RegistryProtocolError,
    RegistryTimeout,
    RegistryUnavailable,
    connect,
    endpoint_id,
    remote_find,
)
from disco.wire.service import RegistryServer, RegistryService, serve_registry
