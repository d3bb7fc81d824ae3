"""Encoder/decoder for UDDI v2 style inquiry and publisher messages.

Documents are bare UDDI bodies (no SOAP envelope) in the
``urn:uddi-org:api_v2`` namespace. Encoding is deterministic: fixed
attribute order, two-space indentation, text inline with its element.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Union

from disco.registry import DEFAULT_CATEGORY

UDDI_NS = "urn:uddi-org:api_v2"
XML_NS = "http://www.w3.org/XML/1998/namespace"
GENERIC = "2.0"

E_SUCCESS = "E_success"
E_INVALID_KEY_PASSED = "E_invalidKeyPassed"
E_FATAL_ERROR = "E_fatalError"
E_NAME_TOO_SHORT = "E_nameTooShort"

ERRNO = {
    E_SUCCESS: 0,
    E_NAME_TOO_SHORT: 10020,
    E_INVALID_KEY_PASSED: 10210,
    E_FATAL_ERROR: 10500,
}


class WireError(Exception):
    """Base class for codec failures."""


class WireParseError(WireError):
    """Bytes are not well-formed XML."""


class WireValidationError(WireError):
    """Document is well-formed but a required element or value is missing."""


class EmptyNameError(WireValidationError):
    """A ``name`` element is present but empty."""


class WireProtocolError(WireError):
    """Wrong namespace, protocol version or unexpected root element."""


# -- messages ---------------------------------------------------------------

@dataclass(frozen=True)
class FindBusinessRequest:
    name: str
    qualifiers: tuple[str, ...] = ()
    generic: str = GENERIC


@dataclass(frozen=True)
class FindServiceRequest:
    """Service-name inquiry; answered with a :class:`BusinessListResponse`
    holding only the matching services under their owners."""
    name: str
    qualifiers: tuple[str, ...] = ()
    generic: str = GENERIC


@dataclass(frozen=True)
class ServiceInfo:
    service_key: str
    business_key: str
    name: str
    lang: str = "en"
    category: str = DEFAULT_CATEGORY


@dataclass(frozen=True)
class BusinessInfo:
    business_key: str
    name: str
    lang: str = "en"
    services: tuple[ServiceInfo, ...] = ()


@dataclass(frozen=True)
class BusinessListResponse:
    operator: str
    business_infos: tuple[BusinessInfo, ...] = ()
    truncated: bool = False
    generic: str = GENERIC


@dataclass(frozen=True)
class SaveBusinessRequest:
    """An empty ``business_key`` asks the registry to create a new business;
    a non-empty one renames an existing business."""
    name: str
    lang: str = "en"
    business_key: str = ""
    generic: str = GENERIC


@dataclass(frozen=True)
class SaveServiceRequest:
    business_key: str
    name: str
    lang: str = "en"
    category: str = DEFAULT_CATEGORY
    service_key: str = ""
    generic: str = GENERIC


@dataclass(frozen=True)
class DeleteBusinessRequest:
    business_key: str
    generic: str = GENERIC


@dataclass(frozen=True)
class DeleteServiceRequest:
    service_key: str
    generic: str = GENERIC


@dataclass(frozen=True)
class BusinessDetail:
    operator: str
    business_key: str
    name: str
    lang: str = "en"
    generic: str = GENERIC


@dataclass(frozen=True)
class ServiceDetail:
    operator: str
    service: ServiceInfo
    generic: str = GENERIC


@dataclass(frozen=True)
class DispositionReport:
    err_code: str
    message: str = ""
    operator: str = ""
    generic: str = GENERIC

    def __post_init__(self):
        if self.err_code not in ERRNO:
            raise ValueError(f"unknown error code: {self.err_code}")

    @property
    def ok(self) -> bool:
        return self.err_code == E_SUCCESS

    @property
    def errno(self) -> int:
        return ERRNO[self.err_code]


Message = Union[
    FindBusinessRequest, FindServiceRequest, BusinessListResponse,
    SaveBusinessRequest, SaveServiceRequest, DeleteBusinessRequest,
    DeleteServiceRequest, BusinessDetail, ServiceDetail, DispositionReport,
]


# -- encoding ---------------------------------------------------------------

def _esc_text(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace("\r", "&#13;"))


def _esc_attr(s: str) -> str:
    # parsers normalize raw tab/newline in attributes to spaces
    return (_esc_text(s).replace('"', "&quot;").replace("\n", "&#10;")
            .replace("\t", "&#9;"))


class _Node:
    __slots__ = ("tag", "attrs", "children", "text")

    def __init__(self, tag, attrs=(), children=(), text=None):
        self.tag = tag
        self.attrs = attrs
        self.children = list(children)
        self.text = text

    def render(self, out: list[str], depth: int) -> None:
        pad = "  " * depth
        attrs = "".join(f' {k}="{_esc_attr(v)}"' for k, v in self.attrs)
        if self.text is not None:
            out.append(f"{pad}<{self.tag}{attrs}>{_esc_text(self.text)}</{self.tag}>")
        elif not self.children:
            out.append(f"{pad}<{self.tag}{attrs}/>")
        else:
            out.append(f"{pad}<{self.tag}{attrs}>")
            for child in self.children:
                child.render(out, depth + 1)
            out.append(f"{pad}</{self.tag}>")


def _document(root: _Node) -> bytes:
    out: list[str] = []
    root.render(out, 0)
    return ("\n".join(out) + "\n").encode("utf-8")


def _name(name: str, lang: str | None = None) -> _Node:
    attrs = () if lang is None else (("xml:lang", lang),)
    return _Node("name", attrs, text=name)


def _qualifiers(qualifiers) -> _Node:
    return _Node("findQualifiers", children=[_Node("findQualifier", text=q) for q in qualifiers])


def _category_bag(category: str) -> list[_Node]:
    if category == DEFAULT_CATEGORY:
        return []
    ref = _Node("keyedReference", (("keyName", "category"), ("keyValue", category)))
    return [_Node("categoryBag", children=[ref])]


def _root(tag: str, generic: str, *extra, children=()) -> _Node:
    attrs = (("generic", generic),) + tuple(extra) + (("xmlns", UDDI_NS),)
    return _Node(tag, attrs, children)


def _service_info(s: ServiceInfo) -> _Node:
    return _Node(
        "serviceInfo",
        (("businessKey", s.business_key), ("serviceKey", s.service_key)),
        [_name(s.name, s.lang), *_category_bag(s.category)],
    )


def _business_info(b: BusinessInfo) -> _Node:
    return _Node(
        "businessInfo",
        (("businessKey", b.business_key),),
        [_name(b.name, b.lang), _Node("serviceInfos", children=[_service_info(s) for s in b.services])],
    )


def encode_find_business(req: FindBusinessRequest) -> bytes:
    return _document(_root("find_business", req.generic,
                           children=[_qualifiers(req.qualifiers), _name(req.name)]))


def encode_find_service(req: FindServiceRequest) -> bytes:
    return _document(_root("find_service", req.generic,
                           children=[_qualifiers(req.qualifiers), _name(req.name)]))


def encode_business_list(resp: BusinessListResponse) -> bytes:
    root = _root(
        "businessList", resp.generic,
        ("operator", resp.operator), ("truncated", "true" if resp.truncated else "false"),
        children=[_Node("businessInfos", children=[_business_info(b) for b in resp.business_infos])],
    )
    return _document(root)


def encode_save_business(req: SaveBusinessRequest) -> bytes:
    entity = _Node("businessEntity", (("businessKey", req.business_key),), [_name(req.name, req.lang)])
    return _document(_root("save_business", req.generic, children=[entity]))


def encode_save_service(req: SaveServiceRequest) -> bytes:
    service = _Node(
        "businessService",
        (("businessKey", req.business_key), ("serviceKey", req.service_key)),
        [_name(req.name, req.lang), *_category_bag(req.category)],
    )
    return _document(_root("save_service", req.generic, children=[service]))


def encode_delete_business(req: DeleteBusinessRequest) -> bytes:
    return _document(_root("delete_business", req.generic,
                           children=[_Node("businessKey", text=req.business_key)]))


def encode_delete_service(req: DeleteServiceRequest) -> bytes:
    return _document(_root("delete_service", req.generic,
                           children=[_Node("serviceKey", text=req.service_key)]))


def encode_business_detail(resp: BusinessDetail) -> bytes:
    entity = _Node("businessEntity", (("businessKey", resp.business_key),), [_name(resp.name, resp.lang)])
    return _document(_root("businessDetail", resp.generic, ("operator", resp.operator), children=[entity]))


def encode_service_detail(resp: ServiceDetail) -> bytes:
    s = resp.service
    service = _Node(
        "businessService",
        (("businessKey", s.business_key), ("serviceKey", s.service_key)),
        [_name(s.name, s.lang), *_category_bag(s.category)],
    )
    return _document(_root("serviceDetail", resp.generic, ("operator", resp.operator), children=[service]))


def encode_disposition_report(rep: DispositionReport) -> bytes:
    info = _Node("errInfo", (("errCode", rep.err_code),), text=rep.message)
    result = _Node("result", (("errno", str(rep.errno)),), [info])
    return _document(_root("dispositionReport", rep.generic, ("operator", rep.operator), children=[result]))


_ENCODERS = {
    FindBusinessRequest: encode_find_business,
    FindServiceRequest: encode_find_service,
    BusinessListResponse: encode_business_list,
    SaveBusinessRequest: encode_save_business,
    SaveServiceRequest: encode_save_service,
    DeleteBusinessRequest: encode_delete_business,
    DeleteServiceRequest: encode_delete_service,
    BusinessDetail: encode_business_detail,
    ServiceDetail: encode_service_detail,
    DispositionReport: encode_disposition_report,
}


def encode(msg: Message) -> bytes:
    try:
        encoder = _ENCODERS[type(msg)]
    except KeyError:
        raise TypeError(f"not a wire message: {type(msg).__name__}") from None
    return encoder(msg)


# -- decoding ---------------------------------------------------------------

def _q(tag: str) -> str:
    return f"{{{UDDI_NS}}}{tag}"


_LANG = f"{{{XML_NS}}}lang"


def parse_root(data: bytes) -> tuple[str, ET.Element]:
    """Parse ``data`` and return ``(local root name, root element)``.

    Raises WireParseError for malformed XML and WireProtocolError when the
    root is outside the UDDI v2 namespace.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise WireParseError(str(exc)) from None
    if not root.tag.startswith("{"):
        raise WireProtocolError(f"element {root.tag!r} has no namespace, expected {UDDI_NS}")
    ns, _, local = root.tag[1:].partition("}")
    if ns != UDDI_NS:
        raise WireProtocolError(f"unexpected namespace {ns!r}, expected {UDDI_NS}")
    generic = root.get("generic")
    if generic != GENERIC:
        raise WireProtocolError(f"unsupported generic version {generic!r}")
    return local, root


def _expect(data: bytes, tag: str) -> ET.Element:
    local, root = parse_root(data)
    if local != tag:
        raise WireProtocolError(f"expected <{tag}>, got <{local}>")
    return root


def _child(el: ET.Element, tag: str) -> ET.Element:
    found = el.find(_q(tag))
    if found is None:
        raise WireValidationError(f"<{el.tag.rpartition('}')[2]}> is missing <{tag}>")
    return found


def _attr(el: ET.Element, name: str) -> str:
    value = el.get(name)
    if value is None:
        raise WireValidationError(f"<{el.tag.rpartition('}')[2]}> is missing attribute {name}")
    return value


def _text(el: ET.Element) -> str:
    return el.text or ""


_XML_SPACE = re.compile(r"[ \t\r\n]+")


def fold_space(s: str) -> str:
    """Collapse XML whitespace runs to one space and trim the ends."""
    return _XML_SPACE.sub(" ", s).strip(" ")


def _required_name(el: ET.Element) -> ET.Element:
    name = _child(el, "name")
    if not fold_space(_text(name)):
        raise EmptyNameError("name must be non-empty")
    return name


def _name_text(el: ET.Element) -> str:
    # names are display strings; line breaks and indentation inside them are layout
    return fold_space(_text(el))


def _bool(value: str) -> bool:
    if value in ("true", "1"):
        return True
    if value in ("false", "0"):
        return False
    raise WireValidationError(f"not a boolean: {value!r}")


def _category(el: ET.Element) -> str:
    bag = el.find(_q("categoryBag"))
    if bag is not None:
        for ref in bag.findall(_q("keyedReference")):
            if ref.get("keyName") == "category" and ref.get("keyValue"):
                return ref.get("keyValue")
    return DEFAULT_CATEGORY


def _qualifier_list(el: ET.Element) -> tuple[str, ...]:
    quals = el.find(_q("findQualifiers"))
    if quals is None:
        return ()
    return tuple(_text(q) for q in quals.findall(_q("findQualifier")))


def _find_request(root: ET.Element, cls):
    name = _required_name(root)
    return cls(name=_name_text(name), qualifiers=_qualifier_list(root), generic=root.get("generic"))


def _service_info_from(el: ET.Element) -> ServiceInfo:
    name = _required_name(el)
    return ServiceInfo(
        service_key=_attr(el, "serviceKey"),
        business_key=_attr(el, "businessKey"),
        name=_name_text(name),
        lang=name.get(_LANG, ""),
        category=_category(el),
    )


def _business_list_from(root: ET.Element) -> BusinessListResponse:
    infos = []
    for b in _child(root, "businessInfos").findall(_q("businessInfo")):
        name = _required_name(b)
        services_el = b.find(_q("serviceInfos"))
        services = () if services_el is None else tuple(
            _service_info_from(s) for s in services_el.findall(_q("serviceInfo")))
        infos.append(BusinessInfo(_attr(b, "businessKey"), _name_text(name), name.get(_LANG, ""), services))
    return BusinessListResponse(
        operator=root.get("operator", ""),
        business_infos=tuple(infos),
        truncated=_bool(root.get("truncated", "false")),
        generic=root.get("generic"),
    )


def _save_business_from(root: ET.Element) -> SaveBusinessRequest:
    entity = _child(root, "businessEntity")
    name = _required_name(entity)
    return SaveBusinessRequest(_name_text(name), name.get(_LANG, ""), entity.get("businessKey", ""),
                               root.get("generic"))


def _save_service_from(root: ET.Element) -> SaveServiceRequest:
    svc = _child(root, "businessService")
    name = _required_name(svc)
    return SaveServiceRequest(_attr(svc, "businessKey"), _name_text(name), name.get(_LANG, ""),
                              _category(svc), svc.get("serviceKey", ""), root.get("generic"))


def _business_detail_from(root: ET.Element) -> BusinessDetail:
    entity = _child(root, "businessEntity")
    name = _required_name(entity)
    return BusinessDetail(root.get("operator", ""), _attr(entity, "businessKey"), _name_text(name),
                          name.get(_LANG, ""), root.get("generic"))


def _service_detail_from(root: ET.Element) -> ServiceDetail:
    svc = _child(root, "businessService")
    return ServiceDetail(root.get("operator", ""), _service_info_from(svc), root.get("generic"))


def _disposition_from(root: ET.Element) -> DispositionReport:
    info = _child(_child(root, "result"), "errInfo")
    code = _attr(info, "errCode")
    if code not in ERRNO:
        raise WireValidationError(f"unknown errCode {code!r}")
    return DispositionReport(code, _text(info), root.get("operator", ""), root.get("generic"))


_DECODERS = {
    "find_business": lambda r: _find_request(r, FindBusinessRequest),
    "find_service": lambda r: _find_request(r, FindServiceRequest),
    "businessList": _business_list_from,
    "save_business": _save_business_from,
    "save_service": _save_service_from,
    "delete_business": lambda r: DeleteBusinessRequest(_text(_child(r, "businessKey")), r.get("generic")),
    "delete_service": lambda r: DeleteServiceRequest(_text(_child(r, "serviceKey")), r.get("generic")),
    "businessDetail": _business_detail_from,
    "serviceDetail": _service_detail_from,
    "dispositionReport": _disposition_from,
}


def decode(data: bytes) -> Message:
    """Decode any known message, dispatching on the root element."""
    local, root = parse_root(data)
    try:
        decoder = _DECODERS[local]
    except KeyError:
        raise WireProtocolError(f"unknown message <{local}>") from None
    return decoder(root)


def _decoder_for(tag: str):
    def decode_one(data: bytes):
        return _DECODERS[tag](_expect(data, tag))
    decode_one.__name__ = f"decode_{tag}"
    return decode_one


decode_find_business = _decoder_for("find_business")
decode_find_service = _decoder_for("find_service")
decode_business_list = _decoder_for("businessList")
decode_save_business = _decoder_for("save_business")
decode_save_service = _decoder_for("save_service")
decode_delete_business = _decoder_for("delete_business")
decode_delete_service = _decoder_for("delete_service")
decode_business_detail = _decoder_for("businessDetail")
decode_service_detail = _decoder_for("serviceDetail")
decode_disposition_report = _decoder_for("dispositionReport")
