"""In-memory UDDI-lite registry store with publisher operations."""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

DEFAULT_CATEGORY = "uncategorized"


class RegistryError(Exception):
    pass


class ValidationError(RegistryError, ValueError):
    pass


class NotFoundError(RegistryError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "not found"


@dataclass
class BusinessEntity:
    business_key: str
    name: str
    lang: str = "en"
    services: set[str] = field(default_factory=set)


@dataclass
class ServiceEntry:
    service_key: str
    business_key: str
    name: str
    lang: str = "en"
    category: str = DEFAULT_CATEGORY


def _by_name(entity):
    return (entity.name, entity.business_key if isinstance(entity, BusinessEntity) else entity.service_key)


class RegistryStore:
    """Thread-safe store of businesses and their services.

    Every public method takes the store lock, so operations are atomic with
    respect to each other. Results are copies; mutating them does not touch
    the store.
    """

    def __init__(self, operator_id: str = "disco.local"):
        self.operator_id = operator_id
        self._businesses: dict[str, BusinessEntity] = {}
        self._services: dict[str, ServiceEntry] = {}
        # every key ever issued, so deleted keys are never handed out again
        self._issued: set[str] = set()
        self._lock = threading.RLock()

    def _new_key(self, key: str | None) -> str:
        if key is None:
            key = str(uuid.uuid4())
            while key in self._issued:
                key = str(uuid.uuid4())
        elif key in self._issued:
            raise ValidationError(f"key already used: {key}")
        self._issued.add(key)
        return key

    def save_business(self, name: str, lang: str = "en", *, key: str | None = None) -> str:
        """Create a business and return its key.

        ``key`` lets fixtures seed well-known keys; normally the store
        generates a fresh UUID.
        """
        if not name or not name.strip():
            raise ValidationError("business name must be non-empty")
        with self._lock:
            business_key = self._new_key(key)
            self._businesses[business_key] = BusinessEntity(business_key, name, lang)
            return business_key

    def save_service(
        self,
        business_key: str,
        name: str,
        lang: str = "en",
        category: str = DEFAULT_CATEGORY,
        *,
        key: str | None = None,
    ) -> str:
        if not name or not name.strip():
            raise ValidationError("service name must be non-empty")
        if not category:
            raise ValidationError("category must be non-empty")
        with self._lock:
            business = self._businesses.get(business_key)
            if business is None:
                raise NotFoundError(f"unknown business key: {business_key}")
            service_key = self._new_key(key)
            self._services[service_key] = ServiceEntry(service_key, business_key, name, lang, category)
            business.services.add(service_key)
            return service_key

    def update_service(self, service_key: str, new_name: str | None = None,
                       category: str | None = None) -> None:
        if new_name is not None and not new_name.strip():
            raise ValidationError("service name must be non-empty")
        if category is not None and not category:
            raise ValidationError("category must be non-empty")
        with self._lock:
            service = self._services.get(service_key)
            if service is None:
                raise NotFoundError(f"unknown service key: {service_key}")
            if new_name is not None:
                service.name = new_name
            if category is not None:
                service.category = category

    def update_business(self, business_key: str, new_name: str) -> None:
        if not new_name or not new_name.strip():
            raise ValidationError("business name must be non-empty")
        with self._lock:
            business = self._businesses.get(business_key)
            if business is None:
                raise NotFoundError(f"unknown business key: {business_key}")
            business.name = new_name

    def delete_service(self, service_key: str) -> None:
        with self._lock:
            service = self._services.pop(service_key, None)
            if service is None:
                raise NotFoundError(f"unknown service key: {service_key}")
            self._businesses[service.business_key].services.discard(service_key)

    def delete_business(self, business_key: str) -> None:
        with self._lock:
            business = self._businesses.pop(business_key, None)
            if business is None:
                raise NotFoundError(f"unknown business key: {business_key}")
            for service_key in business.services:
                del self._services[service_key]

    def get_business(self, business_key: str) -> BusinessEntity:
        with self._lock:
            business = self._businesses.get(business_key)
            if business is None:
                raise NotFoundError(f"unknown business key: {business_key}")
            return BusinessEntity(business.business_key, business.name, business.lang, set(business.services))

    def get_service(self, service_key: str) -> ServiceEntry:
        with self._lock:
            service = self._services.get(service_key)
            if service is None:
                raise NotFoundError(f"unknown service key: {service_key}")
            return _copy_service(service)

    def _services_of(self, business: BusinessEntity) -> list[ServiceEntry]:
        services = [_copy_service(self._services[k]) for k in business.services]
        services.sort(key=_by_name)
        return services

    def find_businesses(self, name_query: str) -> list[tuple[BusinessEntity, list[ServiceEntry]]]:
        """Businesses whose name contains ``name_query`` (case-insensitive).

        Each business comes with its full service list; ordering is by name,
        then key, for both businesses and services.
        """
        needle = name_query.casefold()
        with self._lock:
            matches = [b for b in self._businesses.values() if needle in b.name.casefold()]
            matches.sort(key=_by_name)
            return [
                (BusinessEntity(b.business_key, b.name, b.lang, set(b.services)), self._services_of(b))
                for b in matches
            ]

    def find_services(self, name_query: str, category: str | None = None) -> list[ServiceEntry]:
        needle = name_query.casefold()
        with self._lock:
            matches = [
                _copy_service(s) for s in self._services.values()
                if needle in s.name.casefold() and (category is None or s.category == category)
            ]
        matches.sort(key=_by_name)
        return matches

    def business_name(self, business_key: str) -> str:
        return self.get_business(business_key).name

    def snapshot(self) -> tuple[list[BusinessEntity], list[ServiceEntry]]:
        with self._lock:
            businesses = [BusinessEntity(b.business_key, b.name, b.lang, set(b.services))
                          for b in self._businesses.values()]
            services = [_copy_service(s) for s in self._services.values()]
        return businesses, services

    def __len__(self):
        with self._lock:
            return len(self._services)


def _copy_service(s: ServiceEntry) -> ServiceEntry:
    return ServiceEntry(s.service_key, s.business_key, s.name, s.lang, s.category)
