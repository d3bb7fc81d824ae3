import re
import threading

import pytest
from hypothesis import given, strategies as st
from hypothesis.stateful import RuleBasedStateMachine, invariant, precondition, rule

from disco.registry import NotFoundError, RegistryStore, ValidationError
from disco.testing import oracle_find_businesses

UUID4 = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}$")


def test_save_business_roundtrip():
    store = RegistryStore()
    key = store.save_business("Microsoft DRMS Dev", "en")
    assert UUID4.match(key)
    assert store.get_business(key).name == "Microsoft DRMS Dev"


@pytest.mark.parametrize("name", ["", "   "])
def test_save_business_rejects_empty_name(name):
    with pytest.raises(ValidationError):
        RegistryStore().save_business(name, "en")


def test_same_name_gets_distinct_keys():
    store = RegistryStore()
    a = store.save_business("Acme", "en")
    b = store.save_business("Acme", "en")
    assert a != b
    assert [e.business_key for e, _ in store.find_businesses("Acme")] == sorted([a, b])


def test_save_service_links_under_business(drms):
    k = drms.save_business("Other", "en")
    s = drms.save_service(k, "Certification", "en", "uncategorized")
    assert s in drms.get_business(k).services
    assert drms.get_service(s).business_key == k


def test_save_service_unknown_business():
    with pytest.raises(NotFoundError):
        RegistryStore().save_service("no-such-key", "X", "en", "c")


def test_find_businesses_drms(drms):
    [(business, services)] = drms.find_businesses("Microsoft")
    assert business.name == "Microsoft DRMS Dev"
    assert [s.name for s in services] == ["Certification", "Machine Activation", "Server Enrollment"]


def test_find_businesses_case_insensitive(drms):
    assert drms.find_businesses("microsoft") == drms.find_businesses("MICROSOFT") == drms.find_businesses("Microsoft")
    assert drms.find_businesses("zzz-no-such") == []


def test_find_services_with_category(drms):
    assert [s.name for s in drms.find_services("Activation")] == ["Machine Activation"]
    assert [s.name for s in drms.find_services("Activation", "uncategorized")] == ["Machine Activation"]
    assert drms.find_services("Activation", "images") == []


def test_update_and_delete(drms):
    [s] = drms.find_services("Certification")
    drms.update_service(s.service_key, "Certification v2")
    assert drms.get_service(s.service_key).name == "Certification v2"
    drms.delete_service(s.service_key)
    with pytest.raises(NotFoundError):
        drms.delete_service(s.service_key)


def test_delete_business_cascades(drms):
    [(b, _)] = drms.find_businesses("Microsoft")
    drms.delete_business(b.business_key)
    for name in ("Certification", "Machine Activation", "Server Enrollment"):
        assert drms.find_services(name) == []
    assert len(drms) == 0


def test_seeded_key_cannot_be_reused():
    store = RegistryStore()
    store.save_business("A", key="k1")
    store.delete_business("k1")
    with pytest.raises(ValidationError):
        store.save_business("B", key="k1")


names = st.text(alphabet="abcAB xyz", min_size=1, max_size=8).filter(str.strip)


@given(st.lists(names, max_size=25), st.lists(st.text(alphabet="abcABxyz ", max_size=4), max_size=10))
def test_find_businesses_matches_brute_force(business_names, queries):
    store = RegistryStore()
    for n in business_names:
        store.save_business(n)
    everything, _ = store.snapshot()
    for q in queries:
        got = [b.business_key for b, _ in store.find_businesses(q)]
        assert got == [b.business_key for b in oracle_find_businesses(everything, q)]


class RegistryMachine(RuleBasedStateMachine):
    """Random save/update/delete sequences keep referential integrity."""

    def __init__(self):
        super().__init__()
        self.store = RegistryStore()
        self.issued: list[str] = []

    @rule(name=names)
    def save_business(self, name):
        self.issued.append(self.store.save_business(name))

    @precondition(lambda self: self.store.snapshot()[0])
    @rule(data=st.data(), name=names)
    def save_service(self, data, name):
        businesses, _ = self.store.snapshot()
        b = data.draw(st.sampled_from([x.business_key for x in businesses]))
        self.issued.append(self.store.save_service(b, name))

    @precondition(lambda self: len(self.store))
    @rule(data=st.data(), name=names)
    def update_service(self, data, name):
        _, services = self.store.snapshot()
        s = data.draw(st.sampled_from([x.service_key for x in services]))
        self.store.update_service(s, name)

    @precondition(lambda self: len(self.store))
    @rule(data=st.data())
    def delete_service(self, data):
        _, services = self.store.snapshot()
        self.store.delete_service(data.draw(st.sampled_from([x.service_key for x in services])))

    @precondition(lambda self: self.store.snapshot()[0])
    @rule(data=st.data())
    def delete_business(self, data):
        businesses, _ = self.store.snapshot()
        self.store.delete_business(data.draw(st.sampled_from([x.business_key for x in businesses])))

    @invariant()
    def integrity(self):
        businesses, services = self.store.snapshot()
        by_key = {b.business_key: b for b in businesses}
        for s in services:
            assert s.business_key in by_key
            assert s.service_key in by_key[s.business_key].services
        assert sum(len(b.services) for b in businesses) == len(services)

    @invariant()
    def keys_never_reused(self):
        assert len(self.issued) == len(set(self.issued))


TestRegistryMachine = RegistryMachine.TestCase


def test_concurrent_writers_keep_integrity():
    store = RegistryStore()
    root = store.save_business("root")

    def worker(i):
        for j in range(50):
            k = store.save_service(root, f"s{i}-{j}")
            if j % 3 == 0:
                store.delete_service(k)

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    businesses, services = store.snapshot()
    assert len(services) == 8 * (50 - 17)
    assert businesses[0].services == {s.service_key for s in services}
