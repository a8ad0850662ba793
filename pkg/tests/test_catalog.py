import pytest

from bsdlab import catalog
from bsdlab.curves import ap_bruteforce, cm_detect, derive_invariants
from bsdlab.errors import NotFoundError

# Trace fingerprints at the first good primes, transcribed from standard
# published tables for these labels; they pin down the coefficient tuples.
KNOWN_TRACES = {
    "11a3": {2: -2, 3: -1, 5: 1, 7: -2},
    "37a1": {2: -2, 3: -3, 5: -2, 7: -1},
}

KNOWN_DISCRIMINANTS = {
    "11a3": -11,
    "37a1": 37,
    "389a1": 389,
    "5077a1": 5077,
}


def test_listing():
    assert catalog.labels() == ["11a3", "37a1", "389a1", "5077a1",
                                "cm-j1728", "cm-j0"]


def test_lookup_37a1():
    entry = catalog.lookup("37a1")
    assert entry.coefficients == (0, 0, 1, -1, 0)
    assert entry.known_rank == 1


def test_rank_ladder():
    ranks = [catalog.rank_for_label(lb) for lb in ("11a3", "37a1", "389a1",
                                                   "5077a1")]
    assert ranks == [0, 1, 2, 3]


def test_cm_entries():
    e1728 = catalog.lookup("cm-j1728")
    assert e1728.cm.is_cm and e1728.cm.cm_discriminant == -4
    cls = cm_detect(e1728.curve())
    assert cls == e1728.cm
    e0 = catalog.lookup("cm-j0")
    assert e0.cm.cm_discriminant == -3


def test_unknown_label():
    with pytest.raises(NotFoundError):
        catalog.lookup("nosuchcurve")
    assert isinstance(NotFoundError("x"), KeyError)


def test_self_check():
    catalog.self_check()


def test_discriminants():
    for label, disc in KNOWN_DISCRIMINANTS.items():
        curve = catalog.curve_for(label)
        assert curve.disc == disc, label


def test_published_trace_fingerprints():
    for label, traces in KNOWN_TRACES.items():
        curve = catalog.curve_for(label)
        for p, a_p in traces.items():
            got = ap_bruteforce(curve, p)
            print(f"catalog cross-check {label}: a_{p} = {got} (expected {a_p})")
            assert got == a_p


def test_every_entry_derives_cleanly():
    for label in catalog.labels():
        entry = catalog.lookup(label)
        curve = derive_invariants(*entry.coefficients, label=label)
        assert curve.disc != 0
        assert cm_detect(curve) == entry.cm
