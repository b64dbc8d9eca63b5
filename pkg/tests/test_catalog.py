import numpy as np
import pytest

from bogomolov import catalog
from bogomolov.errors import Unsupported
from bogomolov.perm import center, conjugacy_classes, derived_subgroup, is_abelian


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13])
def test_field_axioms(q):
    F = catalog.GF(q)
    a = np.arange(q)
    assert np.array_equal(F.add[0], a) and np.array_equal(F.mul[1], a)
    for x in range(q):
        for y in range(q):
            for z in range(q):
                assert F.mul[x, F.mul[y, z]] == F.mul[F.mul[x, y], z]
                assert F.mul[x, F.add[y, z]] == F.add[F.mul[x, y], F.mul[x, z]]
    for x in range(1, q):
        assert F.mul[x, F.inv[x]] == 1
    w, k, order = F.primitive, F.primitive, 1
    while k != 1:
        k = int(F.mul[k, w])
        order += 1
    assert order == q - 1


def test_unsupported_fields():
    for q in (6, 16, 25):
        with pytest.raises(Unsupported):
            catalog.GF(q)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13])
def test_matrix_group_orders(q):
    from math import gcd

    assert catalog.psl2(q).order() == q * (q * q - 1) // gcd(2, q - 1)
    assert catalog.sl2(q).order() == q * (q * q - 1)
    assert catalog.pgl2(q).order() == q * (q * q - 1)
    assert len(catalog.psl2(q).generators) <= 3


def test_psl3_4():
    G = catalog.psl3_4()
    assert G.order() == 20160 and G.degree == 21
    assert len(G.generators) == 2


@pytest.mark.parametrize("name,order", [
    ("A5", 60), ("S6", 720), ("PSL(2,7)", 168), ("SL(2,5)", 120), ("PGL(2,9)", 720), ("D4", 8),
    ("Q8", 8), ("C12", 12), ("E(2,3)", 8), ("PSL(3,4)", 20160), ("C4xC2", 8), ("V4", 4), ("C2xA5", 120),
])
def test_names(name, order):
    G = catalog.named(name)
    assert G.order() == order
    assert G.name == name


def test_dihedral_and_quaternion_are_distinct():
    D4, Q8 = catalog.named("D4"), catalog.named("Q8")
    inv = lambda G: sum(1 for c in conjugacy_classes(G) if c.representative.order() == 2 for _ in range(c.size))
    assert inv(D4) == 5 and inv(Q8) == 1


@pytest.mark.parametrize("bad", ["A10", "PSL(2,16)", "Foo", "PSL(3,5)", "C0", "E(4,2)"])
def test_bad_names(bad):
    with pytest.raises(Unsupported):
        catalog.named(bad)


def test_spec_roundtrip():
    spec = catalog.parse_name("C4xC2")
    assert spec.constructor == "direct_product"
    assert spec.to_json()["params"][0] == {"constructor": "cyclic", "params": [4]}
    assert catalog.build(spec).order() == 8


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13])
def test_outdiag_type_a1_matches_construction(q):
    d = catalog.LieOutDescriptor("A", 1, q)
    assert d.outdiag() == catalog.outdiag_from_construction(q)


def test_outdiag_formulas_and_notes():
    orders, notes = catalog.LieOutDescriptor("A", 3, 5).outdiag_orders()
    assert orders == [4] and any("corrected" in n for n in notes)
    orders, notes = catalog.LieOutDescriptor("2A", 2, 7).outdiag_orders()
    assert orders == [3] and any("no construction" in n for n in notes)
    assert catalog.LieOutDescriptor("D", 4, 3).outdiag_orders()[0] == [2, 2]
    assert catalog.LieOutDescriptor("D", 5, 5).outdiag_orders()[0] == [4]
    assert catalog.LieOutDescriptor("E6", 6, 4).outdiag_orders()[0] == [3]
    assert catalog.LieOutDescriptor("E7", 7, 3).outdiag_orders()[0] == [2]
    assert catalog.LieOutDescriptor("E8", 8, 4).outdiag_orders()[0] == []
    assert catalog.LieOutDescriptor("2B2", 2, 8).outdiag_orders()[0] == []


def test_descriptor_validation_and_json():
    d = catalog.LieOutDescriptor("D", 4, 9)
    assert catalog.LieOutDescriptor.from_json(d.to_json()) == d
    for bad in [("D", 3, 5), ("E8", 7, 2), ("A", 2, 6), ("2B2", 2, 4), ("X", 1, 2)]:
        with pytest.raises(Unsupported):
            catalog.LieOutDescriptor(*bad)


def test_out_group_shapes():
    G = catalog.out_group(catalog.descriptor("D4q3"))  # S4
    assert G.order() == 24 and center(G).order() == 1 and derived_subgroup(G).order() == 12
    G = catalog.out_group(catalog.descriptor("D4q9"))  # S4 x Z2
    assert G.order() == 48 and center(G).order() == 2
    G = catalog.out_group(catalog.descriptor("A3q5"))  # dihedral of order 8
    assert G.order() == 8 and not is_abelian(G)
    assert sum(c.size for c in conjugacy_classes(G) if c.representative.order() == 2) == 5
    G = catalog.out_group(catalog.descriptor("B2q4"))  # Z4
    assert G.order() == 4 and max(g.order() for g in G.generators) == 4
    G = catalog.out_group(catalog.descriptor("A1q9"))  # Z2 x Z2
    assert G.order() == 4 and is_abelian(G) and all(g.order() <= 2 for g in G.generators)
    for name, order in [("E7q3", 2), ("G2q3", 2), ("E8q4", 2)]:
        assert catalog.out_group(catalog.descriptor(name)).order() == order


def test_lemma_cases_cover_the_split():
    tags = set()
    for name in ["A1q9", "E8q4", "B2q4", "D4q3", "A3q5"]:
        tags.update(catalog.lemma_cases(name))
    assert {"abelian Out", "trivial O", "cyclic Phi Gamma", "D even rank, odd q", "inverting Gamma"} <= tags


def test_almost_simple_checks():
    v = catalog.verify_almost_simple(catalog.named("S5"))
    assert v.verified and v.socle_order == 60 and v.multiplier.consistent
    v = catalog.verify_almost_simple(catalog.named("C2xA5"))
    assert not v.centralizer_trivial and not v.verified
