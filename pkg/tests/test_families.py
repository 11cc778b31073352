"""Tests for scan families and the async probe."""

import asyncio

import pytest

from pytoricoda import OdaProbe
from pytoricoda.families import FamilyError, Instance, evaluate_instance, parse_family_spec
from pytoricoda.families.hirzebruch import HirzebruchFamily
from pytoricoda.families.mapping import FAMILY_MAP
from pytoricoda.families.product import ProductFamily
from pytoricoda.families.projective import ProjectiveFamily
from pytoricoda.families.smooth_surface import blowup_closure
from pytoricoda.families.threefold import ThreefoldFamily
from pytoricoda.toric import is_nef, projective_space


def test_parse_family_spec():
    assert parse_family_spec("projective") == ("projective", {})
    assert parse_family_spec("hirzebruch:max_a=2") == ("hirzebruch", {"max_a": 2})
    assert parse_family_spec("product:first=1, second=2") == ("product", {"first": 1, "second": 2})
    with pytest.raises(FamilyError):
        parse_family_spec("hirzebruch:max_a")
    with pytest.raises(FamilyError) as info:
        parse_family_spec("hirzebruch:max_a=two")
    assert info.value.family == "hirzebruch"


def test_family_map():
    assert set(FAMILY_MAP) == {"projective", "product", "hirzebruch", "smooth-surface", "threefold"}
    for family_id, family in FAMILY_MAP.items():
        assert family.family_id == family_id


def test_projective_instances():
    family = ProjectiveFamily(max_coeff=2)
    assert family.bundles(projective_space(2)) == [(0, 0, 1), (0, 0, 2)]
    instances = family.instances()
    assert [(i.first, i.second) for i in instances] == [
        ((0, 0, 1), (0, 0, 1)),
        ((0, 0, 1), (0, 0, 2)),
        ((0, 0, 2), (0, 0, 2)),
    ]
    assert ProjectiveFamily(max_coeff=3, dim=1).fans() == [projective_space(1)]


def test_bundles_are_nef():
    family = HirzebruchFamily(max_coeff=2, max_a=2)
    for instance in family.instances():
        first, second = instance.bundles()
        assert is_nef(first) and is_nef(second)
        assert all(first.coeffs[i] == 0 for i in instance.fan.max_cones[0])


def test_limit_and_seed():
    everything = HirzebruchFamily(max_coeff=2, max_a=1).instances()
    sampled = HirzebruchFamily(max_coeff=2, max_a=1, limit=3, seed=5).instances()
    assert len(sampled) == 3
    assert all(i in everything for i in sampled)
    assert sampled == HirzebruchFamily(max_coeff=2, max_a=1, limit=3, seed=5).instances()
    assert len(HirzebruchFamily(max_coeff=1, max_a=0, limit=1000).instances()) == 6


def test_bad_parameters():
    with pytest.raises(FamilyError):
        ProjectiveFamily(degree=2)
    with pytest.raises(FamilyError):
        ProjectiveFamily(max_coeff=-1)
    with pytest.raises(FamilyError):
        ProjectiveFamily(limit=0)
    with pytest.raises(FamilyError):
        ProjectiveFamily(dim=4).fans()
    with pytest.raises(FamilyError):
        ProductFamily(first=2, second=2).fans()
    with pytest.raises(FamilyError):
        HirzebruchFamily(max_a=-1).fans()


def test_threefold_fans():
    fans = ThreefoldFamily().fans()
    assert [f.dim for f in fans] == [3, 3]
    assert [f.picard_number for f in fans] == [2, 2]


def test_blowup_closure():
    assert blowup_closure([projective_space(2)], 1) == [projective_space(2)]
    fans = blowup_closure([projective_space(2)], 2)
    assert len(fans) == 4
    assert fans[0] == projective_space(2)
    assert len({frozenset(f.rays) for f in fans}) == 4
    assert all(f.picard_number <= 3 for f in blowup_closure([projective_space(2)], 3))


def test_evaluate_instance(p2):
    record = evaluate_instance(Instance("projective", p2, (0, 0, 1), (0, 0, 1)))
    assert record.error is None
    assert record.payload["phi"]["dim_coker"] == 0
    assert record.payload["psi"]["covered"] is False
    assert record.descriptor["coeffs"] == [[0, 0, 1], [0, 0, 1]]
    assert "micros" in record.as_dict()
    assert "micros" not in record.as_dict(timing=False)
    assert "error" not in record.as_dict()


def test_evaluate_records_orders(p2):
    record = evaluate_instance(Instance("projective", p2, (0, 0, 1), (0, 0, 2)))
    assert record.error is None
    assert record.payload["orders"] == {"prec": True, "prec_o": True, "prec_c": False}
    assert record.payload["tensor_stability"] == {"before": False, "after": True, "stable": True}
    same = evaluate_instance(Instance("projective", p2, (0, 0, 1), (0, 0, 1))).as_dict()
    assert same["payload"]["orders"] == {"prec": True, "prec_o": True, "prec_c": True}
    assert same["payload"]["tensor_stability"]["stable"]


def test_evaluate_threefold_skips_psi(p1xp2):
    first = ThreefoldFamily(max_coeff=1).bundles(p1xp2)[0]
    record = evaluate_instance(Instance("threefold", p1xp2, first, first))
    assert record.error is None
    assert record.payload["psi"] is None
    assert record.payload["orders"] is None
    assert record.payload["tensor_stability"] is None


def test_probe_rejects_unknown_family():
    with pytest.raises(FamilyError):
        OdaProbe.create(enabled_families=["grassmannian"])
    with pytest.raises(FamilyError):
        OdaProbe.create(enabled_families=["projective"], jobs=0)


def test_probe_scan_sorted():
    probe = OdaProbe.create(enabled_families=["projective"], max_coeff=2, params={"projective": {"dim": 2}})
    seen = []
    records = asyncio.run(probe.scan(sort=True, on_record=seen.append))
    assert records == seen
    assert [r.descriptor["coeffs"] for r in records] == [
        [[0, 0, 1], [0, 0, 1]],
        [[0, 0, 1], [0, 0, 2]],
        [[0, 0, 2], [0, 0, 2]],
    ]
    assert all(r.error is None and r.family == "projective" for r in records)
