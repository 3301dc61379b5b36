import dataclasses

import pytest

from ks8.catalog import (
    Basis,
    CatalogError,
    dump_bases,
    dump_rays,
    kp_bases,
    kp_rays,
    parse_bases,
    parse_rays,
    projector,
    validate_catalog,
)

from .conftest import GOLDEN

# Table 1 exactly as printed, '-' for a barred 1; row 40 has a leading -1.
TABLE1 = """\
10000000 01000000 00100000 00010000 00001000 00000100 00000010 00000001
11110000 11--0000 1-1-0000 1--10000 00001111 000011-- 00001-1- 00001--1
11001100 1100--00 1-001-00 1-00-100 00110011 001100-- 001-001- 001-00-1
10101010 1010-0-0 10-010-0 10-0-010 01010101 01010-0- 010-010- 010-0-01
100101-0 100-0110 10010-10 100-0--0 0110-001 01-01001 0-101001 0--0-001
""".split()


def test_ray_examples():
    rays = kp_rays()
    assert len(rays) == 40
    assert [r.index for r in rays] == list(range(1, 41))
    assert rays[16].coords == (1, 1, 0, 0, 1, 1, 0, 0)
    assert rays[35].coords == (1, 0, 0, -1, 0, -1, -1, 0)
    assert rays[0].coords == (1, 0, 0, 0, 0, 0, 0, 0)


def test_rays_match_table1_up_to_sign():
    for ray, text in zip(kp_rays(), TABLE1):
        printed = tuple({"1": 1, "0": 0, "-": -1}[c] for c in text)
        lead = next(c for c in printed if c)
        assert ray.coords == (printed if lead == 1 else tuple(-c for c in printed))
    assert kp_rays()[39].coords == (0, 1, 1, 0, 1, 0, 0, -1)


def test_basis_examples():
    bases = {b.index: b for b in kp_bases()}
    assert len(bases) == 25
    assert bases[13].ray_set == {5, 6, 7, 8, 9, 10, 11, 12}
    assert bases[1].ray_set == set(range(1, 9))
    assert bases[25].ray_set == {26, 27, 29, 32, 34, 35, 39, 40}
    assert [b.kind for b in kp_bases()] == ["pure"] * 5 + ["hybrid"] * 20
    assert all(p.rank == 1 for b in kp_bases() for p in b.projectors)


def test_full_catalog_validates():
    report = validate_catalog()
    assert report.ok, report.errors
    assert set(report.counts.values()) == {(1, 4)}
    assert len(report.counts) == 40


def test_pure_bases_partition_rays():
    pures = [b.ray_set for b in kp_bases()[:5]]
    assert sum(len(p) for p in pures) == 40
    assert set().union(*pures) == set(range(1, 41))


def test_negated_ray_still_valid():
    lines = dump_rays(kp_rays()).splitlines()
    lines[16] = lines[16].replace("1", "+").replace("-", "1").replace("+", "-")
    assert lines[16] == "--00--00"
    rays = parse_rays("\n".join(lines))
    assert validate_catalog(rays=rays).ok


def test_missing_ray_reports_completeness_failure():
    bases = kp_bases()
    b3 = bases[2]
    bases[2] = Basis(3, "pure", tuple(p for p in b3.projectors if p.rays != (24,)))
    report = validate_catalog(bases=bases)
    assert not report.ok
    assert any("basis 3: incomplete" in e for e in report.errors)
    with pytest.raises(CatalogError):
        report.raise_if_invalid()


def test_non_orthogonal_basis_reported():
    bases = kp_bases()
    bases[5] = Basis.of_rays(6, [1, 2, 3, 4, 13, 14, 15, 9])
    report = validate_catalog(bases=bases)
    assert any("basis 6: rays" in e and "not orthogonal" in e for e in report.errors)


def test_ray_text_round_trip():
    text = dump_rays(kp_rays())
    assert parse_rays(text) == kp_rays()
    assert dump_rays(parse_rays(text)) == text
    assert text == (GOLDEN / "rays.txt").read_text()


def test_parse_rays_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rays("1000000\n")
    with pytest.raises(ValueError):
        parse_rays("1000000x\n")


def test_basis_text_round_trip():
    text = dump_bases(kp_bases())
    assert parse_bases(text) == kp_bases()
    assert text == (GOLDEN / "bases.txt").read_text()
    assert text.splitlines()[12] == "13: 5 6 7 8 9 10 11 12"


def test_parse_bases_with_pairs():
    (b,) = parse_bases("6: (1,2) (3, 4) 13 16 14 15")
    assert [p.rank for p in b.projectors] == [2, 2, 1, 1, 1, 1]
    assert b.total_rank == 8 and b.kind == "hybrid"
    with pytest.raises(CatalogError):
        parse_bases("six: 1 2 3")
    with pytest.raises(CatalogError):
        parse_bases("6: 1 2 99")


def test_projector_identity_is_subspace():
    assert projector(1, 7) == projector(7, 1)
    assert projector(1, 7) != projector(1, 8)
    assert projector(1) != projector(1, 7)
    assert projector(1, 7).rank == 2
    p = projector(1, 7)
    with pytest.raises(dataclasses.FrozenInstanceError):
        p.rays = (1,)
