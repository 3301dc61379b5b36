from collections import Counter
from itertools import combinations

import pytest

from ks8.catalog import kp_bases
from ks8.seeker import (
    KSSet,
    classify_profile,
    even_subsets,
    find_seed_sets,
    gammas,
    seed_by_number,
    seed_from_bases,
    seed_sets,
)
from ks8.verifier import has_parity_proof

from .conftest import TABLE3_BASES


@pytest.fixture(scope="module")
def brute_force_seeds():
    """Plain enumeration of all C(25,15) subsets, no pruning."""
    bases = kp_bases()
    # one bit per ray; even counts everywhere <=> XOR of the masks is zero
    masks = [sum(1 << r for r in b.ray_set) for b in bases]
    hits = []
    for combo in combinations(range(25), 15):
        acc = 0
        for i in combo:
            acc ^= masks[i]
        if acc == 0:
            hits.append(tuple(bases[i].index for i in combo))
    return hits


def test_brute_force_oracle_finds_64(brute_force_seeds):
    assert len(brute_force_seeds) == 64


def test_seed_search_matches_oracle(brute_force_seeds):
    assert [s.basis_indices for s in find_seed_sets()] == brute_force_seeds


def test_seed_shape():
    seeds = find_seed_sets()
    assert len(seeds) == 64
    for s in seeds:
        assert (s.pure_count, s.hybrid_count) == (5, 10)
        assert len(s.ray_counts()) == 40
        assert s.profile == "20_2 20_4 - 15_8"
    assert seeds == sorted(seeds, key=lambda s: s.basis_indices)


def test_table3_seed_present():
    assert TABLE3_BASES in [s.basis_indices for s in seed_sets()]
    assert seed_by_number(1).basis_indices == TABLE3_BASES


def test_pure_bases_only_give_nothing():
    pures = kp_bases()[:5]
    assert find_seed_sets(candidates=pures) == []
    assert find_seed_sets(candidates=pures, size=5) == []


@pytest.mark.parametrize("workers", [2, 3])
def test_worker_count_does_not_change_result(workers):
    serial = [s.basis_indices for s in find_seed_sets()]
    parallel = [s.basis_indices for s in find_seed_sets(workers=workers)]
    assert parallel == serial


def test_traversal_order_independent():
    rev = list(reversed(kp_bases()))
    hits = even_subsets(rev, 15)
    found = sorted(tuple(sorted(rev[i].index for i in h)) for h in hits)
    assert found == [s.basis_indices for s in seed_sets()]


def test_every_seed_is_parity_proof():
    for s in seed_sets():
        assert has_parity_proof(s).is_proof


def test_profiles():
    assert classify_profile(KSSet(tuple(kp_bases()[:1]))) == "8_1 - 1_8"
    assert seed_by_number(1).profile == "20_2 20_4 - 15_8"


def test_census_derivable(table3_seed):
    assert table3_seed.census == Counter(p for b in table3_seed.bases for p in b.projectors)
    assert sorted(Counter(table3_seed.census.values()).items()) == [(2, 20), (4, 20)]


def test_table3_gammas(table3_seed):
    gs = {g.pure_index: g for g in gammas(table3_seed)}
    assert gs[1].gamma == (1, 2, 3, 5) and gs[1].not_gamma == (4, 6, 7, 8)
    assert gs[2].gamma == (9, 13, 14, 15)
    assert gs[3].gamma == (19, 21, 23, 24)
    assert gs[4].gamma == (28, 30, 31, 32)
    assert gs[5].gamma == (33, 34, 36, 38)


def test_gamma_rays_in_three_hybrids_of_every_seed():
    for s in seed_sets():
        hybrids = [b for b in s.bases if b.kind == "hybrid"]
        for g in gammas(s):
            assert len(g.gamma) == 4
            for r in g.gamma:
                assert sum(r in b.ray_set for b in hybrids) == 3


def test_gammas_reject_bad_split():
    with pytest.raises(ValueError):
        gammas(KSSet(tuple(kp_bases())))


def test_seed_selectors_reject_unknown():
    with pytest.raises(ValueError):
        seed_by_number(65)
    with pytest.raises(ValueError):
        seed_from_bases([1, 26])
