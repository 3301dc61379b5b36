import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from ks8.catalog import Basis, kp_bases, projector
from ks8.seeker import KSSet, seed_sets
from ks8.verifier import (
    Coloring,
    check_structure,
    coloring_is_valid,
    has_parity_proof,
    is_colorable,
)

CATALOG = KSSet(tuple(kp_bases()))


def brute_force_colorable(s: KSSet) -> bool:
    """Try every 0/1 vector over the distinct projectors."""
    projs = list(dict.fromkeys(p for b in s.bases for p in b.projectors))
    for bits in itertools.product((0, 1), repeat=len(projs)):
        val = dict(zip(projs, bits))
        if all(sum(val[p] for p in b.projectors) == 1 for b in s.bases):
            return True
    return False


def test_structure_ok_on_catalog_and_seeds():
    assert check_structure(CATALOG).ok
    for s in seed_sets():
        assert check_structure(s).ok


def test_structure_ray_reuse():
    b = Basis(6, "hybrid", (projector(1, 2), projector(2, 3), projector(4), projector(13),
                            projector(14), projector(15), projector(16)))
    report = check_structure(KSSet((b,)))
    assert not report.ok
    assert any("more than one projector" in e for e in report.errors[6])


def test_structure_incomplete():
    b = Basis(1, "pure", (projector(1, 2), projector(3, 4), projector(5, 6)))
    report = check_structure(KSSet((b,)))
    assert any("ranks sum to 6" in e for e in report.errors[1])


def test_structure_non_orthogonal():
    b = Basis(1, "pure", tuple(projector(i) for i in (1, 2, 3, 4, 5, 6, 7, 9)))
    report = check_structure(KSSet((b,)))
    assert any("not orthogonal" in e for e in report.errors[1])


def test_parity_examples(table3_seed):
    ok, census = has_parity_proof(table3_seed)
    assert ok and sorted(set(census.values())) == [2, 4]
    assert not has_parity_proof(KSSet(tuple(kp_bases()[:1]))).is_proof


def test_dropping_a_basis_breaks_parity():
    for s in seed_sets()[:8]:
        for k in range(len(s.bases)):
            assert not has_parity_proof(KSSet(s.bases[:k] + s.bases[k + 1:])).is_proof


def test_single_basis_colorable():
    c = is_colorable(KSSet(tuple(kp_bases()[:1])))
    assert c is not None
    assert [p.rays for p in c.ones()] == [(1,)]


def test_catalog_not_colorable():
    assert is_colorable(CATALOG) is None


def test_seeds_not_colorable():
    for s in seed_sets():
        assert is_colorable(s) is None


def test_mixed_rank_census_keeps_ranks_apart():
    b1 = Basis(1, "pure", (projector(1, 7), projector(2), projector(8), projector(3, 4), projector(5, 6)))
    b2 = Basis(6, "hybrid", (projector(1), projector(2), projector(3), projector(4), projector(13),
                             projector(14), projector(15), projector(16)))
    census = has_parity_proof(KSSet((b1, b2))).census
    assert census[projector(2)] == 2
    assert census[projector(1)] == 1 and census[projector(1, 7)] == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=24), min_size=1, max_size=6, unique=True))
def test_backtracking_agrees_with_brute_force(idx):
    bases = kp_bases()
    s = KSSet(tuple(bases[i] for i in sorted(idx)))
    n_proj = len(s.census)
    if n_proj > 18:
        # keep the exhaustive oracle cheap: restrict to the first few projectors' bases
        s = KSSet(s.bases[:2])
    witness = is_colorable(s)
    assert (witness is not None) == brute_force_colorable(s)
    if witness is not None:
        assert coloring_is_valid(s, witness)


def test_witness_replay_on_random_subsets():
    rng = random.Random(7)
    bases = kp_bases()
    for _ in range(200):
        chosen = rng.sample(bases, rng.randint(1, 12))
        s = KSSet(tuple(chosen))
        w = is_colorable(s)
        if w is not None:
            assert coloring_is_valid(s, w)
            assert set(w.assignment.values()) <= {0, 1}


def test_invalid_coloring_detected():
    s = KSSet(tuple(kp_bases()[:1]))
    bad = Coloring({p: 1 for p in s.census})
    assert not coloring_is_valid(s, bad)
