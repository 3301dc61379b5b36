"""Search the 25 catalog bases for 15-basis parity-proof subsets (the 64 seeds)."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .catalog import N_RAYS, Basis, Projector, basis_by_index, kp_bases

SEED_SIZE = 15
SEED_PROFILE = "20_2 20_4 - 15_8"


@dataclass(frozen=True)
class KSSet:
    """An ordered collection of bases; census and profile are derived on demand."""

    bases: tuple[Basis, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bases", tuple(self.bases))

    @cached_property
    def census(self) -> Counter[Projector]:
        return Counter(p for b in self.bases for p in b.projectors)

    @property
    def profile(self) -> str:
        return classify_profile(self)

    @property
    def pure_count(self) -> int:
        return sum(b.kind == "pure" for b in self.bases)

    @property
    def hybrid_count(self) -> int:
        return sum(b.kind == "hybrid" for b in self.bases)

    @property
    def basis_indices(self) -> tuple[int, ...]:
        return tuple(b.index for b in self.bases)

    def ray_counts(self) -> Counter[int]:
        return Counter(r for b in self.bases for r in b.ray_set)

    def basis(self, index: int) -> Basis:
        for b in self.bases:
            if b.index == index:
                return b
        raise KeyError(index)

    def key(self) -> tuple:
        """Order-insensitive identity: which projectors sit in which basis."""
        return tuple(sorted((b.index, frozenset(p.subspace for p in b.projectors)) for b in self.bases))


def _groups(counts: Iterable[int]) -> str:
    hist = Counter(counts)
    return " ".join(f"{n}_{k}" for k, n in sorted(hist.items()))


def classify_profile(s: KSSet) -> str:
    """Occurrence profile, e.g. ``"20_2 20_4 - 15_8"``.

    The left side groups distinct projectors by how often they occur, the
    right side groups bases by how many projectors they hold. When rank-1
    and rank-2 projectors are mixed the two ranks are reported separately
    as ``r2[...] r1[...]``.
    """
    by_rank: dict[int, list[int]] = {}
    for p, n in s.census.items():
        by_rank.setdefault(p.rank, []).append(n)
    bases = _groups(len(b.projectors) for b in s.bases)
    if len(by_rank) <= 1:
        left = _groups(next(iter(by_rank.values()), []))
    else:
        left = " ".join(f"r{rank}[{_groups(by_rank[rank])}]" for rank in sorted(by_rank, reverse=True))
    return f"{left} - {bases}"


def _mask(b: Basis) -> int:
    return sum(1 << (r - 1) for r in b.ray_set)


def _search_from(first: int, masks: Sequence[int], size: int) -> list[tuple[int, ...]]:
    """All size-subsets whose smallest member is ``first`` and whose ray masks XOR to zero."""
    n = len(masks)
    suffix = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] | masks[k]
    found: list[tuple[int, ...]] = []
    chosen = [first]

    def rec(k: int, parity: int) -> None:
        need = size - len(chosen)
        if need == 0:
            if parity == 0:
                found.append(tuple(chosen))
            return
        if n - k < need or parity & ~suffix[k]:
            return
        # include k
        chosen.append(k)
        rec(k + 1, parity ^ masks[k])
        chosen.pop()
        # skip k
        rec(k + 1, parity)

    rec(first + 1, masks[first])
    return found


def _search_worker(args: tuple[int, tuple[int, ...], int]) -> list[tuple[int, ...]]:
    return _search_from(*args)


def even_subsets(candidates: Sequence[Basis], size: int, workers: int = 1) -> list[tuple[int, ...]]:
    """Positions (into ``candidates``) of every ``size``-subset with all ray counts even."""
    masks = tuple(_mask(b) for b in candidates)
    firsts = range(max(0, len(masks) - size + 1)) if size else []
    jobs = [(f, masks, size) for f in firsts]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_search_worker, jobs))
    else:
        parts = [_search_worker(j) for j in jobs]
    return sorted(t for part in parts for t in part)


def find_seed_sets(
    candidates: Sequence[Basis] | None = None,
    size: int = SEED_SIZE,
    workers: int = 1,
) -> list[KSSet]:
    """Every ``size``-subset of the bases in which each ray occurs an even number of times.

    With the default arguments this is the full catalog search; each result
    is then checked to have 5 pure and 10 hybrid bases, all 40 rays, and
    profile 20_2 20_4 - 15_8.
    """
    full = candidates is None and size == SEED_SIZE
    if full and workers == 1:
        return list(_full_seed_search())
    bases = kp_bases() if candidates is None else list(candidates)
    hits = even_subsets(bases, size, workers)
    sets = [KSSet(tuple(bases[i] for i in hit)) for hit in hits]
    if full:
        for s in sets:
            _check_seed_shape(s)
    return sets


@lru_cache(maxsize=1)
def _full_seed_search() -> tuple[KSSet, ...]:
    bases = kp_bases()
    sets = tuple(KSSet(tuple(bases[i] for i in hit)) for hit in even_subsets(bases, SEED_SIZE))
    for s in sets:
        _check_seed_shape(s)
    return sets


def _check_seed_shape(s: KSSet) -> None:
    if (s.pure_count, s.hybrid_count) != (5, 10):
        raise AssertionError(f"seed {s.basis_indices}: {s.pure_count} pure / {s.hybrid_count} hybrid bases")
    if len(s.ray_counts()) != N_RAYS:
        raise AssertionError(f"seed {s.basis_indices}: uses {len(s.ray_counts())} rays")
    if s.profile != SEED_PROFILE:
        raise AssertionError(f"seed {s.basis_indices}: profile {s.profile}")


def seed_sets() -> list[KSSet]:
    """The 64 seeds, cached, in lexicographic order of basis indices."""
    return list(_full_seed_search())


def seed_by_number(n: int) -> KSSet:
    seeds = _full_seed_search()
    if not 1 <= n <= len(seeds):
        raise ValueError(f"seed number must be in 1..{len(seeds)}, got {n}")
    return seeds[n - 1]


def seed_from_bases(indices: Iterable[int]) -> KSSet:
    """Build a rank-1 set from catalog basis indices (kept in ascending order)."""
    lookup = basis_by_index()
    idx = sorted(set(indices))
    unknown = [i for i in idx if i not in lookup]
    if unknown:
        raise ValueError(f"unknown basis indices {unknown}")
    return KSSet(tuple(lookup[i] for i in idx))


@dataclass(frozen=True)
class GammaSet:
    """Rays of one pure basis split by their occurrence count in a seed (4 vs 2)."""

    pure_index: int
    gamma: tuple[int, ...]
    not_gamma: tuple[int, ...]


def gammas(seed: KSSet) -> list[GammaSet]:
    counts = seed.ray_counts()
    if any(p.rank != 1 for b in seed.bases for p in b.projectors):
        raise ValueError("gamma sets are defined for rank-1 seeds only")
    pures = [b for b in seed.bases if b.kind == "pure"]
    if len(pures) != 5:
        raise ValueError(f"seed has {len(pures)} pure bases, expected 5")
    out = []
    for b in pures:
        rays = sorted(b.ray_set)
        gamma = tuple(r for r in rays if counts[r] == 4)
        rest = tuple(r for r in rays if counts[r] == 2)
        if len(gamma) != 4 or len(rest) != 4:
            raise ValueError(
                f"pure basis {b.index} does not split 4/4 into rays occurring 4x and 2x "
                f"(counts {[counts[r] for r in rays]})"
            )
        out.append(GammaSet(b.index, gamma, rest))
    return out


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("KS8_WORKERS", "1")))
    except ValueError:
        return 1
