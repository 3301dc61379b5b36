"""Independent checks on KS sets: structure, parity proof, noncontextual colorability."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, NamedTuple

from .catalog import Projector, Ray, ray_lookup
from .linalg import DIM, dot
from .seeker import KSSet


@dataclass
class StructureReport:
    errors: dict[int, list[str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, basis: int, msg: str) -> None:
        self.errors.setdefault(basis, []).append(msg)


def check_structure(s: KSSet, rays: Mapping[int, Ray] | None = None) -> StructureReport:
    """Per basis: distinct underlying rays, pairwise orthogonal projectors, ranks summing to 8."""
    lookup = ray_lookup(rays.values()) if rays is not None else ray_lookup()
    report = StructureReport()
    for b in s.bases:
        ids = b.rays
        dup = sorted(r for r, n in Counter(ids).items() if n > 1)
        if dup:
            report.add(b.index, f"rays {dup} used by more than one projector")
        for p, q in combinations(b.projectors, 2):
            bad = [(x, y) for x in p.rays for y in q.rays if x != y and dot(lookup[x], lookup[y]) != 0]
            if bad:
                report.add(b.index, f"projectors {p.label()} and {q.label()} not orthogonal")
        if b.total_rank != DIM:
            report.add(b.index, f"incomplete: ranks sum to {b.total_rank}, expected {DIM}")
    return report


class ParityResult(NamedTuple):
    is_proof: bool
    census: Counter[Projector]


def has_parity_proof(s: KSSet) -> ParityResult:
    """Odd number of bases and every distinct projector occurring an even number of times."""
    census = Counter(p for b in s.bases for p in b.projectors)
    ok = len(s.bases) % 2 == 1 and all(n % 2 == 0 for n in census.values())
    return ParityResult(ok, census)


@dataclass(frozen=True)
class Coloring:
    assignment: dict[Projector, int]

    def ones(self) -> list[Projector]:
        return [p for p, v in self.assignment.items() if v]


def coloring_is_valid(s: KSSet, coloring: Coloring) -> bool:
    """Replay a coloring: exactly one projector valued 1 in every basis."""
    for b in s.bases:
        if sum(coloring.assignment[p] for p in b.projectors) != 1:
            return False
    return True


def is_colorable(s: KSSet) -> Coloring | None:
    """Search for a 0/1 assignment with exactly one 1 per basis.

    Exact cover by backtracking over bitmasks: always branch on the
    uncovered basis with the fewest still-admissible projectors; choosing a
    projector zeroes every other projector in each basis it covers.
    Returns a witness, or None when no assignment exists.
    """
    projs = list(dict.fromkeys(p for b in s.bases for p in b.projectors))
    pid = {p: i for i, p in enumerate(projs)}
    basis_projs = [0] * len(s.bases)
    covers = [0] * len(projs)
    for k, b in enumerate(s.bases):
        for p in b.projectors:
            basis_projs[k] |= 1 << pid[p]
            covers[pid[p]] |= 1 << k
    # projectors that become inadmissible once projector i is valued 1
    blocked = []
    for i in range(len(projs)):
        m = 0
        c = covers[i]
        while c:
            low = c & -c
            m |= basis_projs[low.bit_length() - 1]
            c ^= low
        blocked.append(m)

    chosen: list[int] = []

    def solve(uncovered: int, admissible: int) -> bool:
        if not uncovered:
            return True
        best, best_n = -1, None
        u = uncovered
        while u:
            low = u & -u
            k = low.bit_length() - 1
            n = (basis_projs[k] & admissible).bit_count()
            if best_n is None or n < best_n:
                best, best_n = k, n
                if n <= 1:
                    break
            u ^= low
        options = basis_projs[best] & admissible
        while options:
            low = options & -options
            i = low.bit_length() - 1
            options ^= low
            chosen.append(i)
            if solve(uncovered & ~covers[i], admissible & ~blocked[i]):
                return True
            chosen.pop()
        return False

    all_bases = (1 << len(s.bases)) - 1
    if not solve(all_bases, (1 << len(projs)) - 1):
        return None
    ones = set(chosen)
    return Coloring({p: int(i in ones) for i, p in enumerate(projs)})
