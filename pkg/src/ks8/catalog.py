"""The Kernaghan-Peres catalog: 40 rays in R^8 and the 25 bases they form.

Bases 1-5 are the pure bases (pairwise disjoint, together covering every
ray once); bases 6-25 are hybrids, each mixing four rays from two pure bases.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Literal, Mapping, Sequence

from .linalg import (
    DIM,
    CanonicalSubspace,
    Ray,
    canonical_subspace,
    canonicalize_ray,
    dot,
    echelon_rank,
    format_coords,
    parse_coords,
)

Kind = Literal["pure", "hybrid"]

N_RAYS = 40
N_PURE = 5

# One entry per ray, as printed; row 40 carries a leading -1 and is flipped on load.
_RAY_TEXT = """\
10000000
01000000
00100000
00010000
00001000
00000100
00000010
00000001
11110000
11--0000
1-1-0000
1--10000
00001111
000011--
00001-1-
00001--1
11001100
1100--00
1-001-00
1-00-100
00110011
001100--
001-001-
001-00-1
10101010
1010-0-0
10-010-0
10-0-010
01010101
01010-0-
010-010-
010-0-01
100101-0
100-0110
10010-10
100-0--0
0110-001
01-01001
0-101001
0--0-001
"""

_BASIS_TEXT = """\
1: 1 2 3 4 5 6 7 8
2: 9 10 11 12 13 14 15 16
3: 17 18 19 20 21 22 23 24
4: 25 26 27 28 29 30 31 32
5: 33 34 35 36 37 38 39 40
6: 1 2 3 4 13 14 15 16
7: 1 2 5 6 21 22 23 24
8: 1 3 5 7 29 30 31 32
9: 1 4 6 7 37 38 39 40
10: 2 3 5 8 33 34 35 36
11: 2 4 6 8 25 26 27 28
12: 3 4 7 8 17 18 19 20
13: 5 6 7 8 9 10 11 12
14: 9 10 13 14 19 20 23 24
15: 9 11 13 15 27 28 31 32
16: 9 12 14 15 34 36 38 39
17: 10 11 13 16 33 35 37 40
18: 10 12 14 16 25 26 29 30
19: 11 12 15 16 17 18 21 22
20: 17 19 21 23 26 28 30 32
21: 17 20 22 23 35 36 37 39
22: 18 19 21 24 33 34 38 40
23: 18 20 22 24 25 27 29 31
24: 25 28 30 31 33 36 37 38
25: 26 27 29 32 34 35 39 40
"""


class CatalogError(ValueError):
    pass


def parse_rays(text: str) -> list[Ray]:
    """Parse the ray-list format: one 8-character ray per line, numbered from 1.

    Blank lines and ``#`` comments are skipped. Rays are stored sign-canonical.
    """
    rays = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rays.append(canonicalize_ray(parse_coords(line), index=len(rays) + 1))
    return rays


def dump_rays(rays: Sequence[Ray]) -> str:
    return "".join(format_coords(r.coords) + "\n" for r in rays)


@lru_cache(maxsize=None)
def _kp_rays() -> tuple[Ray, ...]:
    return tuple(parse_rays(_RAY_TEXT))


def kp_rays() -> list[Ray]:
    """The 40 Kernaghan-Peres rays, ``kp_rays()[i - 1].index == i``."""
    return list(_kp_rays())


def ray_lookup(rays: Iterable[Ray] | None = None) -> dict[int, Ray]:
    return {r.index: r for r in (_kp_rays() if rays is None else rays)}


@dataclass(frozen=True, eq=False)
class Projector:
    """A rank-1 or rank-2 projector named by the catalog rays spanning it.

    ``rays`` keeps the order it was built with (display only); identity is
    the spanned subspace.
    """

    rays: tuple[int, ...]
    subspace: CanonicalSubspace = field(repr=False)

    @property
    def rank(self) -> int:
        return self.subspace.dim

    @property
    def ray_set(self) -> frozenset[int]:
        return frozenset(self.rays)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Projector):
            return NotImplemented
        return self.subspace == other.subspace

    def __hash__(self) -> int:
        return hash(self.subspace)

    def label(self) -> str:
        if len(self.rays) == 1:
            return str(self.rays[0])
        return "(" + ", ".join(map(str, self.rays)) + ")"


@lru_cache(maxsize=4096)
def _kp_projector(ids: tuple[int, ...]) -> Projector:
    lookup = ray_lookup()
    try:
        vecs = [lookup[i] for i in ids]
    except KeyError as exc:
        raise CatalogError(f"unknown ray index {exc.args[0]}") from None
    return Projector(ids, canonical_subspace(vecs))


def projector(*ids: int, rays: Mapping[int, Ray] | None = None) -> Projector:
    """Projector onto the span of the given catalog rays (1 or 2 of them)."""
    ids = tuple(int(i) for i in ids)
    if rays is None:
        return _kp_projector(ids)
    try:
        vecs = [rays[i] for i in ids]
    except KeyError as exc:
        raise CatalogError(f"unknown ray index {exc.args[0]}") from None
    return Projector(ids, canonical_subspace(vecs))


def default_kind(index: int) -> Kind:
    return "pure" if index <= N_PURE else "hybrid"


@dataclass(frozen=True)
class Basis:
    index: int
    kind: Kind
    projectors: tuple[Projector, ...]

    @property
    def ray_set(self) -> frozenset[int]:
        return frozenset(r for p in self.projectors for r in p.rays)

    @property
    def rays(self) -> list[int]:
        return [r for p in self.projectors for r in p.rays]

    @property
    def total_rank(self) -> int:
        return sum(p.rank for p in self.projectors)

    @classmethod
    def of_rays(cls, index: int, ray_ids: Iterable[int], kind: Kind | None = None) -> "Basis":
        return cls(index, kind or default_kind(index), tuple(projector(r) for r in ray_ids))

    def label(self) -> str:
        return f"{self.index}: " + " ".join(p.label() for p in self.projectors)


_TOKEN = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)|(\d+)")


def parse_bases(text: str, rays: Mapping[int, Ray] | None = None) -> list[Basis]:
    """Parse the basis-list format ``index: r1 r2 ... r8``.

    A token may also be a parenthesised pair ``(a,b)`` naming a rank-2
    projector, so transformed sets can be written in the same format.
    """
    bases = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep or not head.strip().isdigit():
            raise CatalogError(f"line {lineno}: expected 'index: r1 r2 ...', got {line!r}")
        index = int(head)
        projs = []
        pos = 0
        body = body.strip()
        while pos < len(body):
            m = _TOKEN.match(body, pos)
            if m is None:
                raise CatalogError(f"line {lineno}: cannot parse {body[pos:]!r}")
            ids = (m.group(1), m.group(2)) if m.group(3) is None else (m.group(3),)
            projs.append(projector(*map(int, ids), rays=rays))
            pos = m.end()
            while pos < len(body) and body[pos] in " \t,":
                pos += 1
        bases.append(Basis(index, default_kind(index), tuple(projs)))
    return bases


def dump_bases(bases: Sequence[Basis]) -> str:
    lines = []
    for b in bases:
        toks = [str(p.rays[0]) if p.rank == 1 else f"({p.rays[0]},{p.rays[1]})" for p in b.projectors]
        lines.append(f"{b.index}: " + " ".join(toks))
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def _kp_bases() -> tuple[Basis, ...]:
    return tuple(parse_bases(_BASIS_TEXT))


def kp_bases() -> list[Basis]:
    """The 25 catalog bases, every projector rank-1."""
    return list(_kp_bases())


def basis_by_index() -> dict[int, Basis]:
    return {b.index: b for b in _kp_bases()}


@dataclass
class CatalogReport:
    errors: list[str]
    counts: dict[int, tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_if_invalid(self) -> None:
        if self.errors:
            raise CatalogError("catalog validation failed:\n  " + "\n  ".join(self.errors))


def validate_catalog(rays: Sequence[Ray] | None = None, bases: Sequence[Basis] | None = None) -> CatalogReport:
    """Check orthogonality and completeness of every basis and the (1, 4) occurrence split.

    ``counts`` maps each ray to its number of occurrences among the pure and
    among the hybrid bases.
    """
    lookup = ray_lookup(rays)
    bases = _kp_bases() if bases is None else bases
    errors: list[str] = []
    for b in bases:
        ids = b.rays
        missing = [i for i in ids if i not in lookup]
        if missing:
            errors.append(f"basis {b.index}: unknown rays {missing}")
            continue
        if len(set(ids)) != len(ids):
            errors.append(f"basis {b.index}: repeated rays {sorted(i for i, n in Counter(ids).items() if n > 1)}")
        for x, y in combinations(sorted(set(ids)), 2):
            if dot(lookup[x], lookup[y]) != 0:
                errors.append(f"basis {b.index}: rays {x} and {y} not orthogonal")
        rank = echelon_rank([lookup[i].coords for i in ids])
        if rank != DIM:
            errors.append(f"basis {b.index}: incomplete, spans dimension {rank} of {DIM}")

    pure = Counter(r for b in bases if b.kind == "pure" for r in b.ray_set)
    hybrid = Counter(r for b in bases if b.kind == "hybrid" for r in b.ray_set)
    counts = {i: (pure[i], hybrid[i]) for i in sorted(lookup)}
    for i, (np_, nh) in counts.items():
        if (np_, nh) != (1, 4):
            errors.append(f"ray {i}: occurs {np_}x in pure and {nh}x in hybrid bases, expected 1x and 4x")
    return CatalogReport(errors, counts)


def require_valid_catalog() -> None:
    validate_catalog().raise_if_invalid()
