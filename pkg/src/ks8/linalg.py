"""Exact integer linear algebra for 8-component rays and the planes they span."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

DIM = 8

Coords = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Ray:
    """A sign-canonical {-1, 0, +1} vector, optionally tagged with its catalog index."""

    coords: Coords
    index: int | None = field(default=None)

    def __post_init__(self) -> None:
        if len(self.coords) != DIM:
            raise ValueError(f"ray needs {DIM} coordinates, got {len(self.coords)}")
        if any(c not in (-1, 0, 1) for c in self.coords):
            raise ValueError(f"ray entries must be -1, 0 or 1: {self.coords}")
        lead = next((c for c in self.coords if c), 0)
        if lead == 0:
            raise ValueError("zero vector is not a ray")
        if lead != 1:
            raise ValueError(f"ray is not sign-canonical: {self.coords}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ray):
            return NotImplemented
        if self.index is not None and other.index is not None:
            return self.index == other.index
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        tag = f"R{self.index}" if self.index is not None else "Ray"
        return f"{tag}({format_coords(self.coords)})"


def format_coords(coords: Sequence[int]) -> str:
    """Render coordinates in the compact 8-character form, '-' standing for -1."""
    return "".join({1: "1", 0: "0", -1: "-"}[c] for c in coords)


def parse_coords(text: str) -> Coords:
    text = text.strip()
    if len(text) != DIM or any(ch not in "01-" for ch in text):
        raise ValueError(f"malformed ray {text!r}: expected {DIM} characters from '0', '1', '-'")
    return tuple({"1": 1, "0": 0, "-": -1}[ch] for ch in text)


def dot(a: Ray | Sequence[int], b: Ray | Sequence[int]) -> int:
    ca = a.coords if isinstance(a, Ray) else a
    cb = b.coords if isinstance(b, Ray) else b
    return sum(x * y for x, y in zip(ca, cb, strict=True))


def canonicalize_ray(v: Iterable[int], index: int | None = None) -> Ray:
    """Return the ray for ``v`` or ``-v``, whichever has a leading +1."""
    coords = tuple(int(c) for c in v)
    lead = next((c for c in coords if c), 0)
    if lead == 0:
        raise ValueError("zero vector is not a ray")
    if lead < 0:
        coords = tuple(-c for c in coords)
    return Ray(coords, index)


@dataclass(frozen=True)
class CanonicalSubspace:
    """Reduced row echelon basis, each row scaled to integers with content 1.

    Pivot entries are positive, so two spans are equal exactly when their
    ``basis_rows`` are equal.
    """

    dim: int
    basis_rows: tuple[Coords, ...]


def _integer_row(row: Sequence[Fraction]) -> Coords:
    denom = reduce(lcm, (x.denominator for x in row), 1)
    ints = [int(x * denom) for x in row]
    content = reduce(gcd, ints, 0)
    return tuple(x // content for x in ints)


def echelon_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals of a small integer matrix."""
    return len(_rref([list(map(Fraction, r)) for r in rows]))


def _rref(m: list[list[Fraction]]) -> list[list[Fraction]]:
    if not m:
        return []
    n_rows, n_cols = len(m), len(m[0])
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        pick = next((r for r in range(piv_r, n_rows) if m[r][piv_c] != 0), None)
        if pick is None:
            continue
        m[piv_r], m[pick] = m[pick], m[piv_r]
        p = m[piv_r][piv_c]
        m[piv_r] = [x / p for x in m[piv_r]]
        for r in range(n_rows):
            if r != piv_r and m[r][piv_c] != 0:
                f = m[r][piv_c]
                m[r] = [x - f * y for x, y in zip(m[r], m[piv_r])]
        piv_r += 1
    return m[:piv_r]


def canonical_subspace(rays: Sequence[Ray | Sequence[int]]) -> CanonicalSubspace:
    """Canonical form of the span of one ray or of two orthogonal rays."""
    vecs = [r.coords if isinstance(r, Ray) else tuple(r) for r in rays]
    if len(vecs) not in (1, 2):
        raise ValueError(f"projector needs 1 or 2 rays, got {len(vecs)}")
    reduced = _rref([list(map(Fraction, v)) for v in vecs])
    if len(reduced) != len(vecs):
        raise ValueError("rays are linearly dependent")
    if len(vecs) == 2 and dot(vecs[0], vecs[1]) != 0:
        raise ValueError(f"rays {vecs[0]} and {vecs[1]} are not orthogonal")
    return CanonicalSubspace(len(reduced), tuple(_integer_row(r) for r in reduced))


def recanonicalize(sub: CanonicalSubspace) -> CanonicalSubspace:
    """Run an existing canonical form back through the reduction (idempotence check)."""
    reduced = _rref([list(map(Fraction, v)) for v in sub.basis_rows])
    return CanonicalSubspace(len(reduced), tuple(_integer_row(r) for r in reduced))
