"""JSON forms of KS sets and of the catalog."""

from __future__ import annotations

import json
from typing import Any, Sequence

from .catalog import Basis, Ray, default_kind, kp_bases, kp_rays, projector
from .linalg import canonicalize_ray, format_coords, parse_coords
from .seeker import KSSet
from .verifier import has_parity_proof


def ksset_to_dict(s: KSSet, *, normalize: bool = False) -> dict[str, Any]:
    """``{"bases": [...], "profile": str, "parity_proof": bool}``.

    ``normalize`` sorts rays inside each projector, projectors inside each
    basis and bases by index, so sets built in different orders compare
    equal as text.
    """
    bases = []
    for b in sorted(s.bases, key=lambda b: b.index) if normalize else s.bases:
        projs = [list(p.rays) for p in b.projectors]
        if normalize:
            projs = sorted(sorted(p) for p in projs)
        bases.append({"index": b.index, "kind": b.kind, "projectors": projs})
    return {"bases": bases, "profile": s.profile, "parity_proof": has_parity_proof(s).is_proof}


def ksset_from_dict(d: dict[str, Any]) -> KSSet:
    try:
        bases = []
        for entry in d["bases"]:
            index = int(entry["index"])
            kind = entry.get("kind", default_kind(index))
            if kind not in ("pure", "hybrid"):
                raise ValueError(f"basis {index}: unknown kind {kind!r}")
            projs = tuple(projector(*p) for p in entry["projectors"])
            bases.append(Basis(index, kind, projs))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed KS set record: {exc!r}") from None
    return KSSet(tuple(bases))


def dumps_ksset(s: KSSet, *, normalize: bool = False, compact: bool = False) -> str:
    d = ksset_to_dict(s, normalize=normalize)
    if compact:
        return json.dumps(d, separators=(",", ":"))
    return json.dumps(d, indent=2) + "\n"


def loads_ksset(text: str) -> KSSet:
    return ksset_from_dict(json.loads(text))


def catalog_to_dict(rays: Sequence[Ray] | None = None, bases: Sequence[Basis] | None = None) -> dict[str, Any]:
    rays = kp_rays() if rays is None else rays
    bases = kp_bases() if bases is None else bases
    return {
        "rays": [{"index": r.index, "coords": format_coords(r.coords)} for r in rays],
        "bases": [{"index": b.index, "kind": b.kind, "rays": b.rays} for b in bases],
    }


def catalog_from_dict(d: dict[str, Any]) -> tuple[list[Ray], list[Basis]]:
    rays = [canonicalize_ray(parse_coords(r["coords"]), index=int(r["index"])) for r in d["rays"]]
    lookup = {r.index: r for r in rays}
    bases = [
        Basis(int(b["index"]), b["kind"], tuple(projector(i, rays=lookup) for i in b["rays"]))
        for b in d["bases"]
    ]
    return rays, bases
