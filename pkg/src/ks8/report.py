"""Verification report for a KS set, as a dict (JSON) or as text."""

from __future__ import annotations

from collections import Counter
from typing import Any

from .seeker import SEED_PROFILE, KSSet, gammas
from .transformer import TransformError, enumerate_matchings
from .verifier import check_structure, has_parity_proof, is_colorable


def census_histogram(s: KSSet) -> dict[str, dict[str, int]]:
    """``{"rank1": {"2": 20, "4": 20}}``: distinct projectors per occurrence count, by rank."""
    hist: dict[int, Counter[int]] = {}
    for p, n in s.census.items():
        hist.setdefault(p.rank, Counter())[n] += 1
    return {f"rank{r}": {str(k): v for k, v in sorted(c.items())} for r, c in sorted(hist.items())}


def gamma_matching_counts(s: KSSet) -> list[dict[str, Any]] | None:
    """Rule-2 matching counts per pure basis, when ``s`` is a 20_2 20_4 seed."""
    if s.profile != SEED_PROFILE:
        return None
    try:
        out = []
        for step, g in enumerate(gammas(s), 1):
            cands = enumerate_matchings(s, g, step)
            out.append({
                "step": step,
                "pure_basis": g.pure_index,
                "gamma": list(g.gamma),
                "matchings": len(cands),
                "r3_compatible": sum(c.compatible for c in cands),
            })
        return out
    except (ValueError, TransformError):
        return None


def verification_report(s: KSSet) -> dict[str, Any]:
    structure = check_structure(s)
    parity = has_parity_proof(s)
    coloring = is_colorable(s) if structure.ok else None
    report: dict[str, Any] = {
        "structure_ok": structure.ok,
        "structure_errors": {str(k): v for k, v in sorted(structure.errors.items())},
        "parity_proof": parity.is_proof,
        "basis_count": len(s.bases),
        "profile": s.profile,
        "census_histogram": census_histogram(s),
        "colorable": coloring is not None if structure.ok else None,
        "witness": sorted(sorted(p.rays) for p in coloring.ones()) if coloring else None,
    }
    matchings = gamma_matching_counts(s)
    if matchings is not None:
        report["gamma_matchings"] = matchings
    return report


def is_ks_set(report: dict[str, Any]) -> bool:
    return bool(report["structure_ok"]) and report["colorable"] is False


def verdict(report: dict[str, Any]) -> str:
    if not report["structure_ok"]:
        return "structurally invalid"
    parts = ["parity proof" if report["parity_proof"] else "not a parity proof",
             "colorable" if report["colorable"] else "not colorable"]
    return "; ".join(parts)


def render_text(report: dict[str, Any]) -> str:
    lines = [
        f"bases:        {report['basis_count']}",
        f"profile:      {report['profile']}",
        f"structure:    {'ok' if report['structure_ok'] else 'FAILED'}",
    ]
    for basis, errs in report["structure_errors"].items():
        lines += [f"  basis {basis}: {e}" for e in errs]
    lines.append(f"parity proof: {'yes' if report['parity_proof'] else 'no'}")
    for rank, hist in report["census_histogram"].items():
        lines.append(f"  {rank}: " + ", ".join(f"{n} projectors x{k}" for k, n in hist.items()))
    if report["colorable"] is not None:
        lines.append(f"colorable:    {'yes' if report['colorable'] else 'no'}")
    if report["witness"]:
        lines.append("  witness (valued 1): " + " ".join(
            str(p[0]) if len(p) == 1 else f"({p[0]},{p[1]})" for p in report["witness"]))
    for m in report.get("gamma_matchings", []):
        lines.append(f"step {m['step']}: gamma {m['gamma']} -> {m['matchings']} rule-2 matchings, "
                     f"{m['r3_compatible']} admit rule 3")
    lines.append(f"verdict:      {verdict(report)}")
    return "\n".join(lines) + "\n"
