"""Command-line entry point: ``ks8 <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on invalid
input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, TextIO

from .catalog import CatalogError, dump_bases, dump_rays, kp_bases, kp_rays, parse_bases, validate_catalog
from .linalg import Ray, dot
from .report import is_ks_set, render_text, verification_report
from .seeker import KSSet, default_workers, find_seed_sets, gammas, seed_by_number, seed_from_bases
from .serialize import catalog_to_dict, dumps_ksset, ksset_from_dict, ksset_to_dict
from .transformer import (
    StepChoice,
    TransformError,
    default_choices,
    enumerate_matchings,
    enumerate_transforms,
    transform,
    transform_census,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

COMMANDS = ("rays", "bases", "seek", "transform", "enumerate", "verify", "export")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed_number: int | None = None
    seed_bases: list[int] | None = None
    choice_spec: str | None = None
    skip_pattern: set[int] = field(default_factory=set)
    output_format: str = "text"
    worker_count: int = 1
    path: str | None = None
    what: str = "graph"
    allow_unapplied: bool = False
    allow_step1_skip: bool = False
    list_matchings: bool = False


_STEP_RE = re.compile(r"step:(\d+);match:([^;]*);r3:(yes|no)")


def parse_choice_spec(text: str) -> list[tuple[int, list[tuple[int, int]], bool]]:
    """Parse ``step:i;match:g1>p1,...;r3:yes|no`` groups (separated by whitespace or ``|``)."""
    groups = [g for g in re.split(r"[\s|]+", text.strip()) if g]
    out = []
    for g in groups:
        m = _STEP_RE.fullmatch(g.rstrip(";"))
        if m is None:
            raise UsageError(f"malformed choice spec {g!r}: expected 'step:i;match:g>p,...;r3:yes|no'")
        pairs = []
        for item in m.group(2).split(","):
            a, sep, b = item.partition(">")
            if not sep or not a.strip().isdigit() or not b.strip().isdigit():
                raise UsageError(f"malformed matching entry {item!r} in {g!r}")
            pairs.append((int(a), int(b)))
        out.append((int(m.group(1)), pairs, m.group(3) == "yes"))
    steps = [s for s, _, _ in out]
    if sorted(steps) != list(range(1, len(steps) + 1)) or len(steps) != 5:
        raise UsageError(f"choice spec must name steps 1..5 once each, got {steps}")
    return out


def resolve_choices(seed: KSSet, spec: str, skip: set[int]) -> list[StepChoice]:
    parsed = parse_choice_spec(spec)
    gs = gammas(seed)
    choices = []
    for step, pairs, r3 in sorted(parsed):
        if skip and r3 == (step in skip):
            raise UsageError(f"step {step}: choice spec says r3:{'yes' if r3 else 'no'} "
                             f"but the skip pattern {sorted(skip)} disagrees")
        wanted = set(pairs)
        cand = next((c for c in enumerate_matchings(seed, gs[step - 1], step) if set(c.matching) == wanted), None)
        if cand is None:
            raise UsageError(f"step {step}: {spec_pairs(pairs)} is not a valid rule-2 matching")
        if r3 and not cand.compatible:
            raise UsageError(f"step {step}: rule 3 is not applicable to matching {spec_pairs(pairs)}")
        choices.append(cand if r3 else cand.without_r3())
    return choices


def spec_pairs(pairs: Sequence[tuple[int, int]]) -> str:
    return ",".join(f"{a}>{b}" for a, b in pairs)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in re.split(r"[,\s]+", text.strip()) if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def orthogonality_dot(rays: Sequence[Ray]) -> str:
    """Orthogonality graph of the rays in Graphviz DOT; nodes are catalog indices."""
    lines = ["graph orthogonality {"]
    lines += [f"  {r.index};" for r in rays]
    for a, b in combinations(rays, 2):
        if dot(a, b) == 0:
            lines.append(f"  {a.index} -- {b.index};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _select_seed(cfg: RunConfig) -> KSSet:
    if cfg.seed_bases is not None:
        try:
            seed = seed_from_bases(cfg.seed_bases)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return seed
    try:
        return seed_by_number(cfg.seed_number or 1)
    except ValueError as exc:
        raise UsageError(f"unknown seed: {exc}") from None


def _text_set(s: KSSet) -> str:
    return "".join(b.label() + "\n" for b in s.bases)


def _cmd_rays(cfg: RunConfig, out: TextIO) -> int:
    if cfg.output_format == "json":
        out.write(json.dumps(catalog_to_dict()["rays"], indent=2) + "\n")
    else:
        out.write(dump_rays(kp_rays()))
    return EXIT_OK


def _cmd_bases(cfg: RunConfig, out: TextIO) -> int:
    if cfg.output_format == "json":
        out.write(json.dumps(catalog_to_dict()["bases"], indent=2) + "\n")
    else:
        out.write(dump_bases(kp_bases()))
    return EXIT_OK


def _cmd_seek(cfg: RunConfig, out: TextIO) -> int:
    seeds = find_seed_sets(workers=cfg.worker_count)
    if cfg.output_format == "json":
        out.write(json.dumps([ksset_to_dict(s) for s in seeds], indent=2) + "\n")
    elif cfg.output_format == "jsonl":
        for s in seeds:
            out.write(dumps_ksset(s, compact=True) + "\n")
    else:
        for n, s in enumerate(seeds, 1):
            out.write(f"{n:2d}: {' '.join(map(str, s.basis_indices))}  [{s.profile}]\n")
    return EXIT_OK


def _cmd_transform(cfg: RunConfig, out: TextIO) -> int:
    seed = _select_seed(cfg)
    if cfg.list_matchings:
        for step, g in enumerate(gammas(seed), 1):
            out.write(f"step {step}: pure basis {g.pure_index}, gamma {list(g.gamma)}\n")
            for c in enumerate_matchings(seed, g, step):
                pairs = " ".join(f"({a}, {b})" for a, b in c.matching)
                r3 = f"rule 3 -> {c.r3_pairs}" if c.compatible else "rule 3 fails"
                out.write(f"  {pairs}   {r3}\n")
        return EXIT_OK
    if cfg.choice_spec:
        choices = resolve_choices(seed, cfg.choice_spec, cfg.skip_pattern)
    else:
        choices = default_choices(seed, cfg.skip_pattern)
    result = transform(seed, choices)
    if cfg.output_format == "json":
        out.write(dumps_ksset(result))
    else:
        out.write(_text_set(result))
        out.write(f"profile: {result.profile}\n")
        for c in choices:
            out.write(c.spec() + "\n")
    return EXIT_OK


def _cmd_enumerate(cfg: RunConfig, out: TextIO) -> int:
    seed = _select_seed(cfg)
    stream = enumerate_transforms(seed, cfg.skip_pattern, allow_unapplied=cfg.allow_unapplied,
                                  allow_step1_skip=cfg.allow_step1_skip, workers=cfg.worker_count)

    def tee():
        for r in stream:
            if cfg.output_format == "jsonl":
                rec = ksset_to_dict(r.kset)
                rec["choices"] = [c.spec() for c in r.choices]
                out.write(json.dumps(rec, separators=(",", ":")) + "\n")
            elif cfg.output_format == "text":
                out.write(" | ".join(c.spec() for c in r.choices) + "\n")
            yield r

    census = transform_census(tee(), len(cfg.skip_pattern))
    summary = (f"N_r3_skipped={census.n_r3_skipped} N_KS={census.n_ks} "
               f"N_2={census.n_rank2} N_1={census.n_rank1}")
    if cfg.output_format == "json":
        out.write(json.dumps({"n_r3_skipped": census.n_r3_skipped, "n_ks": census.n_ks,
                              "n_rank2": census.n_rank2, "n_rank1": census.n_rank1}) + "\n")
    elif cfg.output_format == "text":
        out.write(summary + "\n")
    else:
        print(summary, file=sys.stderr)
    return EXIT_OK


def _load_set(path: str) -> KSSet:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    stripped = text.lstrip()
    try:
        if stripped.startswith("{"):
            return ksset_from_dict(json.loads(text))
        return KSSet(tuple(parse_bases(text)))
    except (ValueError, CatalogError) as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from None


def _cmd_verify(cfg: RunConfig, out: TextIO) -> int:
    s = _load_set(cfg.path or "-")
    report = verification_report(s)
    if cfg.output_format == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(render_text(report))
    return EXIT_OK if is_ks_set(report) else EXIT_FAIL


def _cmd_export(cfg: RunConfig, out: TextIO) -> int:
    if cfg.what == "catalog":
        out.write(json.dumps(catalog_to_dict(), indent=2) + "\n")
    else:
        out.write(orthogonality_dot(kp_rays()))
    return EXIT_OK


_HANDLERS = {
    "rays": _cmd_rays,
    "bases": _cmd_bases,
    "seek": _cmd_seek,
    "transform": _cmd_transform,
    "enumerate": _cmd_enumerate,
    "verify": _cmd_verify,
    "export": _cmd_export,
}


def run(cfg: RunConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    report = validate_catalog()
    if not report.ok:
        err.write("catalog validation failed:\n" + "\n".join(report.errors) + "\n")
        return EXIT_FAIL
    try:
        return _HANDLERS[cfg.command](cfg, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except TransformError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ks8", description="Kochen-Specker sets in the three-qubit system")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p: argparse.ArgumentParser, choices: Sequence[str], default: str) -> None:
        p.add_argument("--format", choices=choices, default=default, dest="output_format")
        p.add_argument("--json", action="store_const", const="json", dest="output_format",
                       help="shorthand for --format json")

    def seed_args(p: argparse.ArgumentParser) -> None:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--seed", type=int, dest="seed_number", help="seed number 1..64 (default 1)")
        g.add_argument("--seed-bases", type=_int_list, help="comma-separated catalog basis indices")
        p.add_argument("--skip", type=_int_list, default=[], dest="skip_pattern",
                       help="steps (2..5) where rule 3 is not applied")
        p.add_argument("--allow-step1-skip", action="store_true", help="allow step 1 in the skip pattern")

    def workers(p: argparse.ArgumentParser) -> None:
        p.add_argument("--workers", type=int, default=None, dest="worker_count",
                       help="worker processes (default: $KS8_WORKERS or 1)")

    fmt(sub.add_parser("rays", help="list the 40 catalog rays"), ("text", "json"), "text")
    fmt(sub.add_parser("bases", help="list the 25 catalog bases"), ("text", "json"), "text")

    p = sub.add_parser("seek", help="find the 15-basis parity-proof seeds")
    fmt(p, ("text", "json", "jsonl"), "text")
    workers(p)

    p = sub.add_parser("transform", help="transform one seed into a rank-2 / mixed-rank KS set")
    seed_args(p)
    p.add_argument("--choices", dest="choice_spec", help="step:i;match:g>p,...;r3:yes|no, five groups")
    p.add_argument("--list-matchings", action="store_true", help="list rule-2 matchings per step")
    fmt(p, ("text", "json"), "text")

    p = sub.add_parser("enumerate", help="enumerate all transforms of a seed for a skip pattern")
    seed_args(p)
    p.add_argument("--allow-unapplied", action="store_true",
                   help="on skipped steps also use rule-3-compatible matchings left unapplied")
    fmt(p, ("text", "json", "jsonl"), "text")
    workers(p)

    p = sub.add_parser("verify", help="verify a KS set file (JSON or basis list; '-' for stdin)")
    p.add_argument("path")
    fmt(p, ("text", "json"), "text")

    p = sub.add_parser("export", help="export the orthogonality graph (DOT) or the catalog (JSON)")
    p.add_argument("--what", choices=("graph", "catalog"), default="graph")
    fmt(p, ("dot", "json"), "dot")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    workers = getattr(ns, "worker_count", None)
    if workers is None:
        workers = default_workers()
    if workers < 1:
        raise UsageError("--workers must be a positive integer")
    skip = set(getattr(ns, "skip_pattern", []) or [])
    allow1 = getattr(ns, "allow_step1_skip", False)
    if not skip <= set(range(1 if allow1 else 2, 6)):
        raise UsageError(f"skip pattern {sorted(skip)} must be a subset of steps "
                         f"{'1' if allow1 else '2'}..5")
    return RunConfig(
        command=ns.command,
        seed_number=getattr(ns, "seed_number", None),
        seed_bases=getattr(ns, "seed_bases", None),
        choice_spec=getattr(ns, "choice_spec", None),
        skip_pattern=skip,
        output_format=ns.output_format,
        worker_count=workers,
        path=getattr(ns, "path", None),
        what=getattr(ns, "what", "graph"),
        allow_unapplied=getattr(ns, "allow_unapplied", False),
        allow_step1_skip=allow1,
        list_matchings=getattr(ns, "list_matchings", False),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.command == "export" and cfg.what == "catalog" and cfg.output_format == "dot":
        cfg.output_format = "json"
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
