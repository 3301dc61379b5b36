"""Turn a 20_2 20_4 - 15_8 seed into KS sets built from rank-2 (or mixed-rank) projectors.

Each of the five steps works on one pure basis PB_i and its gamma set (the
four rays of PB_i occurring four times in the seed):

* rule 1 picks the four hybrid bases that hold three gamma rays each;
* rule 2 pairs every gamma ray with a distinct non-gamma ray of PB_i; each
  pair goes into PB_i and into the one selected hybrid basis holding both;
* rule 3 pairs the gamma rays left over in the selected hybrid bases, which
  only works when those leftovers collapse into two pairs seen twice each.

Rays not absorbed by rule 3 stay behind as rank-1 projectors.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

from .catalog import Basis, Projector, projector
from .linalg import DIM
from .seeker import GammaSet, KSSet, gammas

Pair = tuple[int, int]


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class SelectedBasis:
    """A hybrid basis picked by rule 1 for one gamma set."""

    index: int
    gamma_subset: frozenset[int]
    partner: int  # the single non-gamma ray of PB_i it contains


def rule1_select_hbs(seed: KSSet, g: GammaSet) -> list[SelectedBasis]:
    gamma, rest = set(g.gamma), set(g.not_gamma)
    picked = []
    for b in seed.bases:
        if b.kind != "hybrid":
            continue
        inter = b.ray_set & gamma
        if not inter:
            continue
        others = b.ray_set & rest
        if len(inter) != 3 or len(others) != 1:
            raise TransformError(
                f"hybrid basis {b.index} holds {len(inter)} gamma and {len(others)} non-gamma rays "
                f"of pure basis {g.pure_index}; expected 3 and 1"
            )
        picked.append(SelectedBasis(b.index, frozenset(inter), next(iter(others))))
    subsets = {s.gamma_subset for s in picked}
    if len(picked) != 4 or len(subsets) != 4:
        raise TransformError(
            f"gamma set {g.gamma} of pure basis {g.pure_index}: hybrid bases "
            f"{[s.index for s in picked]} do not realise the four 3-subsets"
        )
    if len({s.partner for s in picked}) != 4:
        raise TransformError(f"pure basis {g.pure_index}: non-gamma rays not spread over the selected bases")
    return picked


@dataclass(frozen=True)
class StepChoice:
    """The rule-2 matching chosen at one step and whether rule 3 is applied.

    ``matching`` lists (gamma ray, partner) in gamma order. ``compatible``
    records whether the matching admits rule 3 at all; ``r3_pairs`` holds
    the two gamma-gamma pairs when rule 3 is applied.
    """

    step_index: int
    matching: tuple[Pair, ...]
    apply_r3: bool
    r3_pairs: tuple[Pair, ...] | None
    compatible: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if self.apply_r3 != (self.r3_pairs is not None):
            raise TransformError("r3_pairs must be given exactly when rule 3 is applied")

    def without_r3(self) -> "StepChoice":
        return StepChoice(self.step_index, self.matching, False, None, self.compatible)

    def spec(self) -> str:
        match = ",".join(f"{a}>{b}" for a, b in self.matching)
        return f"step:{self.step_index};match:{match};r3:{'yes' if self.apply_r3 else 'no'}"


def leftover_pairs(selected: Sequence[SelectedBasis], matching: Iterable[Pair]) -> dict[int, Pair]:
    """Gamma rays left unpaired in each selected hybrid basis after rule 2."""
    by_partner = {p: gm for gm, p in matching}
    out = {}
    for s in selected:
        left = sorted(s.gamma_subset - {by_partner[s.partner]})
        out[s.index] = (left[0], left[1])
    return out


def r3_pairs_for(selected: Sequence[SelectedBasis], matching: Iterable[Pair]) -> tuple[Pair, ...] | None:
    """The two repeated gamma-gamma pairs, or None when the leftovers do not collapse."""
    counts = Counter(leftover_pairs(selected, matching).values())
    if len(counts) == 2 and all(n == 2 for n in counts.values()):
        return tuple(sorted(counts))
    return None


def enumerate_matchings(seed: KSSet, g: GammaSet, step_index: int | None = None) -> list[StepChoice]:
    """Every rule-2 matching for ``g``, in lexicographic order of partners.

    A matching sends each gamma ray to a distinct non-gamma ray it shares a
    selected hybrid basis with. Compatible matchings come back with rule 3
    applied, the rest without.
    """
    selected = rule1_select_hbs(seed, g)
    step = step_index if step_index is not None else g.pure_index
    allowed = {gm: sorted(s.partner for s in selected if gm in s.gamma_subset) for gm in g.gamma}
    out: list[StepChoice] = []

    def rec(k: int, used: list[int]) -> None:
        if k == len(g.gamma):
            matching = tuple(zip(g.gamma, used))
            pairs = r3_pairs_for(selected, matching)
            out.append(StepChoice(step, matching, pairs is not None, pairs, pairs is not None))
            return
        for p in allowed[g.gamma[k]]:
            if p not in used:
                rec(k + 1, used + [p])

    rec(0, [])
    return out


@dataclass(frozen=True)
class TransformState:
    """Projectors placed so far in each basis, in insertion order."""

    placed: dict[int, tuple[Projector, ...]]

    @classmethod
    def empty(cls, seed: KSSet) -> "TransformState":
        return cls({b.index: () for b in seed.bases})

    def rays_used(self, basis: int) -> set[int]:
        return {r for p in self.placed[basis] for r in p.rays}

    def snapshot(self, indices: Iterable[int]) -> dict[int, tuple[Projector, ...]]:
        return {i: self.placed[i] for i in indices}


def _place(placed: dict[int, tuple[Projector, ...]], seed_rays: dict[int, frozenset[int]],
           basis: int, proj: Projector) -> None:
    if basis not in placed:
        raise TransformError(f"basis {basis} is not part of the seed")
    missing = proj.ray_set - seed_rays[basis]
    if missing:
        raise TransformError(f"projector {proj.label()} uses rays {sorted(missing)} absent from basis {basis}")
    used = {r for p in placed[basis] for r in p.rays}
    clash = proj.ray_set & used
    if clash:
        raise TransformError(
            f"conflict in basis {basis}: rays {sorted(clash)} of {proj.label()} already placed by "
            + ", ".join(p.label() for p in placed[basis] if p.ray_set & clash)
        )
    placed[basis] = placed[basis] + (proj,)


def validate_choice(seed: KSSet, g: GammaSet, choice: StepChoice) -> StepChoice:
    """Check ``choice`` against the enumerated candidates; returns it with ``compatible`` set."""
    for cand in enumerate_matchings(seed, g, choice.step_index):
        if set(cand.matching) == set(choice.matching):
            if choice.apply_r3:
                if not cand.compatible:
                    raise TransformError(f"step {choice.step_index}: rule 3 not applicable to this matching")
                if set(choice.r3_pairs or ()) != set(cand.r3_pairs or ()):
                    raise TransformError(
                        f"step {choice.step_index}: rule 3 pairs {choice.r3_pairs} do not match the "
                        f"induced pairs {cand.r3_pairs}"
                    )
            return StepChoice(choice.step_index, choice.matching, choice.apply_r3,
                              choice.r3_pairs, cand.compatible)
    raise TransformError(f"step {choice.step_index}: {choice.matching} is not a valid rule-2 matching")


def apply_step(state: TransformState, seed: KSSet, g: GammaSet, choice: StepChoice) -> TransformState:
    """Apply rules 1-3 for one gamma set and return the new state."""
    selected = rule1_select_hbs(seed, g)
    seed_rays = {b.index: b.ray_set for b in seed.bases}
    placed = dict(state.placed)
    matched = {gm for gm, _ in choice.matching}
    if matched != set(g.gamma) or {p for _, p in choice.matching} != set(g.not_gamma):
        raise TransformError(f"step {choice.step_index}: matching must pair {g.gamma} with {g.not_gamma}")
    by_partner = {p: gm for gm, p in choice.matching}
    for gm, p in choice.matching:
        _place(placed, seed_rays, g.pure_index, projector(gm, p))
    leftovers = leftover_pairs(selected, choice.matching)
    if choice.apply_r3 and r3_pairs_for(selected, choice.matching) is None:
        raise TransformError(f"step {choice.step_index}: rule 3 not applicable to this matching")
    for s in selected:
        _place(placed, seed_rays, s.index, projector(by_partner[s.partner], s.partner))
        left = leftovers[s.index]
        if choice.apply_r3:
            _place(placed, seed_rays, s.index, projector(*left))
        else:
            for r in left:
                _place(placed, seed_rays, s.index, projector(r))
    return TransformState(placed)


def run_steps(seed: KSSet, choices: Sequence[StepChoice]) -> list[TransformState]:
    """States after each step, in step order."""
    gs = gammas(seed)
    if len(choices) != len(gs):
        raise TransformError(f"need {len(gs)} step choices, got {len(choices)}")
    state = TransformState.empty(seed)
    states = []
    touched: set[int] = set()
    for g, c in zip(gs, sorted(choices, key=lambda c: c.step_index)):
        # steps act on disjoint ray sets
        if touched & (set(g.gamma) | set(g.not_gamma)):
            raise TransformError(f"step {c.step_index} reuses rays of an earlier step")
        touched |= set(g.gamma) | set(g.not_gamma)
        state = apply_step(state, seed, g, c)
        states.append(state)
    return states


def _finish(seed: KSSet, state: TransformState) -> KSSet:
    bases = []
    for b in seed.bases:
        projs = state.placed[b.index]
        rank = sum(p.rank for p in projs)
        if rank != DIM or sorted(r for p in projs for r in p.rays) != sorted(b.ray_set):
            raise AssertionError(f"basis {b.index} left unfilled: rank {rank}, projectors "
                                 + " ".join(p.label() for p in projs))
        bases.append(Basis(b.index, b.kind, projs))
    return KSSet(tuple(bases))


def transform(seed: KSSet, choices: Sequence[StepChoice]) -> KSSet:
    """Run all five steps and return the completed set."""
    gs = gammas(seed)
    ordered = sorted(choices, key=lambda c: c.step_index)
    if [c.step_index for c in ordered] != list(range(1, len(gs) + 1)):
        raise TransformError(f"need exactly one choice for each of steps 1..{len(gs)}")
    checked = [validate_choice(seed, g, c) for g, c in zip(gs, ordered)]
    return _finish(seed, run_steps(seed, checked)[-1])


def default_choices(seed: KSSet, skip: Iterable[int] = ()) -> list[StepChoice]:
    """First compatible matching per step, or first incompatible one for skipped steps."""
    skip = set(skip)
    out = []
    for step, g in enumerate(gammas(seed), 1):
        cands = enumerate_matchings(seed, g, step)
        want = step not in skip
        pick = next((c for c in cands if c.compatible == want), None)
        if pick is None:
            raise TransformError(f"step {step}: no matching with rule 3 {'applicable' if want else 'failing'}")
        out.append(pick)
    return out


@dataclass(frozen=True)
class TransformResult:
    kset: KSSet
    choices: tuple[StepChoice, ...]

    @property
    def n_rank2(self) -> int:
        return sum(p.rank == 2 for p in self.kset.census)

    @property
    def n_rank1(self) -> int:
        return sum(p.rank == 1 for p in self.kset.census)


@dataclass(frozen=True)
class TransformCensus:
    n_r3_skipped: int
    n_ks: int
    n_rank2: int
    n_rank1: int


def step_options(seed: KSSet, skip_pattern: Iterable[int] = (), *,
                 allow_unapplied: bool = False, allow_step1_skip: bool = False) -> list[list[StepChoice]]:
    """Per-step choice lists for the enumeration.

    Steps outside ``skip_pattern`` take the rule-3-compatible matchings with
    rule 3 applied. Skipped steps take the incompatible ones; with
    ``allow_unapplied`` they also take compatible matchings left unapplied.
    """
    skip = set(skip_pattern)
    n_steps = len(gammas(seed))
    if not skip <= set(range(1, n_steps + 1)):
        raise TransformError(f"skip pattern {sorted(skip)} outside steps 1..{n_steps}")
    if 1 in skip and not allow_step1_skip:
        raise TransformError("rule 3 is always applied at step 1; pass allow_step1_skip to override")
    options = []
    for step, g in enumerate(gammas(seed), 1):
        cands = enumerate_matchings(seed, g, step)
        if step in skip:
            opts = [c for c in cands if not c.compatible]
            if allow_unapplied:
                opts += [c.without_r3() for c in cands if c.compatible]
        else:
            opts = [c for c in cands if c.compatible]
        options.append(opts)
    return options


def _run_slice(args: tuple[KSSet, list[list[StepChoice]]]) -> list[TransformResult]:
    seed, options = args
    return [TransformResult(_finish(seed, run_steps(seed, combo)[-1]), tuple(combo))
            for combo in product(*options)]


def enumerate_transforms(seed: KSSet, skip_pattern: Iterable[int] = (), *,
                         allow_unapplied: bool = False, allow_step1_skip: bool = False,
                         workers: int = 1) -> Iterator[TransformResult]:
    """Yield one completed set per choice vector, in product order of the step options.

    With ``workers > 1`` the space is split by step-1 choice; the output order
    is the same.
    """
    options = step_options(seed, skip_pattern, allow_unapplied=allow_unapplied,
                           allow_step1_skip=allow_step1_skip)
    if workers <= 1:
        for combo in product(*options):
            yield TransformResult(_finish(seed, run_steps(seed, combo)[-1]), tuple(combo))
        return
    jobs = [(seed, [[first]] + options[1:]) for first in options[0]]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_slice, jobs):
            yield from part


def transform_census(results: Iterable[TransformResult], n_r3_skipped: int) -> TransformCensus:
    """Count the results and check they all share one (rank-2, rank-1) projector split."""
    n = 0
    split = None
    for r in results:
        n += 1
        this = (r.n_rank2, r.n_rank1)
        if split is None:
            split = this
        elif this != split:
            raise AssertionError(f"mixed projector counts in one census: {split} vs {this}")
    n2, n1 = split if split is not None else (0, 0)
    return TransformCensus(n_r3_skipped, n, n2, n1)
