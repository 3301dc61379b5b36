from pathlib import Path

import pytest

from ks8.seeker import seed_from_bases
from ks8.transformer import StepChoice

GOLDEN = Path(__file__).parent / "golden"

TABLE3_BASES = (1, 2, 3, 4, 5, 6, 7, 8, 10, 14, 15, 16, 20, 22, 24)

# Worked example: rule-2 matching and rule-3 pairs per step.
PAPER_STEPS = [
    (1, ((1, 7), (2, 8), (3, 4), (5, 6)), ((1, 2), (3, 5))),
    (2, ((9, 12), (13, 16), (14, 10), (15, 11)), ((9, 13), (14, 15))),
    (3, ((19, 20), (21, 22), (23, 17), (24, 18)), ((19, 21), (23, 24))),
    (4, ((28, 27), (30, 29), (31, 25), (32, 26)), ((28, 30), (31, 32))),
    (5, ((33, 35), (34, 40), (36, 37), (38, 39)), ((33, 38), (34, 36))),
]

PAPER_CHOICE_SPEC = " ".join(
    f"step:{i};match:{','.join(f'{a}>{b}' for a, b in m)};r3:yes" for i, m, _ in PAPER_STEPS
)


@pytest.fixture(scope="session")
def table3_seed():
    return seed_from_bases(TABLE3_BASES)


@pytest.fixture(scope="session")
def paper_choices():
    return [StepChoice(i, m, True, r3) for i, m, r3 in PAPER_STEPS]
