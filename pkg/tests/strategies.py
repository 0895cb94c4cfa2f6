"""Random grammar expressions for property tests."""
from __future__ import annotations

import random

from hypothesis import strategies as st

FORMULAS = ("1", "2", "3", "4", "6", "1*n+1", "2*n+1", "2^n", "3^n", "2*2^n", "3*n+2")


def random_text(rng: random.Random, depth: int = 2, aperiodic: bool = False) -> str:
    """Expression text with at most ``depth`` levels of nesting."""
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        if aperiodic and rng.random() < 0.35:
            return rng.choice(("shift2", "ishift"))
        return f"cycle({rng.randint(1, 5)})"
    if roll < 0.5:
        return f"sum({random_text(rng, depth - 1, aperiodic)},{random_text(rng, depth - 1, aperiodic)})"
    if roll < 0.65:
        return f"cycleof({random_text(rng, depth - 1, aperiodic)},{rng.randint(1, 3)})"
    head = [random_text(rng, depth - 1, aperiodic) for _ in range(rng.randint(0, 2))]
    if rng.random() < 0.2 and depth >= 2:
        family = f"tower(cycle({rng.choice(('1', '2', '3', '2^n'))}))"
    else:
        family = f"cycle({rng.choice(FORMULAS)})"
    return "tower(" + ",".join(head + [family]) + ")"


def random_texts(seed: int, count: int, depth: int = 2, aperiodic: bool = False) -> list[str]:
    rng = random.Random(seed)
    return [random_text(rng, depth, aperiodic) for _ in range(count)]


def mixed_texts(seed: int, count: int) -> list[str]:
    """Half all-periodic, half with a shift2 or ishift summand somewhere."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        t = random_text(rng, 2, aperiodic=False)
        if i % 2:
            gen = rng.choice(("shift2", "ishift", f"cycleof({rng.choice(('shift2', 'ishift'))},2)"))
            t = f"sum({t},{gen})" if rng.random() < 0.5 else f"sum({gen},{t})"
        out.append(t)
    return out


@st.composite
def expressions(draw, aperiodic: bool = False, depth: int = 2):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_text(random.Random(seed), depth, aperiodic)


@st.composite
def finite_residue_systems(draw, max_modulus: int = 12, max_size: int = 4):
    mods = draw(st.lists(st.integers(2, max_modulus), unique=True, max_size=max_size))
    return {n: draw(st.integers(0, n - 1)) for n in mods}
