"""Measurement helpers for the scaling behaviour of the reduction loop."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .complexes import standard_complex
from .engine import reduce_map
from .maps import bouquet_map
from .weights import unit_weighting
from .words import Word, free_reduce


def random_reduced_word(rng: random.Random, ngens: int, length: int) -> Word:
    letters: list[int] = []
    while len(letters) < length:
        choices = [s * g for g in range(1, ngens + 1) for s in (1, -1)]
        if letters:
            choices = [c for c in choices if c != -letters[-1]]
        letters.append(rng.choice(choices))
    return Word(tuple(letters))


def random_generator_set(rng: random.Random, ngens: int, total_length: int,
                         parts: int) -> list[Word]:
    cuts = sorted(rng.sample(range(1, total_length), parts - 1)) if parts > 1 else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [total_length])]
    return [random_reduced_word(rng, ngens, max(1, s)) for s in sizes]


@dataclass
class ScalingSample:
    total_length: int
    steps: int
    seconds: float


def measure_reduction_scaling(presentation, lengths, seeds, parts: int = 3,
                              best_of: int = 1) -> list[ScalingSample]:
    """Reduce random bouquets of the given total lengths; report step counts
    and best wall-clock per length."""
    x = standard_complex(presentation)
    w = unit_weighting(x)
    out = []
    for length in lengths:
        steps_total = 0
        best_time = float("inf")
        for seed in seeds:
            rng = random.Random(seed)
            gens = random_generator_set(rng, len(presentation.generators),
                                        length, parts)
            gens = [free_reduce(g) for g in gens]
            m = bouquet_map(x, [g for g in gens if g.letters])
            res = None
            for _ in range(best_of):
                t0 = time.perf_counter()
                res = reduce_map(m, w, "strict")
                best_time = min(best_time, time.perf_counter() - t0)
            steps_total += len(res.trace.steps)
        out.append(ScalingSample(length, steps_total // max(1, len(seeds)), best_time))
    return out
