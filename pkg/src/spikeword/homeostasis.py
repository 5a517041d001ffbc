"""Homeostatic factor search over the testing network.

For each trained pattern the minimal scale factor that makes the output
neuron fire exactly once is located by bisection on [0.0001, 1000] (the
firing predicate is monotone in the factor because quantised drive is), then
a linear walk of the refined interval on the 0.00001 grid. Patterns that
cannot fire even at the upper bound are dropped; the network factor is the
maximum over the remaining per-pattern minima.
"""

import math
from dataclasses import dataclass

from .classifier import TestingRig
from .trainer import CodeWord, TrainedWeights

SEARCH_LO = 0.0001
SEARCH_HI = 1000.0
BISECT_TOL = 0.0001
GRID_STEP = 0.00001


class _Unreachable:
    """Sentinel: no finite factor makes this pattern fire."""

    def __repr__(self):
        return "UNREACHABLE"


UNREACHABLE = _Unreachable()


class InfiniteHomeostasisError(RuntimeError):
    """No trained pattern is reachable at any factor."""


class DegenerateWeightsError(ValueError):
    """The pattern fires at the lower search bound; the weights are corrupt."""


def pattern_fires(weights: TrainedWeights, h: float, word: CodeWord) -> bool:
    """True iff the output emits exactly one spike for this presentation."""
    if h <= 0:
        raise ValueError("factor must be positive")
    return TestingRig(weights, h).present(word) == 1


def _grid_search(pred) -> float | _Unreachable:
    """Bisect a monotone predicate, then scan the 1e-5 grid ascending.

    Maintains pred(lo) == False, pred(hi) == True until hi - lo <= 1e-4, then
    walks [lo - 1e-5, hi + 1e-5] in 1e-5 steps and returns the first grid
    point that satisfies the predicate.
    """
    lo, hi = SEARCH_LO, SEARCH_HI
    if pred(lo):
        raise DegenerateWeightsError(
            f"pattern already fires at the lower bound {SEARCH_LO}"
        )
    if not pred(hi):
        return UNREACHABLE
    while hi - lo > BISECT_TOL:
        mid = (lo + hi) / 2.0
        if pred(mid):
            hi = mid
        else:
            lo = mid
    k = math.floor((lo - GRID_STEP) * 100000.0)
    limit = math.ceil((hi + GRID_STEP) * 100000.0)
    while k <= limit:
        h = k / 100000.0
        if h > 0 and pred(h):
            return h
        k += 1
    raise AssertionError("grid scan passed the verified-true endpoint")


def min_factor_for_pattern(weights: TrainedWeights, word: CodeWord):
    """Smallest grid factor at which the trained word fires, or UNREACHABLE."""
    if word not in weights.trained_codewords:
        raise ValueError(f"{word.value} is not a trained code word")
    return _grid_search(lambda h: pattern_fires(weights, h, word))


@dataclass(frozen=True)
class HomeostasisResult:
    network_factor: float
    per_pattern: dict  # CodeWord -> float | UNREACHABLE
    dropped: frozenset

    def factor_for(self, word: CodeWord):
        return self.per_pattern[word]


def network_factor(weights: TrainedWeights) -> HomeostasisResult:
    """Per-pattern minima, dropped set, and their maximum.

    Raises InfiniteHomeostasisError when every trained pattern is
    unreachable (e.g. two exactly opposite patterns cancel all drive).
    """
    if not weights.trained_codewords:
        raise ValueError("no trained code words")
    per_pattern = {}
    dropped = set()
    for word in weights.trained_codewords:
        factor = min_factor_for_pattern(weights, word)
        per_pattern[word] = factor
        if factor is UNREACHABLE:
            dropped.add(word)
    reachable = [f for f in per_pattern.values() if f is not UNREACHABLE]
    if not reachable:
        raise InfiniteHomeostasisError(
            "no finite factor makes any trained pattern fire"
        )
    return HomeostasisResult(
        network_factor=max(reachable),
        per_pattern=per_pattern,
        dropped=frozenset(dropped),
    )
