"""Independent algebraic model of the whole pipeline.

Everything here is rebuilt from first principles in pure integer and
closed-form arithmetic, deliberately sharing no code with the simulation
engine or the classifier: agreement between the two routes is the evidence
that neither is wrong. Training a set of code words deposits one unit per
word on each bit's matching population, so the testing network's response to
a probe word reduces to a signed sum of quantised per-bit drives, and firing
is a single threshold comparison on that sum.
"""

import math
from dataclasses import dataclass

from .trainer import CodeWord

# Closed-form counterparts of the engine constants, derived independently.
_UNIT_LSB = 752                       # one unit weight on the 2^-11 grid
_ALPHA = math.exp(-1.0 / 20.0)
_KAPPA = 20.0 * (1.0 - _ALPHA)        # mV per weight unit of one-step current
_THRESHOLD_MV = 15.0                  # v_thresh - v_rest

SEARCH_LO = 0.0001
SEARCH_HI = 1000.0
BISECT_TOL = 0.0001
GRID_STEP = 0.00001


class OracleInfiniteHomeostasis(RuntimeError):
    """Every trained pattern has non-positive unit contribution."""


def _round_half_away(x: float) -> int:
    return math.floor(x + 0.5)


def _width(trained, word=None, default: int = 10) -> int:
    widths = {w.n_bits for w in trained if isinstance(w, CodeWord)}
    if isinstance(word, CodeWord):
        widths.add(word.n_bits)
    if len(widths) > 1:
        raise ValueError("mixed code-word widths")
    return widths.pop() if widths else default


def unit_contribution(trained, word) -> int:
    """Signed agreeing-minus-disagreeing unit count for a probe word."""
    values = [int(t) for t in trained]
    n = _width(trained, word)
    w = int(word)
    total = 0
    for bit in range(n):
        b = (w >> bit) & 1
        agree = sum(1 for t in values if ((t >> bit) & 1) == b)
        total += agree - (len(values) - agree)
    return total


def oracle_classify(trained, h: float, word) -> bool:
    """Closed-form firing predicate for the mirrored testing network."""
    if h <= 0:
        raise ValueError("factor must be positive")
    values = [int(t) for t in trained]
    n = _width(trained, word)
    w = int(word)
    drive_lsb = 0
    for bit in range(n):
        b = (w >> bit) & 1
        agree = sum(1 for t in values if ((t >> bit) & 1) == b)
        disagree = len(values) - agree
        drive_lsb += _round_half_away(h * agree * _UNIT_LSB)
        drive_lsb -= _round_half_away(h * disagree * _UNIT_LSB)
    return drive_lsb * (2.0 ** -11) * _KAPPA >= _THRESHOLD_MV


def _grid_search(pred):
    lo, hi = SEARCH_LO, SEARCH_HI
    if pred(lo):
        raise ValueError("degenerate: fires at the lower bound")
    if not pred(hi):
        return None
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


@dataclass(frozen=True)
class OracleHomeostasis:
    network_factor: float
    per_pattern: dict  # word value -> float | None (None = dropped)
    dropped: frozenset


def oracle_min_factor(trained) -> OracleHomeostasis:
    """Same search grid and semantics as the simulation-side homeostasis.

    A pattern with non-positive unit contribution can never fire (quantised
    drive stays bounded near zero at any factor), so it is dropped without
    searching.
    """
    words = list(trained)
    if not words:
        raise ValueError("no trained code words")
    per_pattern = {}
    dropped = set()
    for word in words:
        if unit_contribution(words, word) <= 0:
            per_pattern[int(word)] = None
            dropped.add(int(word))
            continue
        per_pattern[int(word)] = _grid_search(
            lambda h, word=word: oracle_classify(words, h, word)
        )
    reachable = [f for f in per_pattern.values() if f is not None]
    if not reachable:
        raise OracleInfiniteHomeostasis(
            "all trained patterns have non-positive unit contribution"
        )
    return OracleHomeostasis(
        network_factor=max(reachable),
        per_pattern=per_pattern,
        dropped=frozenset(dropped),
    )
