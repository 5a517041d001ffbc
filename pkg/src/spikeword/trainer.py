"""One-shot code-word training on the two-population supervised network.

Each bit of an N-bit code word owns one source/injector pair per population.
During a presentation the population matching the bit's value fires the
potentiating schedule (source spikes at 1, 26, 56 ms; pre-spikes reach the
plastic synapse at 2, 27, 57 ms) while the opposite population fires the
depressing schedule (6, 36, 59 ms; arrivals 7, 37, 60 ms). A teacher chain
forces the single output neuron to fire at exactly 32 ms, which lands the
committed pairings at dt = +5/-25 ms on the matching row (net change
+[e^-1 - e^-5]) and +25/-5 ms on the opposite row (the same magnitude with
opposite sign, clipped at zero). A save source makes every injector emit one
final flush spike, arriving on every plastic row at 70 ms, so no pairing is
left pending at readout.

The raw plastic updates are canonicalised: every strictly positive update
counts as exactly one unit weight (0.3671875, i.e. 752 LSB), matching the
convention all downstream scaling is expressed in. Multi-pattern training
sums unit counts synapse by synapse over independent single-word runs, each
starting from zero weights.
"""

import json
from dataclasses import dataclass

from .simcore import (
    FixedWeight,
    LifPopulation,
    NetworkSpec,
    Projection,
    Simulation,
    SourcePopulation,
    quantize_weight,
)
from .plasticity import StdpParams

UNIT_WEIGHT = 0.3671875  # canonical per-presentation increment, 752 LSB
UNIT_LSB = 752
LSB_VALUE = 2.0 ** -11

POTENTIATING_SOURCE_TIMES = (1, 26, 56)  # pre arrivals 2, 27, 57
DEPRESSING_SOURCE_TIMES = (6, 36, 59)    # pre arrivals 7, 37, 60
TEACHER_SOURCE_TIME = 30                 # teacher neuron fires 31, output 32
SAVE_SOURCE_TIME = 69                    # flush pre-spike on every row at 70
OUTPUT_SPIKE_TIME = 32
TRAIN_DURATION = 75
DRIVE_WEIGHT = 20.0                      # supra-threshold static drive


class TrainingFaultError(RuntimeError):
    """The training run violated the schedule/plasticity contract."""


@dataclass(frozen=True)
class CodeWord:
    """An n_bits-wide spatial pattern; bit i maps to injector neuron i."""

    value: int
    n_bits: int = 10

    def __post_init__(self):
        if self.n_bits < 1:
            raise ValueError("n_bits must be >= 1")
        if not (0 <= self.value < 2 ** self.n_bits):
            raise ValueError(
                f"code word {self.value} out of range for {self.n_bits} bits"
            )

    def bit(self, i: int) -> int:
        return (self.value >> i) & 1

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class TrainedWeights:
    """Per-bit unit counts for the two injector populations.

    pop1_units[i] counts trained words with bit i set, pop0_units[i] the
    rest, so the columns sum to the number of trained words.
    """

    n_bits: int
    pop0_units: tuple
    pop1_units: tuple
    trained_codewords: tuple
    unit_weight: float = UNIT_WEIGHT

    def __post_init__(self):
        if len(self.pop0_units) != self.n_bits or len(self.pop1_units) != self.n_bits:
            raise ValueError("unit arrays must have one entry per bit")
        if any(u < 0 for u in self.pop0_units + self.pop1_units):
            raise ValueError("unit counts are non-negative")

    @classmethod
    def build(cls, n_bits, pop0_units, pop1_units, trained_codewords):
        """Construct with the full trained-set consistency check."""
        tw = cls(
            n_bits=n_bits,
            pop0_units=tuple(pop0_units),
            pop1_units=tuple(pop1_units),
            trained_codewords=tuple(trained_codewords),
        )
        k = len(tw.trained_codewords)
        for i in range(n_bits):
            ones = sum(w.bit(i) for w in tw.trained_codewords)
            if tw.pop1_units[i] != ones or tw.pop0_units[i] != k - ones:
                raise ValueError("unit counts inconsistent with trained words")
        return tw


def build_training_network(word: CodeWord) -> NetworkSpec:
    n = word.n_bits
    sched0, sched1 = [], []
    for i in range(n):
        if word.bit(i):
            sched1.append(list(POTENTIATING_SOURCE_TIMES))
            sched0.append(list(DEPRESSING_SOURCE_TIMES))
        else:
            sched0.append(list(POTENTIATING_SOURCE_TIMES))
            sched1.append(list(DEPRESSING_SOURCE_TIMES))

    drive = quantize_weight(DRIVE_WEIGHT)
    one_to_one = lambda size, w: [(i, i, w) for i in range(size)]
    fan_out = lambda size, w: [(0, i, w) for i in range(size)]
    stdp = StdpParams()

    populations = [
        SourcePopulation("src0", n, sched0),
        SourcePopulation("src1", n, sched1),
        SourcePopulation("teacher_src", 1, [[TEACHER_SOURCE_TIME]]),
        SourcePopulation("save_src", 1, [[SAVE_SOURCE_TIME]]),
        LifPopulation("inj0", n),
        LifPopulation("inj1", n),
        LifPopulation("teacher", 1),
        LifPopulation("output", 1),
    ]
    projections = [
        Projection("src0", "inj0", one_to_one(n, drive)),
        Projection("src1", "inj1", one_to_one(n, drive)),
        Projection("save_src", "inj0", fan_out(n, drive)),
        Projection("save_src", "inj1", fan_out(n, drive)),
        Projection("teacher_src", "teacher", [(0, 0, drive)]),
        Projection("teacher", "output", [(0, 0, drive)]),
        # plastic rows: zero initial weight; plasticity times its pre-spikes
        # at the injector firing (total source->synapse latency is 1 ms)
        Projection(
            "inj0", "output", [(i, 0, FixedWeight(0)) for i in range(n)],
            plastic=True, stdp=stdp, stdp_delay=0,
        ),
        Projection(
            "inj1", "output", [(i, 0, FixedWeight(0)) for i in range(n)],
            plastic=True, stdp=stdp, stdp_delay=0,
        ),
    ]
    return NetworkSpec(populations, projections)


def train_single(word: CodeWord) -> TrainedWeights:
    """Run one training presentation and canonicalise the result.

    Asserts the training contract: a single output spike at 32 ms, strictly
    positive raw plastic update on the matching-population synapse of every
    bit, and a clipped-to-zero stored weight on the opposite one.
    """
    spec = build_training_network(word)
    rec = Simulation(spec).run(TRAIN_DURATION)

    out_times = rec.spike_times("output")
    if out_times != (OUTPUT_SPIKE_TIME,):
        raise TrainingFaultError(
            f"output spikes at {out_times}, expected exactly one at"
            f" {OUTPUT_SPIKE_TIME} ms"
        )

    idx = {p.source: i for i, p in enumerate(spec.projections) if p.plastic}
    plastic = {0: rec.plastic[idx["inj0"]], 1: rec.plastic[idx["inj1"]]}
    n = word.n_bits
    pop0, pop1 = [0] * n, [0] * n
    for i in range(n):
        b = word.bit(i)
        match_lsb, match_raw = plastic[b][i]
        opp_lsb, opp_raw = plastic[1 - b][i]
        if match_raw <= 0.0:
            raise TrainingFaultError(
                f"bit {i}: matching-row raw update {match_raw} not positive"
            )
        if opp_raw >= 0.0 or opp_lsb != 0:
            raise TrainingFaultError(
                f"bit {i}: opposite-row update not clipped to zero"
                f" (raw {opp_raw}, stored {opp_lsb} LSB)"
            )
        (pop1 if b else pop0)[i] = 1
    return TrainedWeights.build(n, pop0, pop1, (word,))


def train_set(words) -> TrainedWeights:
    """Train each word independently from zero and sum unit counts per bit."""
    words = [w if isinstance(w, CodeWord) else CodeWord(w) for w in words]
    if not words:
        raise ValueError("need at least one code word")
    n = words[0].n_bits
    if any(w.n_bits != n for w in words):
        raise ValueError("all code words must have the same width")
    if len({w.value for w in words}) != len(words):
        raise ValueError("duplicate code words are not allowed")
    words.sort(key=lambda w: w.value)  # order-independent result

    pop0, pop1 = [0] * n, [0] * n
    for w in words:
        single = train_single(w)
        pop0 = [a + b for a, b in zip(pop0, single.pop0_units)]
        pop1 = [a + b for a, b in zip(pop1, single.pop1_units)]
    return TrainedWeights.build(n, pop0, pop1, tuple(words))


def save_weights(path, weights: TrainedWeights, factor=None, dropped=()) -> None:
    """Persist trained weights (and homeostasis outcome) as JSON.

    Field order is fixed; arrays are indexed bit 0 first.
    """
    doc = {
        "n_bits": weights.n_bits,
        "lsb": LSB_VALUE,
        "unit_lsb": UNIT_LSB,
        "pop0_units": list(weights.pop0_units),
        "pop1_units": list(weights.pop1_units),
        "trained_codewords": [w.value for w in weights.trained_codewords],
        "homeostatic_factor": factor,
        "dropped_codewords": sorted(w.value for w in dropped),
    }
    with open(path, "w") as fp:
        json.dump(doc, fp, indent=2)
        fp.write("\n")


def load_weights(path):
    """Read a weight file back; returns (TrainedWeights, factor, dropped)."""
    with open(path) as fp:
        doc = json.load(fp)
    try:
        n_bits = doc["n_bits"]
        if doc["lsb"] != LSB_VALUE or doc["unit_lsb"] != UNIT_LSB:
            raise ValueError("weight file uses an unsupported fixed-point grid")
        words = tuple(CodeWord(v, n_bits) for v in doc["trained_codewords"])
        weights = TrainedWeights.build(
            n_bits, doc["pop0_units"], doc["pop1_units"], words
        )
        factor = doc["homeostatic_factor"]
        if factor is not None and not (isinstance(factor, (int, float)) and factor > 0):
            raise ValueError("homeostatic_factor must be positive or null")
        dropped = tuple(CodeWord(v, n_bits) for v in doc["dropped_codewords"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"corrupt weight file: {exc}") from exc
    return weights, factor, dropped
