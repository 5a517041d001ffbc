"""Testing network construction, classification, and exhaustive evaluation.

The testing network mirrors trained weights: for bit n, the injector of
population b carries an excitatory synapse whose magnitude is the scaled
weight earned by population b and an inhibitory synapse carrying the scaled
weight earned by the other population. Both magnitudes quantise independently
to the 2^-11 grid after scaling, so a bit whose populations hold equal unit
counts contributes exactly zero drive regardless of the factor.

A probe presents one code word: per bit, the injector matching the bit value
fires once and the other stays silent, all in a single timestep, against a
fresh network state. The output either spikes once or not at all (delta
synapses deliver everything in one step), so "classified positive" and
"fired exactly once" coincide.
"""

from dataclasses import dataclass

from .simcore import (
    EXCITATORY,
    INHIBITORY,
    LifPopulation,
    NetworkSpec,
    Projection,
    Simulation,
    SourcePopulation,
    quantize_weight,
)
from .trainer import CodeWord, TrainedWeights

PROBE_WINDOW = 20  # ms; spikes fire at 1 ms, drive lands at 2 ms
PRESENT_TIME = 1
MAX_EXHAUSTIVE_BITS = 24


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("counts are non-negative")

    @property
    def positives(self) -> int:
        return self.tp + self.fp

    @property
    def negatives(self) -> int:
        return self.tn + self.fn

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class ClassificationReport:
    """The five ratios; a zero-denominator metric is None ("undefined")."""

    accuracy: float | None
    precision: float | None
    negative_prediction: float | None
    sensitivity: float | None
    specificity: float | None


def hamming(a: CodeWord, b: CodeWord) -> int:
    if a.n_bits != b.n_bits:
        raise ValueError("code words must have the same width")
    return (a.value ^ b.value).bit_count()


def build_testing_network(weights: TrainedWeights, h: float) -> NetworkSpec:
    """Mirrored excitatory/inhibitory testing network at scale factor h."""
    if h <= 0:
        raise ValueError("scale factor must be positive")
    n = weights.n_bits
    exc0, inh0, exc1, inh1 = [], [], [], []
    for i in range(n):
        w0 = quantize_weight(h * weights.pop0_units[i] * weights.unit_weight)
        w1 = quantize_weight(h * weights.pop1_units[i] * weights.unit_weight)
        exc0.append((i, 0, w0))
        inh0.append((i, 0, w1))
        exc1.append((i, 0, w1))
        inh1.append((i, 0, w0))
    empty = [[] for _ in range(n)]
    return NetworkSpec(
        populations=[
            SourcePopulation("inj0", n, [list(s) for s in empty]),
            SourcePopulation("inj1", n, [list(s) for s in empty]),
            LifPopulation("output", 1),
        ],
        projections=[
            Projection("inj0", "output", exc0, sign=EXCITATORY),
            Projection("inj0", "output", inh0, sign=INHIBITORY),
            Projection("inj1", "output", exc1, sign=EXCITATORY),
            Projection("inj1", "output", inh1, sign=INHIBITORY),
        ],
    )


class TestingRig:
    """One testing network reused across probes (fresh state per probe)."""

    def __init__(self, weights: TrainedWeights, h: float):
        self.weights = weights
        self.h = h
        self._sim = Simulation(build_testing_network(weights, h))

    def present(self, word: CodeWord) -> int:
        """Present one word; returns the output spike count in the window."""
        if word.n_bits != self.weights.n_bits:
            raise ValueError("probe width does not match the trained network")
        n = word.n_bits
        s0, s1 = [], []
        for i in range(n):
            if word.bit(i):
                s1.append([PRESENT_TIME])
                s0.append([])
            else:
                s0.append([PRESENT_TIME])
                s1.append([])
        self._sim.reset()
        self._sim.set_source_schedules("inj0", s0)
        self._sim.set_source_schedules("inj1", s1)
        rec = self._sim.run(PROBE_WINDOW)
        return len(rec.spike_times("output"))


def classify(weights: TrainedWeights, h: float, word: CodeWord) -> bool:
    """True iff the output neuron emits a spike for this word."""
    return TestingRig(weights, h).present(word) >= 1


def evaluate_exhaustive(weights: TrainedWeights, h: float) -> ConfusionCounts:
    """Classify every word in [0, 2^n_bits) against the trained set."""
    if weights.n_bits > MAX_EXHAUSTIVE_BITS:
        raise ValueError(
            f"exhaustive evaluation is limited to {MAX_EXHAUSTIVE_BITS} bits"
        )
    rig = TestingRig(weights, h)
    trained = {w.value for w in weights.trained_codewords}
    tp = tn = fp = fn = 0
    for value in range(2 ** weights.n_bits):
        fired = rig.present(CodeWord(value, weights.n_bits)) >= 1
        if value in trained:
            tp += fired
            fn += not fired
        else:
            fp += fired
            tn += not fired
    return ConfusionCounts(tp, tn, fp, fn)


def compute_metrics(counts: ConfusionCounts) -> ClassificationReport:
    def ratio(num, den):
        return num / den if den else None

    return ClassificationReport(
        accuracy=ratio(counts.tp + counts.tn, counts.total),
        precision=ratio(counts.tp, counts.tp + counts.fp),
        negative_prediction=ratio(counts.tn, counts.tn + counts.fn),
        sensitivity=ratio(counts.tp, counts.tp + counts.fn),
        specificity=ratio(counts.tn, counts.tn + counts.fp),
    )
