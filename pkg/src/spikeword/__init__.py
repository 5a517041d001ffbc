"""Deterministic spiking-network engine for spatial code-word detection.

One-shot STDP training deposits one unit weight per presented bit, a
homeostatic search rescales the mirrored testing network until every learned
pattern fires exactly once, and exhaustive evaluation grades the detector
over the full code-word space. A closed-form oracle re-derives every result
independently of the simulator.
"""

from .classifier import (
    ClassificationReport,
    ConfusionCounts,
    build_testing_network,
    classify,
    compute_metrics,
    evaluate_exhaustive,
    hamming,
)
from .homeostasis import (
    UNREACHABLE,
    HomeostasisResult,
    InfiniteHomeostasisError,
    min_factor_for_pattern,
    network_factor,
    pattern_fires,
)
from .oracle import oracle_classify, oracle_min_factor, unit_contribution
from .plasticity import StdpParams, SynapseHistory, process_pre_spike, stdp_kernel
from .simcore import (
    FixedWeight,
    LifPopulation,
    NetworkSpec,
    NeuronParams,
    NeuronState,
    Projection,
    Recording,
    Simulation,
    SourcePopulation,
    membrane_step,
    quantize_weight,
    run_network,
)
from .trainer import (
    CodeWord,
    TrainedWeights,
    TrainingFaultError,
    load_weights,
    save_weights,
    train_set,
    train_single,
)

__all__ = [
    "ClassificationReport",
    "CodeWord",
    "ConfusionCounts",
    "FixedWeight",
    "HomeostasisResult",
    "InfiniteHomeostasisError",
    "LifPopulation",
    "NetworkSpec",
    "NeuronParams",
    "NeuronState",
    "Projection",
    "Recording",
    "Simulation",
    "SourcePopulation",
    "StdpParams",
    "SynapseHistory",
    "TrainedWeights",
    "TrainingFaultError",
    "UNREACHABLE",
    "build_testing_network",
    "classify",
    "compute_metrics",
    "evaluate_exhaustive",
    "hamming",
    "load_weights",
    "membrane_step",
    "min_factor_for_pattern",
    "network_factor",
    "oracle_classify",
    "oracle_min_factor",
    "pattern_fires",
    "process_pre_spike",
    "quantize_weight",
    "run_network",
    "save_weights",
    "stdp_kernel",
    "train_set",
    "train_single",
    "unit_contribution",
]
