"""Discrete-time spiking network core.

Leaky integrate-and-fire neurons with delta synapses advance on a fixed 1 ms
grid. Synaptic magnitudes are fixed point: integer multiples of the 2^-11
weight-unit LSB, signed by the projection they ride on. Within a timestep all
current arriving at a neuron is summed as an integer LSB count before the
single membrane update, so delivery order can never influence the outcome and
identical network specifications produce bit-identical recordings.

Timing convention: a spike emitted at step t over a projection with delay d is
integrated by the target during step t + d, and a neuron driven over threshold
fires in that same step. Plastic projections may declare a separate
``stdp_delay`` so that the pre-spike times used for plasticity bookkeeping can
differ from the conduction delay (the training network times its plasticity
contract in injector firing times).
"""

import math
from dataclasses import dataclass, field

from .plasticity import StdpParams, SynapseHistory, process_pre_spike

LSB = 2.0 ** -11
MAX_LSB_COUNT = 2 ** 32  # practical quantisation bound

EXCITATORY = "excitatory"
INHIBITORY = "inhibitory"


@dataclass(frozen=True)
class FixedWeight:
    """Synaptic magnitude as a non-negative count of 2^-11 LSBs."""

    lsb_count: int

    def __post_init__(self):
        if not isinstance(self.lsb_count, int) or self.lsb_count < 0:
            raise ValueError("lsb_count must be a non-negative integer")

    @property
    def value(self) -> float:
        return self.lsb_count * LSB


def quantize_weight(w: float) -> FixedWeight:
    """Round a non-negative real weight to the 2^-11 grid.

    Round-to-nearest with ties away from zero, so the grid value is
    floor(w * 2048 + 0.5). Monotone non-decreasing in w.
    """
    if w < 0:
        raise ValueError(f"cannot quantize negative weight {w}")
    count = math.floor(w * 2048.0 + 0.5)
    if count > MAX_LSB_COUNT:
        raise ValueError(f"weight {w} exceeds the representable range")
    return FixedWeight(count)


@dataclass(frozen=True)
class NeuronParams:
    """Leaky integrate-and-fire constants (simulator defaults).

    alpha is the per-step membrane decay exp(-1/tau_m); kappa converts one
    step of constant current in weight units into a membrane deflection in mV,
    (tau_m/c_m)*(1 - alpha). With the defaults, kappa = 0.9754115...
    """

    v_rest: float = -65.0
    v_reset: float = -65.0
    v_thresh: float = -50.0
    tau_m: float = 20.0
    c_m: float = 1.0
    t_refrac: float = 0.1
    alpha: float = field(init=False, repr=False)
    kappa: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (self.v_reset <= self.v_rest < self.v_thresh):
            raise ValueError("need v_reset <= v_rest < v_thresh")
        if self.tau_m <= 0 or self.c_m <= 0 or self.t_refrac < 0:
            raise ValueError("tau_m and c_m must be positive, t_refrac >= 0")
        object.__setattr__(self, "alpha", math.exp(-1.0 / self.tau_m))
        object.__setattr__(
            self, "kappa", (self.tau_m / self.c_m) * (1.0 - self.alpha)
        )


@dataclass
class NeuronState:
    v: float
    refrac_remaining: float = 0.0


def membrane_step(
    state: NeuronState, params: NeuronParams, input_current: float
) -> tuple[NeuronState, bool]:
    """Advance one neuron by exactly 1 ms.

    input_current is the signed sum of all weights (in weight units) delivered
    this step. Below threshold the exact-integration update is
    v' = v_rest + (v - v_rest)*alpha + input_current*kappa; crossing threshold
    (>=) fires, resets to v_reset and arms the refractory timer. A neuron is
    locked out only for whole steps: refractory remainders below 1 ms are
    dropped, so the default 0.1 ms refractory period never locks a step.
    """
    v, refrac, fired = _step_scalar(
        state.v, state.refrac_remaining, params, input_current
    )
    return NeuronState(v, refrac), fired


def _step_scalar(v, refrac, params, current):
    if refrac >= 1.0:
        return v, refrac - 1.0, False
    v2 = params.v_rest + (v - params.v_rest) * params.alpha + current * params.kappa
    if v2 >= params.v_thresh:
        return params.v_reset, params.t_refrac, True
    return v2, 0.0, False


@dataclass
class SourcePopulation:
    """Spike sources with an explicit firing schedule per neuron (ms)."""

    name: str
    size: int
    schedules: list

    def validate(self):
        if self.size < 0 or len(self.schedules) != self.size:
            raise NetworkValidationError(
                f"population {self.name!r}: need one schedule per neuron"
            )
        for times in self.schedules:
            if any((not isinstance(t, int)) or t < 0 for t in times):
                raise NetworkValidationError(
                    f"population {self.name!r}: spike times must be whole"
                    " non-negative milliseconds"
                )
            if list(times) != sorted(times):
                raise NetworkValidationError(
                    f"population {self.name!r}: schedules must be sorted"
                )


@dataclass
class LifPopulation:
    name: str
    size: int
    params: NeuronParams = field(default_factory=NeuronParams)

    def validate(self):
        if self.size < 0:
            raise NetworkValidationError(f"population {self.name!r}: bad size")


@dataclass
class Projection:
    """A bundle of synapses between two populations.

    connections is a list of (source_index, target_index, FixedWeight).
    delay is the conduction delay in whole ms (>= 1). For plastic projections
    stdp_delay gives the lag between a presynaptic firing and the pre-spike
    time seen by the plasticity rule; None means use the conduction delay.
    """

    source: str
    target: str
    connections: list
    sign: str = EXCITATORY
    delay: int = 1
    plastic: bool = False
    stdp: StdpParams | None = None
    w_max: float = 16.0
    stdp_delay: int | None = None


class NetworkValidationError(ValueError):
    """The network specification is malformed."""


@dataclass
class NetworkSpec:
    populations: list
    projections: list

    def validate(self):
        names = [p.name for p in self.populations]
        if len(set(names)) != len(names):
            raise NetworkValidationError("duplicate population names")
        sizes = {p.name: p.size for p in self.populations}
        for p in self.populations:
            p.validate()
        for proj in self.projections:
            if proj.source not in sizes or proj.target not in sizes:
                raise NetworkValidationError(
                    f"projection {proj.source!r}->{proj.target!r} references"
                    " an unknown population"
                )
            if not isinstance(proj.delay, int) or proj.delay < 1:
                raise NetworkValidationError("delays are whole ms >= 1")
            if proj.stdp_delay is not None and (
                not isinstance(proj.stdp_delay, int) or proj.stdp_delay < 0
            ):
                raise NetworkValidationError("stdp_delay must be an int >= 0")
            if proj.sign not in (EXCITATORY, INHIBITORY):
                raise NetworkValidationError(f"unknown sign {proj.sign!r}")
            if proj.plastic and proj.stdp is None:
                raise NetworkValidationError(
                    "plastic projections need STDP parameters"
                )
            for src, tgt, w in proj.connections:
                if not (0 <= src < sizes[proj.source]) or not (
                    0 <= tgt < sizes[proj.target]
                ):
                    raise NetworkValidationError(
                        f"connection ({src},{tgt}) out of range for"
                        f" {proj.source!r}->{proj.target!r}"
                    )
                if not isinstance(w, FixedWeight):
                    raise NetworkValidationError("weights must be FixedWeight")


@dataclass(frozen=True)
class SpikeEvent:
    time: int
    population: str
    index: int


@dataclass(frozen=True)
class Recording:
    """Immutable result of one network run."""

    spikes: tuple
    v_traces: dict
    plastic: dict  # projection index -> tuple of (lsb_count, raw_delta)

    def spike_times(self, population: str, index: int | None = None) -> tuple:
        return tuple(
            ev.time
            for ev in self.spikes
            if ev.population == population
            and (index is None or ev.index == index)
        )


class Simulation:
    """Owns the mutable state of one network instance.

    Distinct instances share nothing; a single instance is not thread-safe.
    """

    def __init__(self, spec: NetworkSpec):
        spec.validate()
        self.spec = spec
        self._sources = {
            p.name: p for p in spec.populations if isinstance(p, SourcePopulation)
        }
        self._lifs = {
            p.name: p for p in spec.populations if isinstance(p, LifPopulation)
        }
        self.reset()

    def reset(self) -> None:
        """Restore pristine state: membranes at rest, plastic weights at init."""
        self._v = {
            name: [p.params.v_rest] * p.size for name, p in self._lifs.items()
        }
        self._refrac = {name: [0.0] * p.size for name, p in self._lifs.items()}
        # live plastic state, parallel to each projection's connection list
        self._plastic_lsb = {}
        self._histories = {}
        for i, proj in enumerate(self.spec.projections):
            if proj.plastic:
                self._plastic_lsb[i] = [w.lsb_count for _, _, w in proj.connections]
                self._histories[i] = [
                    SynapseHistory() for _ in proj.connections
                ]

    def set_source_schedules(self, population: str, schedules: list) -> None:
        src = self._sources.get(population)
        if src is None:
            raise NetworkValidationError(f"{population!r} is not a source population")
        if len(schedules) != src.size:
            raise NetworkValidationError("need one schedule per neuron")
        src.schedules = schedules

    def run(self, duration: int, record_v: tuple = ()) -> Recording:
        if duration < 1:
            raise ValueError("duration must be >= 1 ms")
        spikes = []
        traces = {name: [] for name in record_v}
        pending = {}  # t -> {(pop, idx): signed lsb sum}
        stdp_due = {}  # t -> [(proj_idx, conn_idx, t)]

        # index projections by source, and plastic ones by target
        by_source = {}
        plastic_by_target = {}
        for i, proj in enumerate(self.spec.projections):
            by_source.setdefault(proj.source, []).append((i, proj))
            if proj.plastic:
                tgt_map = plastic_by_target.setdefault(proj.target, {})
                for k, (_, tgt, _) in enumerate(proj.connections):
                    tgt_map.setdefault(tgt, []).append((i, k))

        source_events = {}  # t -> [(pop, idx)]
        for name, src in self._sources.items():
            for idx, times in enumerate(src.schedules):
                for t in times:
                    if t < duration:
                        source_events.setdefault(t, []).append((name, idx))

        for t in range(duration):
            fired = []  # (pop, idx) in deterministic order

            arrivals = pending.pop(t, {})
            for name, pop in self._lifs.items():
                vs = self._v[name]
                refr = self._refrac[name]
                params = pop.params
                for idx in range(pop.size):
                    current = arrivals.get((name, idx), 0) * LSB
                    v2, r2, did_fire = _step_scalar(
                        vs[idx], refr[idx], params, current
                    )
                    vs[idx] = v2
                    refr[idx] = r2
                    if did_fire:
                        fired.append((name, idx))

            fired.extend(source_events.get(t, ()))
            for pop, idx in fired:
                spikes.append(SpikeEvent(t, pop, idx))

            # posts first, then pre arrivals due this step (dt == 0 is a no-op
            # in the kernel, so coincidences are handled uniformly)
            for pop, idx in fired:
                for proj_idx, conn_idx in plastic_by_target.get(pop, {}).get(
                    idx, ()
                ):
                    self._histories[proj_idx][conn_idx].note_post(t)

            for pop, idx in fired:
                for proj_idx, proj in by_source.get(pop, ()):
                    if not proj.plastic:
                        continue
                    lag = proj.stdp_delay if proj.stdp_delay is not None else proj.delay
                    for k, (src, _, _) in enumerate(proj.connections):
                        if src != idx:
                            continue
                        if lag == 0:
                            self._process_pre(proj_idx, k, t, proj)
                        else:
                            stdp_due.setdefault(t + lag, []).append(
                                (proj_idx, k, t + lag)
                            )
            for proj_idx, k, t_pre in stdp_due.pop(t, ()):
                self._process_pre(proj_idx, k, t_pre, self.spec.projections[proj_idx])

            # conduction: enqueue deliveries with post-commit weights
            for pop, idx in fired:
                for proj_idx, proj in by_source.get(pop, ()):
                    sign = 1 if proj.sign == EXCITATORY else -1
                    live = self._plastic_lsb.get(proj_idx)
                    slot = pending.setdefault(t + proj.delay, {})
                    for k, (src, tgt, w) in enumerate(proj.connections):
                        if src != idx:
                            continue
                        lsb = live[k] if live is not None else w.lsb_count
                        key = (proj.target, tgt)
                        slot[key] = slot.get(key, 0) + sign * lsb

            for name in record_v:
                traces[name].append(tuple(self._v[name]))

        plastic = {
            i: tuple(
                (lsb, hist.raw_delta)
                for lsb, hist in zip(self._plastic_lsb[i], self._histories[i])
            )
            for i in self._plastic_lsb
        }
        return Recording(
            spikes=tuple(spikes),
            v_traces={k: tuple(v) for k, v in traces.items()},
            plastic=plastic,
        )

    def _process_pre(self, proj_idx, conn_idx, t_pre, proj):
        hist = self._histories[proj_idx][conn_idx]
        w = self._plastic_lsb[proj_idx][conn_idx] * LSB
        new_w, _ = process_pre_spike(hist, t_pre, proj.stdp, w, proj.w_max)
        if new_w != w:
            # stored weights live on the fixed-point grid; quantise per commit
            self._plastic_lsb[proj_idx][conn_idx] = quantize_weight(new_w).lsb_count


def run_network(
    spec: NetworkSpec, duration: int, record_v: tuple = ()
) -> Recording:
    """Validate, build and run a network once. Deterministic."""
    return Simulation(spec).run(duration, record_v=record_v)
