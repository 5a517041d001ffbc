"""Nearest-neighbour spike-pair plasticity with deferred, pre-spike-triggered commits.

A synapse never recomputes its weight spontaneously: updates happen only when
a new pre-synaptic spike arrives while the synapse already holds at least one
earlier pre-spike and one post-spike in memory. At that moment the buffered
post spike is paired under the nearest-neighbour rule -- one potentiation with
the closest earlier pre-spike, one depression with the closest later pre-spike
-- and each pairing is committed at most once. A post spike whose depression
partner has not arrived yet stays pending until some later pre-spike (possibly
a dedicated flush spike) triggers processing.

Kernel values are computed in real arithmetic; callers decide how to store the
resulting weight.
"""

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class StdpParams:
    """Exponential pair-rule parameters (time constants in ms)."""

    tau_plus: float = 5.0
    tau_minus: float = 5.0
    a_plus: float = 1.0
    a_minus: float = -1.0

    def __post_init__(self):
        if self.tau_plus <= 0 or self.tau_minus <= 0:
            raise ValueError("STDP time constants must be positive")


def stdp_kernel(dt: float, params: StdpParams) -> float:
    """Signed weight delta for a single pre/post pairing.

    dt = post_time - pre_time. Positive dt is potentiation, negative dt
    depression; dt == 0 contributes nothing (never produced by the training
    schedules, so any convention would be unobservable there).
    """
    if dt == 0:
        return 0.0
    if dt > 0:
        return params.a_plus * math.exp(-dt / params.tau_plus)
    return params.a_minus * math.exp(dt / params.tau_minus)


@dataclass
class SynapseHistory:
    """Per-synapse spike memory for the deferred pair rule.

    Buffers the last two pre-spike times and the last post-spike time --
    enough for nearest-neighbour pairing on schedules with at most two
    pre-spikes between consecutive posts. ``raw_delta`` accumulates every
    committed kernel value without clipping, which is what training-side
    sign assertions inspect.
    """

    pre_times: list = field(default_factory=list)
    post_time: int | None = None
    ltp_committed: bool = True
    ltd_committed: bool = True
    raw_delta: float = 0.0

    def _latest(self) -> float:
        t = -math.inf
        if self.pre_times:
            t = max(t, self.pre_times[-1])
        if self.post_time is not None:
            t = max(t, self.post_time)
        return t

    @property
    def pending(self) -> bool:
        """True while the buffered post spike has uncommitted pairings."""
        return self.post_time is not None and not (
            self.ltp_committed and self.ltd_committed
        )

    def note_post(self, t_post: int) -> None:
        """Record a post-synaptic spike (replaces any older buffered post)."""
        if t_post < self._latest():
            raise ValueError(f"post spike at {t_post} is out of order")
        self.post_time = t_post
        # LTP can only ever pair with an already-seen earlier pre-spike.
        self.ltp_committed = not any(p <= t_post for p in self.pre_times)
        self.ltd_committed = False


def process_pre_spike(
    history: SynapseHistory,
    t_pre: int,
    params: StdpParams,
    w: float,
    w_max: float = 16.0,
) -> tuple[float, SynapseHistory]:
    """Handle a pre-spike arrival on a plastic synapse.

    If the trigger condition holds (at least one pre-spike and one post-spike
    already in memory) the pending pairings for the buffered post spike are
    committed: LTP against the nearest earlier pre, LTD against this pre when
    it is the first to follow the post. The summed delta is applied additively
    and the stored weight clipped to [0, w_max]. Otherwise the spike is merely
    recorded.

    Returns the updated weight and the (mutated) history.
    """
    if t_pre <= history._latest():
        raise ValueError(f"pre spike at {t_pre} is out of order")

    delta = 0.0
    if history.pre_times and history.post_time is not None:
        if not history.ltp_committed:
            earlier = [p for p in history.pre_times if p <= history.post_time]
            delta += stdp_kernel(history.post_time - max(earlier), params)
            history.ltp_committed = True
        if not history.ltd_committed and t_pre > history.post_time:
            # The earliest pre-spike after the post is its nearest-neighbour
            # partner; usually that is the arriving spike itself, unless an
            # earlier arrival could not trigger processing.
            later = [p for p in history.pre_times if p > history.post_time]
            partner = min(later) if later else t_pre
            delta += stdp_kernel(history.post_time - partner, params)
            history.ltd_committed = True

    history.pre_times.append(t_pre)
    if len(history.pre_times) > 2:
        del history.pre_times[0]

    if delta != 0.0:
        history.raw_delta += delta
        w = min(max(w + delta, 0.0), w_max)
    return w, history
