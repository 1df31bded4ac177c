"""Spike-time and rate encodings of the 4-d feature vectors.

Times are in milliseconds, rates in Hz.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

N_CHANNELS = 4
MAX_EXPECTED_EVENTS = 10**7


class SpikeEvent(NamedTuple):
    neuron_id: int
    time: float


@dataclass(frozen=True)
class LatencyConfig:
    t_early: float = 0.0
    t_late: float = 1.0

    def __post_init__(self):
        if not (self.t_late > self.t_early >= 0):
            raise ValueError(f"need t_late > t_early >= 0, got {self.t_early}, {self.t_late}")


@dataclass(frozen=True)
class LifEncoderConfig:
    tau_m: float = 10.0
    theta_I: float = 1.0
    # f_k = 1 maps to I = 2 * theta_I, i.e. t = tau_m * ln 2
    i_scale: float = 2.0

    def __post_init__(self):
        if not (self.tau_m > 0 and self.theta_I > 0 and self.i_scale > 0):
            raise ValueError("tau_m, theta_I and i_scale must all be positive")


@dataclass(frozen=True)
class RateConfig:
    r_max: float = 100.0
    window: float = 100.0
    population_size: int = 1
    mode: str = "poisson"

    def __post_init__(self):
        if self.r_max <= 0 or self.window <= 0:
            raise ValueError("r_max and window must be positive")
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.mode not in ("continuous", "poisson", "regular"):
            raise ValueError(f"unknown rate mode {self.mode!r}")


def sort_events(events):
    return sorted(events, key=lambda e: (e.time, e.neuron_id))


def encode_latency(f, c=LatencyConfig()):
    span = c.t_late - c.t_early
    events = [SpikeEvent(k, c.t_early + fk * span) for k, fk in enumerate(f)]
    return sort_events(events)


def default_t_late(tau_m, tau_syn):
    """Recommended latest spike time, the sum of membrane and synaptic time constants."""
    if tau_m <= 0 or tau_syn <= 0:
        raise ValueError("tau_m and tau_syn must be positive")
    return tau_m + tau_syn


def lif_spike_time(current, tau_m, theta_I):
    """First spike time of a LIF neuron under constant current, or None below rheobase."""
    if current <= theta_I:
        return None
    return tau_m * math.log(current / (current - theta_I))


def encode_lif_current(f, c=LifEncoderConfig()):
    events = []
    for k, fk in enumerate(f):
        t = lif_spike_time(c.i_scale * fk, c.tau_m, c.theta_I)
        if t is not None:
            events.append(SpikeEvent(k, t))
    return sort_events(events)


def rates(f, c):
    """Per-channel rates r_max * f_k."""
    return [c.r_max * fk for fk in f]


def _poisson_times(rate_hz, window_ms, rng):
    times = []
    if rate_hz <= 0:
        return times
    rate_per_ms = rate_hz / 1000.0
    t = 0.0
    while True:
        t += rng.exponential(rate_per_ms)
        if t > window_ms:
            return times
        times.append(t)


def _regular_times(rate_hz, window_ms):
    if rate_hz <= 0:
        return []
    period = 1000.0 / rate_hz
    times = []
    j = 0
    while True:
        t = (j + 1) * period
        if t > window_ms:
            return times
        times.append(t)
        j += 1


def encode_rate(f, c=RateConfig(), rng=None):
    """Rate-code one feature vector.

    ``continuous`` returns a list of rates, one per neuron; the other modes
    return a time-sorted spike train. With ``population_size = n`` channel k
    owns neuron ids ``k*n .. k*n + n - 1``, all firing at rate r_max * f_k.
    """
    n = c.population_size
    rs = rates(f, c)
    if c.mode == "continuous":
        return [r for r in rs for _ in range(n)]
    if c.mode == "poisson":
        expected = c.r_max * c.window / 1000.0 * n * len(rs)
        if expected > MAX_EXPECTED_EVENTS:
            raise ValueError(f"expected {expected:.3g} Poisson events exceeds {MAX_EXPECTED_EVENTS}")
        if rng is None:
            raise ValueError("poisson mode needs an rng")
    events = []
    for k, r in enumerate(rs):
        for member in range(n):
            nid = k * n + member
            if c.mode == "poisson":
                times = _poisson_times(r, c.window, rng)
            else:
                times = _regular_times(r, c.window)
            events.extend(SpikeEvent(nid, t) for t in times)
    return sort_events(events)
