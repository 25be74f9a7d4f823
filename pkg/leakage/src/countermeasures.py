from typing import Optional

import numpy as np

from leakage.src.events import EventSchedule, EventTag, LeakageEvent
from leakage.src.settings import CountermeasureSettings
from leakage.src.traces import PowerTrace
from randomness.src.prng import Rng
from tracelab.src.errors import ConfigurationError


def inject_random_instructions(schedule: EventSchedule, n_max: int, position_tag: EventTag,
                               rng: Rng) -> EventSchedule:
    """
    Inserts u ~ Uniform{0..n_max} random byte accesses right before the first
    event bearing position_tag, delaying everything after it by u slots.
    """
    if n_max < 0:
        raise ConfigurationError(f"n_max must not be negative, got {n_max}")
    position = schedule.index_of(position_tag)
    if position is None:
        raise ConfigurationError(f"cannot inject before {position_tag.value}: no such event in the schedule")
    if n_max == 0:
        return schedule

    count = rng.below(n_max + 1)
    fillers = [LeakageEvent(rng.next_byte(), EventTag.RANDOM_FILLER, 0) for _ in range(count)]
    return schedule.with_events(schedule.events[:position] + fillers + schedule.events[position:])


def shuffle_lane_events(schedule: EventSchedule, tags: tuple[EventTag, ...], rng: Rng) -> EventSchedule:
    """
    Executes independent per-lane operations in a random order. The events
    carrying `tags` must form one contiguous block made of one group per
    lane (one event per tag, in tag order); a uniform permutation of the
    lanes is applied to the groups and each group stays intact.
    """
    positions = [i for i, event in enumerate(schedule.events) if event.tag in tags]
    if not positions:
        raise ConfigurationError(f"schedule has no {'/'.join(tag.value for tag in tags)} events to shuffle")
    start, end = positions[0], positions[-1] + 1
    if end - start != len(positions) or len(positions) % len(tags) != 0:
        raise ConfigurationError("events to shuffle are not one contiguous block of lane groups")

    block = schedule.events[start:end]
    groups = [block[i:i + len(tags)] for i in range(0, len(block), len(tags))]
    for group in groups:
        if tuple(event.tag for event in group) != tags or len({event.lane for event in group}) != 1:
            raise ConfigurationError("events to shuffle are not grouped per lane")

    order = rng.permutation(len(groups))
    shuffled = [event for slot in order for event in groups[slot]]
    return schedule.with_events(schedule.events[:start] + shuffled + schedule.events[end:])


def shuffle_sbox_events(schedule: EventSchedule, rng: Rng) -> EventSchedule:
    """
    Shuffles the Sbox lookups of an AES schedule, each load together with
    the store of its output when the schedule has Sbox stores.
    """
    if schedule.has_tag(EventTag.SBOX_STORE):
        return shuffle_lane_events(schedule, (EventTag.SBOX_LOAD, EventTag.SBOX_STORE), rng)
    return shuffle_lane_events(schedule, (EventTag.SBOX_LOAD,), rng)


def apply_schedule_countermeasures(schedule: EventSchedule, countermeasures: CountermeasureSettings,
                                   shuffle_tags: tuple[EventTag, ...], injection_tag: EventTag,
                                   rng: Rng) -> EventSchedule:
    # shuffle before injecting; fillers stay in front of the shuffled block
    if countermeasures.shuffle:
        schedule = shuffle_lane_events(schedule, shuffle_tags, rng)
    if countermeasures.injection_max > 0:
        schedule = inject_random_instructions(schedule, countermeasures.injection_max, injection_tag, rng)
    return schedule


def lowpass(samples: np.ndarray, smoothing: float, rest: Optional[float] = None) -> np.ndarray:
    """
    Single-pole recursive filter along the last axis:
    y_t = smoothing * y_{t-1} + (1 - smoothing) * x_t.
    The filter starts settled at `rest` (y_{-1} = rest), or at the first
    sample when no rest level is given.
    """
    if not 0.0 <= smoothing < 1.0:
        raise ConfigurationError(f"lowpass lambda must be in [0, 1), got {smoothing}")
    x = np.asarray(samples, dtype=np.float64)
    if smoothing == 0.0 or x.shape[-1] == 0:
        return x.copy()
    y = np.empty_like(x)
    previous = x[..., 0] if rest is None else np.full(x.shape[:-1], rest)
    y[..., 0] = smoothing * previous + (1.0 - smoothing) * x[..., 0]
    for t in range(1, x.shape[-1]):
        y[..., t] = smoothing * y[..., t - 1] + (1.0 - smoothing) * x[..., t]
    return y


def lowpass_filter(trace: PowerTrace, smoothing: float) -> PowerTrace:
    return PowerTrace(lowpass(trace.samples, smoothing), trace.plaintext)
