"""
Hamming-weight power trace synthesis.

A trace is a row of slots, one per in-window bus access. Each slot holds
samples_per_event samples of baseline + alpha * gain * HW(value) followed by
filler_gap samples of baseline, where gain is load_gain (1.5 by default) for
loads and 1 for stores. Traces are right-padded with empty slots up
to the largest window the configuration can produce, so every trace of a set
has the same length even when injected instructions delay the events.

Per acquisition the pipeline is: render the noiseless leakage, add the
activity of a parallel device, pass it through the power-line filter, add
measurement noise, and flip the sign for an inverted probe. Trace i draws
everything from substreams of (seed, i), so any subset of a set can be
regenerated on its own.
"""
import logging
from typing import Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from leakage.src.constants import ACQUISITION_PURPOSE_STRIDE
from leakage.src.countermeasures import apply_schedule_countermeasures, lowpass
from leakage.src.events import LOAD_TAGS, EventSchedule, LeakageEvent, build_event_schedule
from leakage.src.power_model import hamming_weight, hamming_weight_bytes
from leakage.src.settings import NoiseConfig, SimulationSettings
from leakage.src.traces import PowerTrace, TraceSet
from randomness.src.prng import GeneratorBank, Rng, StreamPurpose
from tracelab.src.errors import ConfigurationError

Plaintexts = Union[np.ndarray, Sequence[bytes]]


def event_amplitude(event: LeakageEvent, noise: NoiseConfig) -> float:
    gain = noise.load_gain if event.tag in LOAD_TAGS else 1.0
    return noise.alpha * gain * hamming_weight(event.value)


def render_leakage(schedule: EventSchedule, noise: NoiseConfig, max_events: Optional[int] = None) -> np.ndarray:
    events = schedule.in_window()
    if not events:
        raise ConfigurationError("capture window holds no events")
    if max_events is None:
        max_events = len(events)
    if len(events) > max_events:
        raise ConfigurationError(f"{len(events)} events do not fit in {max_events} slots")

    samples = np.full(max_events * noise.slot_width, noise.baseline, dtype=np.float64)
    for slot, event in enumerate(events):
        start = slot * noise.slot_width
        samples[start:start + noise.samples_per_event] += event_amplitude(event, noise)
    return samples


def synthesize_trace(schedule: EventSchedule, noise: NoiseConfig, rng: Rng, max_events: Optional[int] = None,
                     plaintext: bytes = bytes(16)) -> PowerTrace:
    """
    Renders one acquisition of a schedule and adds measurement noise.

    A store leaks baseline + alpha * HW(value). Loads (plaintext, Sbox and
    Speck operand loads) leak baseline + alpha * load_gain * HW(value), and
    load_gain defaults to 1.5 so loads stand out over the stores around them.
    NoiseConfig(load_gain=1.0) gives every access the plain Hamming-weight
    leakage.
    """
    samples = render_leakage(schedule, noise, max_events)
    if noise.sigma > 0:
        samples = samples + noise.sigma * np.array([rng.gaussian() for _ in range(len(samples))])
    if noise.invert:
        samples = -samples
    return PowerTrace(samples, plaintext)


def max_window_events(settings: SimulationSettings) -> int:
    """
    Largest number of in-window events any trace of this configuration can have.
    """
    reference = build_event_schedule(settings.cipher_id, bytes(16), settings.key, settings.profile)
    return len(reference.in_window()) + settings.countermeasures.injection_max


def as_plaintext_matrix(plaintexts: Plaintexts) -> np.ndarray:
    if isinstance(plaintexts, np.ndarray):
        matrix = plaintexts.astype(np.uint8)
    else:
        matrix = np.array([np.frombuffer(bytes(p), dtype=np.uint8) for p in plaintexts], dtype=np.uint8)
    if matrix.ndim != 2 or matrix.shape[1] != 16 or matrix.shape[0] < 1:
        raise ConfigurationError(f"expected at least one 16 byte plaintext, got shape {matrix.shape}")
    return matrix


def random_plaintexts(count: int, seed: int) -> np.ndarray:
    bank = GeneratorBank.from_substreams(seed, range(count), StreamPurpose.PLAINTEXT)
    words = np.stack([bank.next_u64(), bank.next_u64()], axis=1).astype(">u8")
    return words.view(np.uint8).reshape(count, 16)


def _acquire(settings: SimulationSettings, plaintexts: np.ndarray, seed: int, first_index: int,
             max_events: int, acquisition: int, progress: bool) -> np.ndarray:
    noise = settings.noise
    countermeasures = settings.countermeasures
    offset = acquisition * ACQUISITION_PURPOSE_STRIDE
    num_traces = len(plaintexts)
    indices = range(first_index, first_index + num_traces)
    shuffle_tags = settings.profile.shuffle_tags()
    injection_tag = settings.injection_tag()

    amplitudes = np.zeros((num_traces, max_events), dtype=np.float64)
    for row, index in enumerate(tqdm(indices, desc="Rendering traces", disable=not progress)):
        schedule = build_event_schedule(settings.cipher_id, plaintexts[row].tobytes(), settings.key,
                                        settings.profile)
        rng = Rng.from_seed(seed, index, StreamPurpose.SCHEDULE + offset)
        schedule = apply_schedule_countermeasures(schedule, countermeasures, shuffle_tags, injection_tag, rng)
        events = schedule.in_window()
        amplitudes[row, :len(events)] = [event_amplitude(event, noise) for event in events]

    pulses = np.zeros((num_traces, max_events, noise.slot_width), dtype=np.float64)
    pulses[:, :, :noise.samples_per_event] = amplitudes[:, :, None]
    samples = noise.baseline + pulses.reshape(num_traces, -1)

    if countermeasures.parallel_activity > 0:
        bank = GeneratorBank.from_substreams(seed, indices, StreamPurpose.PARALLEL + offset)
        for column in range(samples.shape[1]):
            for _ in range(countermeasures.parallel_activity):
                samples[:, column] += noise.alpha * hamming_weight_bytes(bank.next_byte())

    # the supply rests at the idle level before the trigger
    idle = noise.baseline + 4.0 * noise.alpha * countermeasures.parallel_activity
    samples = lowpass(samples, countermeasures.lowpass_lambda, rest=idle)

    if noise.sigma > 0:
        bank = GeneratorBank.from_substreams(seed, indices, StreamPurpose.NOISE + offset)
        for column in range(samples.shape[1]):
            samples[:, column] += noise.sigma * bank.gaussian()

    if noise.invert:
        samples = -samples
    return samples


def synthesize_trace_set(settings: SimulationSettings, plaintexts: Plaintexts, seed: int, first_index: int = 0,
                         progress: bool = False) -> TraceSet:
    matrix = as_plaintext_matrix(plaintexts)
    max_events = max_window_events(settings)
    logging.info(f"Synthesising {len(matrix)} traces of {max_events * settings.noise.slot_width} samples "
                 f"({settings.profile.name}, seed {seed})")

    total = np.zeros((len(matrix), max_events * settings.noise.slot_width), dtype=np.float64)
    for acquisition in range(settings.noise.averaging):
        total += _acquire(settings, matrix, seed, first_index, max_events, acquisition, progress)
    samples = total / settings.noise.averaging

    meta = {"seed": seed, "first_index": first_index, **settings.describe()}
    return TraceSet(samples, matrix, settings.cipher_id, meta)
