from typing import Any

import numpy as np
import pytest

from cipher.src.codec import parse_hex
from leakage.src.countermeasures import lowpass
from leakage.src.events import CipherId, EventSchedule, EventTag, LeakageEvent, ScheduleProfile, \
    build_event_schedule
from leakage.src.settings import CountermeasureSettings, NoiseConfig, SimulationSettings
from leakage.src.synth import random_plaintexts, render_leakage, synthesize_trace, synthesize_trace_set
from randomness.src.prng import Rng, StreamPurpose
from tracelab.src.errors import ConfigurationError

KEY = parse_hex("67 76 89 79 88 98 A6 57 65 F7 65 77 5B 87 68 8C")


def single_event(value: int, tag: EventTag = EventTag.ARK_STORE) -> EventSchedule:
    return EventSchedule([LeakageEvent(value, tag, 0)], (tag, tag))


def aes_settings(profile: str = "aes_full", sigma: float = 1.0, **countermeasures: Any) -> SimulationSettings:
    return SimulationSettings(ScheduleProfile.by_name(profile), KEY, NoiseConfig(sigma=sigma),
                              CountermeasureSettings(**countermeasures))


def test_noiseless_full_byte() -> None:
    noise = NoiseConfig(alpha=1.0, baseline=0.0, sigma=0.0, samples_per_event=2, filler_gap=3)
    trace = synthesize_trace(single_event(0xFF), noise, Rng.from_seed(1))
    assert trace.samples.tolist() == [8.0, 8.0, 0.0, 0.0, 0.0]


def test_noiseless_zero_byte_is_baseline() -> None:
    noise = NoiseConfig(baseline=1.25, sigma=0.0)
    trace = synthesize_trace(single_event(0x00), noise, Rng.from_seed(1))
    assert np.all(trace.samples == 1.25)


def test_loads_leak_with_load_gain() -> None:
    noise = NoiseConfig(sigma=0.0, load_gain=1.5)
    trace = synthesize_trace(single_event(0xFF, EventTag.PLAINTEXT_LOAD), noise, Rng.from_seed(1))
    assert trace.samples[0] == 12.0


def test_default_load_gain() -> None:
    noise = NoiseConfig(sigma=0.0)
    load = synthesize_trace(single_event(0x0F, EventTag.SBOX_LOAD), noise, Rng.from_seed(1))
    store = synthesize_trace(single_event(0x0F, EventTag.SBOX_STORE), noise, Rng.from_seed(1))
    assert load.samples[0] == 6.0
    assert store.samples[0] == 4.0


def test_unit_load_gain_is_plain_hamming_weight() -> None:
    noise = NoiseConfig(sigma=0.0, load_gain=1.0)
    load = synthesize_trace(single_event(0x0F, EventTag.SBOX_LOAD), noise, Rng.from_seed(1))
    store = synthesize_trace(single_event(0x0F, EventTag.SBOX_STORE), noise, Rng.from_seed(1))
    assert load.samples[0] == store.samples[0] == 4.0


def test_noise_averages_out() -> None:
    plaintexts = np.tile(np.arange(16, dtype=np.uint8), (10_000, 1))
    settings = aes_settings("aes_xor_only", sigma=1.0)
    noisy = synthesize_trace_set(settings, plaintexts, seed=3)
    noiseless = synthesize_trace_set(aes_settings("aes_xor_only", sigma=0.0), plaintexts[:1], seed=3)
    assert abs(noisy.samples[:, 0].mean() - noiseless.samples[0, 0]) < 3 * 1.0 / np.sqrt(10_000)


def test_set_is_deterministic() -> None:
    plaintexts = random_plaintexts(50, seed=1)
    first = synthesize_trace_set(aes_settings(), plaintexts, seed=7)
    second = synthesize_trace_set(aes_settings(), plaintexts, seed=7)
    assert first == second
    assert first.samples.tobytes() == second.samples.tobytes()
    assert synthesize_trace_set(aes_settings(), plaintexts, seed=8) != first


def test_out_of_order_regeneration() -> None:
    plaintexts = random_plaintexts(40, seed=2)
    settings = aes_settings(injection_max=3, shuffle=True)
    full = synthesize_trace_set(settings, plaintexts, seed=11)
    part = synthesize_trace_set(settings, plaintexts[25:], seed=11, first_index=25)
    assert np.array_equal(part.samples, full.samples[25:])


def test_schedule_replay() -> None:
    plaintexts = random_plaintexts(20, seed=3)
    traces = synthesize_trace_set(aes_settings(sigma=0.0), plaintexts, seed=1)
    profile = ScheduleProfile.by_name("aes_full")
    for i in range(20):
        schedule = build_event_schedule(CipherId.AES128, plaintexts[i].tobytes(), KEY, profile)
        assert np.array_equal(traces.samples[i], render_leakage(schedule, NoiseConfig(sigma=0.0)))


def test_single_byte_change_only_moves_its_events() -> None:
    base = np.arange(16, dtype=np.uint8)
    changed = base.copy()
    changed[3] ^= 0x5A
    traces = synthesize_trace_set(aes_settings(sigma=0.0), np.stack([base, changed]), seed=1)
    differing = set(np.nonzero(traces.samples[0] != traces.samples[1])[0].tolist())
    # plaintext load, AddRoundKey store and the Sbox pair of byte 3
    assert differing <= {4 * 3, 4 * 19, 4 * 38, 4 * 39}
    assert differing


def test_injection_keeps_sets_rectangular() -> None:
    traces = synthesize_trace_set(aes_settings(injection_max=7), random_plaintexts(30, seed=4), seed=5)
    assert traces.samples_per_trace == (64 + 7) * 4


def test_trace_matches_set_row() -> None:
    plaintexts = random_plaintexts(5, seed=6)
    settings = aes_settings("aes_no_load", sigma=0.7)
    traces = synthesize_trace_set(settings, plaintexts, seed=21)
    schedule = build_event_schedule(CipherId.AES128, plaintexts[4].tobytes(), KEY, settings.profile)
    single = synthesize_trace(schedule, settings.noise, Rng.from_seed(21, 4, StreamPurpose.NOISE),
                              plaintext=plaintexts[4].tobytes())
    assert single.samples == pytest.approx(traces.samples[4], abs=1e-9)


def test_filter_acts_before_noise() -> None:
    plaintexts = random_plaintexts(10, seed=7)
    smooth = synthesize_trace_set(aes_settings(sigma=0.0, lowpass_lambda=0.5), plaintexts, seed=1)
    raw = synthesize_trace_set(aes_settings(sigma=0.0), plaintexts, seed=1)
    assert np.allclose(smooth.samples, lowpass(raw.samples, 0.5, rest=0.0))


def test_inverted_measurement() -> None:
    plaintexts = random_plaintexts(10, seed=8)
    settings = aes_settings()
    inverted = aes_settings()
    inverted.noise = NoiseConfig(invert=True)
    assert np.allclose(synthesize_trace_set(inverted, plaintexts, seed=2).samples,
                       -synthesize_trace_set(settings, plaintexts, seed=2).samples)


def test_averaging_reduces_noise() -> None:
    plaintexts = np.zeros((4000, 16), dtype=np.uint8)
    settings = aes_settings("aes_xor_only", sigma=2.0)
    settings.noise = NoiseConfig(sigma=2.0, averaging=4)
    traces = synthesize_trace_set(settings, plaintexts, seed=9)
    assert float(np.std(traces.samples[:, 1])) == pytest.approx(1.0, rel=0.1)


def test_parallel_activity_adds_variance() -> None:
    plaintexts = np.zeros((2000, 16), dtype=np.uint8)
    quiet = synthesize_trace_set(aes_settings("aes_xor_only", sigma=0.0), plaintexts, seed=1)
    busy = synthesize_trace_set(aes_settings("aes_xor_only", sigma=0.0, parallel_activity=2), plaintexts, seed=1)
    assert float(np.var(quiet.samples[:, 1])) == 0.0
    # two independent bytes, each with Hamming weight variance 2
    assert float(np.var(busy.samples[:, 1])) == pytest.approx(4.0, rel=0.15)


def test_metadata_has_no_key() -> None:
    traces = synthesize_trace_set(aes_settings(), random_plaintexts(3, seed=1), seed=4)
    assert traces.meta["seed"] == 4
    assert "key" not in traces.meta
    assert traces.cipher_id == CipherId.AES128


def test_bad_noise_config() -> None:
    with pytest.raises(ConfigurationError):
        NoiseConfig(alpha=0.0)
    with pytest.raises(ConfigurationError):
        NoiseConfig(samples_per_event=0)
    with pytest.raises(ConfigurationError):
        CountermeasureSettings(lowpass_lambda=1.0)
