from collections import Counter

import numpy as np
import pytest

from cipher.src.codec import parse_hex
from leakage.src.countermeasures import inject_random_instructions, lowpass, lowpass_filter, \
    shuffle_lane_events, shuffle_sbox_events
from leakage.src.events import CipherId, EventSchedule, EventTag, ScheduleProfile, build_event_schedule
from leakage.src.traces import PowerTrace
from randomness.src.prng import Rng
from randomness.src.quality import chi_square_uniformity
from tracelab.src.errors import ConfigurationError

KEY = parse_hex("67 76 89 79 88 98 A6 57 65 F7 65 77 5B 87 68 8C")
PLAINTEXT = parse_hex("00112233445566778899aabbccddeeff")


class IdentityRng(Rng):
    def permutation(self, n: int) -> list[int]:
        return list(range(n))


def aes_schedule(profile: str = "aes_full") -> EventSchedule:
    return build_event_schedule(CipherId.AES128, PLAINTEXT, KEY, ScheduleProfile.by_name(profile))


def test_no_injection_keeps_schedule() -> None:
    schedule = aes_schedule()
    assert inject_random_instructions(schedule, 0, EventTag.SBOX_LOAD, Rng.from_seed(1)).events == schedule.events


def test_injection_inserts_before_first_sbox_load() -> None:
    schedule = aes_schedule()
    rng = Rng.from_seed(5)
    for _ in range(50):
        injected = inject_random_instructions(schedule, 7, EventTag.SBOX_LOAD, rng)
        added = len(injected) - len(schedule)
        assert 0 <= added <= 7
        assert injected.events[:32] == schedule.events[:32]
        assert all(event.tag == EventTag.RANDOM_FILLER for event in injected.events[32:32 + added])
        assert injected.events[32 + added:] == schedule.events[32:]
        assert len(injected.in_window()) == 64 + added


def test_injection_count_is_uniform() -> None:
    schedule = aes_schedule()
    rng = Rng.from_seed(6)
    counts = [len(inject_random_instructions(schedule, 7, EventTag.SBOX_LOAD, rng)) - 64 for _ in range(10_000)]
    assert set(counts) == set(range(8))
    _, passed = chi_square_uniformity(np.array(counts), 8, value_range=(0, 8))
    assert passed


def test_injection_is_deterministic() -> None:
    schedule = aes_schedule()
    first = inject_random_instructions(schedule, 15, EventTag.SBOX_LOAD, Rng.from_seed(9))
    second = inject_random_instructions(schedule, 15, EventTag.SBOX_LOAD, Rng.from_seed(9))
    assert first.events == second.events


def test_injection_needs_position_tag() -> None:
    with pytest.raises(ConfigurationError):
        inject_random_instructions(aes_schedule("aes_xor_only"), 3, EventTag.SBOX_LOAD, Rng.from_seed(1))


def test_identity_shuffle_keeps_order() -> None:
    schedule = aes_schedule()
    assert shuffle_sbox_events(schedule, IdentityRng.from_seed(1)).events == schedule.events


def test_shuffle_keeps_pairs_and_values() -> None:
    schedule = aes_schedule()
    shuffled = shuffle_sbox_events(schedule, Rng.from_seed(2))
    assert shuffled.events[:32] == schedule.events[:32]
    assert Counter(shuffled.events) == Counter(schedule.events)
    for load, store in zip(shuffled.events[32::2], shuffled.events[33::2]):
        assert load.tag == EventTag.SBOX_LOAD and store.tag == EventTag.SBOX_STORE
        assert load.lane == store.lane and load.value == store.value


def test_shuffle_slot_zero_is_uniform() -> None:
    schedule = aes_schedule()
    rng = Rng.from_seed(3)
    draws = 100_000
    first_lanes = Counter(shuffle_sbox_events(schedule, rng).events[32].lane for _ in range(draws))
    for lane in range(16):
        assert first_lanes[lane] / draws == pytest.approx(1 / 16, abs=0.005)


def test_shuffle_sbox_loads_without_stores() -> None:
    schedule = aes_schedule("aes_sbox_load")
    rng = Rng.from_seed(6)
    orders = set()
    for _ in range(20):
        shuffled = shuffle_sbox_events(schedule, rng)
        window = shuffled.in_window()
        assert all(event.tag == EventTag.SBOX_LOAD for event in window)
        assert sorted(event.lane for event in window) == list(range(16))
        assert Counter(window) == Counter(schedule.in_window())
        assert shuffled.events[:16] == schedule.events[:16]
        orders.add(tuple(event.lane for event in window))
    assert len(orders) > 1


def test_shuffle_needs_sbox_events() -> None:
    with pytest.raises(ConfigurationError):
        shuffle_sbox_events(aes_schedule("aes_xor_only"), Rng.from_seed(1))


def test_speck_group_shuffle() -> None:
    schedule = build_event_schedule(CipherId.SPECK_PHASE1, PLAINTEXT, KEY, ScheduleProfile.by_name("speck_phase1"))
    shuffled = shuffle_lane_events(schedule, (EventTag.SPECK_R1_LOAD_M1,), Rng.from_seed(4))
    assert sorted(event.lane for event in shuffled.in_window()) == list(range(8))
    assert Counter(shuffled.events) == Counter(schedule.events)


def test_lowpass_identity_and_dc_gain() -> None:
    x = np.array([3.0, -1.0, 4.0, 1.0, -5.0])
    assert np.array_equal(lowpass(x, 0.0), x)
    assert np.allclose(lowpass(np.full(20, 2.5), 0.9), 2.5)


def test_lowpass_impulse_response() -> None:
    smoothing = 0.6
    impulse = np.zeros(10)
    impulse[1] = 1.0
    response = lowpass(impulse, smoothing)
    expected = [0.0] + [(1 - smoothing) * smoothing ** k for k in range(9)]
    assert response == pytest.approx(expected)


def test_lowpass_is_linear() -> None:
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=(2, 50))
    left = lowpass(2.0 * x + 3.0 * y, 0.5)
    right = 2.0 * lowpass(x, 0.5) + 3.0 * lowpass(y, 0.5)
    assert np.allclose(left, right, atol=1e-12)


def test_lowpass_filter_trace() -> None:
    trace = PowerTrace(np.arange(8, dtype=np.float64), PLAINTEXT)
    filtered = lowpass_filter(trace, 0.5)
    assert len(filtered) == len(trace)
    assert filtered.plaintext == PLAINTEXT
    with pytest.raises(ConfigurationError):
        lowpass_filter(trace, 1.0)
    with pytest.raises(ConfigurationError):
        lowpass_filter(trace, -0.1)


def test_lowpass_starts_at_rest() -> None:
    x = np.array([[4.0, 0.0], [2.0, 2.0]])
    y = lowpass(x, 0.5, rest=0.0)
    assert y[:, 0].tolist() == [2.0, 1.0]
    assert y[:, 1].tolist() == [1.0, 1.5]
