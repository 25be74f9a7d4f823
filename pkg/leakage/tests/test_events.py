import pytest

from cipher.src.codec import parse_hex
from leakage.src.events import CipherId, EventSchedule, EventTag, LeakageEvent, ScheduleProfile, \
    build_event_schedule
from tracelab.src.errors import ConfigurationError

KEY = parse_hex("67 76 89 79 88 98 A6 57 65 F7 65 77 5B 87 68 8C")
PLAINTEXT = parse_hex("00112233445566778899aabbccddeeff")


def test_aes_equal_plaintext_and_key_gives_zero_ark() -> None:
    schedule = build_event_schedule(CipherId.AES128, KEY, KEY, ScheduleProfile.by_name("aes_full"))
    ark = [event.value for event in schedule.events if event.tag == EventTag.ARK_STORE]
    assert ark == [0] * 16


def test_aes_full_profile_layout() -> None:
    schedule = build_event_schedule(CipherId.AES128, PLAINTEXT, KEY, ScheduleProfile.by_name("aes_full"))
    assert len(schedule) == 64
    assert len(schedule.in_window()) == 64
    tags = [event.tag for event in schedule.events]
    assert tags[:16] == [EventTag.PLAINTEXT_LOAD] * 16
    assert tags[16:32] == [EventTag.ARK_STORE] * 16
    assert tags[32:] == [EventTag.SBOX_LOAD, EventTag.SBOX_STORE] * 16
    assert [event.value for event in schedule.events[:16]] == list(PLAINTEXT)
    # each table load returns the value that is stored next
    for load, store in zip(schedule.events[32::2], schedule.events[33::2]):
        assert load.value == store.value and load.lane == store.lane


@pytest.mark.parametrize("name, count", [("aes_no_load", 48), ("aes_sbox_load", 16),
                                         ("aes_xor_with_load", 32), ("aes_xor_only", 16)])
def test_aes_reduced_profiles(name: str, count: int) -> None:
    schedule = build_event_schedule(CipherId.AES128, PLAINTEXT, KEY, ScheduleProfile.by_name(name))
    assert len(schedule.in_window()) == count


def test_no_load_profile_omits_only_loads() -> None:
    full = build_event_schedule(CipherId.AES128, PLAINTEXT, KEY, ScheduleProfile.by_name("aes_full"))
    no_load = build_event_schedule(CipherId.AES128, PLAINTEXT, KEY, ScheduleProfile.by_name("aes_no_load"))
    assert no_load.events == full.events[16:]


def test_speck_zero_k2_r1_equals_t() -> None:
    key = bytes(range(8)) + bytes(8)
    schedule = build_event_schedule(CipherId.SPECK_PHASE1, PLAINTEXT, key, ScheduleProfile.by_name("speck_phase1"))
    t = [event.value for event in schedule.events if event.tag == EventTag.SPECK_T_STORE]
    r1 = [event.value for event in schedule.events if event.tag == EventTag.SPECK_R1_STORE]
    assert r1 == t


def test_speck_limbs_least_significant_first() -> None:
    plaintext = bytes(8) + bytes(8)
    key = bytes(8) + parse_hex("0706050403020100", 8)
    schedule = build_event_schedule(CipherId.SPECK_PHASE1, plaintext, key, ScheduleProfile.by_name("speck_phase1"))
    window = schedule.in_window()
    assert [event.tag for event in window] == [EventTag.SPECK_R1_LOAD_M1] * 8
    # t = 0 so r1 = K2
    assert [event.value for event in window] == list(range(8))
    assert [event.lane for event in window] == list(range(8))


def test_speck_sixteen_bit_limbs() -> None:
    key = bytes(8) + parse_hex("0706050403020100", 8)
    profile = ScheduleProfile.by_name("speck_phase1", limb_width=16)
    schedule = build_event_schedule(CipherId.SPECK_PHASE1, bytes(16), key, profile)
    window = schedule.in_window()
    assert [event.value for event in window] == [0x0100, 0x0302, 0x0504, 0x0706]
    assert profile.lanes == 4


def test_speck_windows() -> None:
    phase1_xor = build_event_schedule(CipherId.SPECK_PHASE1, PLAINTEXT, KEY,
                                      ScheduleProfile.by_name("speck_phase1_xor"))
    assert {event.tag for event in phase1_xor.in_window()} == {EventTag.SPECK_T_STORE, EventTag.SPECK_R1_STORE}
    phase2 = build_event_schedule(CipherId.SPECK_PHASE2, PLAINTEXT, KEY, ScheduleProfile.by_name("speck_phase2"))
    assert {event.tag for event in phase2.in_window()} == {EventTag.SPECK_R2_LOAD_M2}


def test_fillers_in_front_of_window_belong_to_it() -> None:
    events = [LeakageEvent(1, EventTag.ARK_STORE, 0), LeakageEvent(2, EventTag.RANDOM_FILLER, 0),
              LeakageEvent(3, EventTag.SBOX_LOAD, 0), LeakageEvent(3, EventTag.SBOX_STORE, 0)]
    schedule = EventSchedule(events, (EventTag.SBOX_LOAD, EventTag.SBOX_STORE))
    assert schedule.window_bounds() == (1, 4)


def test_unknown_profile() -> None:
    with pytest.raises(ConfigurationError):
        ScheduleProfile.by_name("aes_everything")


def test_profile_cipher_mismatch() -> None:
    with pytest.raises(ConfigurationError):
        build_event_schedule(CipherId.SPECK_PHASE2, PLAINTEXT, KEY, ScheduleProfile.by_name("speck_phase1"))
    with pytest.raises(ConfigurationError):
        ScheduleProfile.by_name("aes_full", limb_width=16)


def test_sbox_load_profile_has_no_stores_to_shuffle() -> None:
    profile = ScheduleProfile.by_name("aes_sbox_load")
    schedule = build_event_schedule(CipherId.AES128, PLAINTEXT, KEY, profile)
    assert [event.tag for event in schedule.in_window()] == [EventTag.SBOX_LOAD] * 16
    assert profile.shuffle_tags() == (EventTag.SBOX_LOAD,)
