"""
Leakage events: the bus accesses of one encryption that the power model
turns into samples.
"""
from enum import Enum
from typing import Optional, Sequence

from cipher.src.aes import aes_round1_intermediates
from cipher.src.codec import block_to_words
from cipher.src.speck import speck_key_schedule, speck_round1_values, speck_round2_target
from tracelab.src.errors import ConfigurationError


class CipherId(Enum):
    AES128 = 0
    SPECK_PHASE1 = 1
    SPECK_PHASE2 = 2

    @property
    def is_speck(self) -> bool:
        return self != CipherId.AES128


class EventTag(Enum):
    PLAINTEXT_LOAD = "plaintext_load"
    ARK_STORE = "ark_store"
    SBOX_LOAD = "sbox_load"
    SBOX_STORE = "sbox_store"
    SPECK_T_STORE = "speck_t_store"
    SPECK_R1_STORE = "speck_r1_store"
    SPECK_R1_LOAD_M1 = "speck_r1_load_m1"
    SPECK_Y1_STORE = "speck_y1_store"
    SPECK_R2_STORE = "speck_r2_store"
    SPECK_R2_LOAD_M2 = "speck_r2_load_m2"
    RANDOM_FILLER = "random_filler"


LOAD_TAGS = frozenset({EventTag.PLAINTEXT_LOAD, EventTag.SBOX_LOAD,
                       EventTag.SPECK_R1_LOAD_M1, EventTag.SPECK_R2_LOAD_M2})

SPECK_TAG_ORDER = (EventTag.SPECK_T_STORE, EventTag.SPECK_R1_STORE, EventTag.SPECK_R1_LOAD_M1,
                   EventTag.SPECK_Y1_STORE, EventTag.SPECK_R2_STORE, EventTag.SPECK_R2_LOAD_M2)


class LeakageEvent:
    __slots__ = ("value", "tag", "lane")

    def __init__(self, value: int, tag: EventTag, lane: int) -> None:
        self.value = value
        self.tag = tag
        self.lane = lane

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LeakageEvent):
            return NotImplemented
        return (self.value, self.tag, self.lane) == (other.value, other.tag, other.lane)

    def __hash__(self) -> int:
        return hash((self.value, self.tag, self.lane))

    def __repr__(self) -> str:
        return f"LeakageEvent({self.value:#x}, {self.tag.value}, lane={self.lane})"


class EventSchedule:
    """
    Ordered bus accesses of one encryption plus the capture window.

    The window opens at the first event tagged capture_window[0] and closes
    after the last event tagged capture_window[1]. Random fillers sitting
    directly in front of the opening event are inside the window: they were
    executed after the trigger.
    """

    def __init__(self, events: Sequence[LeakageEvent], capture_window: tuple[EventTag, EventTag],
                 limb_width: int = 8) -> None:
        self.events = list(events)
        self.capture_window = capture_window
        self.limb_width = limb_width

    def with_events(self, events: Sequence[LeakageEvent]) -> "EventSchedule":
        return EventSchedule(events, self.capture_window, self.limb_width)

    def index_of(self, tag: EventTag) -> Optional[int]:
        for i, event in enumerate(self.events):
            if event.tag == tag:
                return i
        return None

    def has_tag(self, tag: EventTag) -> bool:
        return self.index_of(tag) is not None

    def window_bounds(self) -> tuple[int, int]:
        first_tag, last_tag = self.capture_window
        start = self.index_of(first_tag)
        end = None
        for i, event in enumerate(self.events):
            if event.tag == last_tag:
                end = i
        if start is None or end is None or end < start:
            raise ConfigurationError(
                f"capture window {first_tag.value}..{last_tag.value} does not match the schedule")
        while start > 0 and self.events[start - 1].tag == EventTag.RANDOM_FILLER:
            start -= 1
        return start, end + 1

    def in_window(self) -> list[LeakageEvent]:
        start, end = self.window_bounds()
        return self.events[start:end]

    def __len__(self) -> int:
        return len(self.events)


class ScheduleProfile:
    """
    Named choice of which accesses a simulated device performs and where its
    trigger sits.
    """

    # name -> (cipher, emitted tags, capture window)
    PROFILES: dict[str, tuple[CipherId, tuple[EventTag, ...], tuple[EventTag, EventTag]]] = {
        "aes_full": (CipherId.AES128,
                     (EventTag.PLAINTEXT_LOAD, EventTag.ARK_STORE, EventTag.SBOX_LOAD, EventTag.SBOX_STORE),
                     (EventTag.PLAINTEXT_LOAD, EventTag.SBOX_STORE)),
        "aes_no_load": (CipherId.AES128,
                        (EventTag.ARK_STORE, EventTag.SBOX_LOAD, EventTag.SBOX_STORE),
                        (EventTag.ARK_STORE, EventTag.SBOX_STORE)),
        "aes_sbox_load": (CipherId.AES128,
                          (EventTag.ARK_STORE, EventTag.SBOX_LOAD),
                          (EventTag.SBOX_LOAD, EventTag.SBOX_LOAD)),
        "aes_xor_with_load": (CipherId.AES128,
                              (EventTag.PLAINTEXT_LOAD, EventTag.ARK_STORE),
                              (EventTag.PLAINTEXT_LOAD, EventTag.ARK_STORE)),
        "aes_xor_only": (CipherId.AES128,
                         (EventTag.ARK_STORE,),
                         (EventTag.ARK_STORE, EventTag.ARK_STORE)),
        "speck_phase1": (CipherId.SPECK_PHASE1, SPECK_TAG_ORDER,
                         (EventTag.SPECK_R1_LOAD_M1, EventTag.SPECK_R1_LOAD_M1)),
        "speck_phase1_xor": (CipherId.SPECK_PHASE1, SPECK_TAG_ORDER,
                             (EventTag.SPECK_T_STORE, EventTag.SPECK_R1_STORE)),
        "speck_phase2": (CipherId.SPECK_PHASE2, SPECK_TAG_ORDER,
                         (EventTag.SPECK_R2_LOAD_M2, EventTag.SPECK_R2_LOAD_M2)),
    }

    def __init__(self, name: str, cipher_id: CipherId, tags: tuple[EventTag, ...],
                 capture_window: tuple[EventTag, EventTag], limb_width: int = 8) -> None:
        if limb_width not in (8, 16) or (limb_width == 16 and not cipher_id.is_speck):
            raise ConfigurationError(f"profile {name} does not support {limb_width} bit limbs")
        self.name = name
        self.cipher_id = cipher_id
        self.tags = tags
        self.capture_window = capture_window
        self.limb_width = limb_width

    @classmethod
    def by_name(cls, name: str, limb_width: int = 8) -> "ScheduleProfile":
        if name not in cls.PROFILES:
            raise ConfigurationError(f"unknown schedule profile {name!r}; known: {', '.join(cls.PROFILES)}")
        cipher_id, tags, window = cls.PROFILES[name]
        return cls(name, cipher_id, tags, window, limb_width)

    @property
    def lanes(self) -> int:
        return 16 if self.cipher_id == CipherId.AES128 else 64 // self.limb_width

    def default_injection_tag(self) -> EventTag:
        match self.cipher_id:
            case CipherId.AES128:
                return EventTag.SBOX_LOAD
            case _:
                return self.capture_window[0]

    def shuffle_tags(self) -> tuple[EventTag, ...]:
        match self.cipher_id:
            case CipherId.AES128 if EventTag.SBOX_STORE in self.tags:
                return (EventTag.SBOX_LOAD, EventTag.SBOX_STORE)
            case CipherId.AES128:
                return (EventTag.SBOX_LOAD,)
            case CipherId.SPECK_PHASE1:
                return (EventTag.SPECK_R1_LOAD_M1,)
            case CipherId.SPECK_PHASE2:
                return (EventTag.SPECK_R2_LOAD_M2,)
        raise ConfigurationError(f"no shuffle tags for {self.cipher_id}")

    def to_dict(self) -> dict[str, object]:
        return {"name": self.name, "limb_width": self.limb_width}


def _limb_events(word: int, tag: EventTag, limb_width: int) -> list[LeakageEvent]:
    mask = (1 << limb_width) - 1
    return [LeakageEvent((word >> (limb_width * lane)) & mask, tag, lane) for lane in range(64 // limb_width)]


def build_event_schedule(cipher_id: CipherId, plaintext: bytes, key: bytes,
                         profile: ScheduleProfile) -> EventSchedule:
    """
    Bus accesses of one encryption under the profile.

    AES: 16 plaintext loads, 16 AddRoundKey stores, then per byte the Sbox
    table load followed by the store of its output when the profile has
    one. Speck: limb groups for t, r1 (store and the M1 load), y1, r2 (store
    and the M2 load) of the first two rounds, least significant limb first
    within each group.
    """
    if cipher_id != profile.cipher_id:
        raise ConfigurationError(f"profile {profile.name} is for {profile.cipher_id.name}, not {cipher_id.name}")

    events: list[LeakageEvent] = []
    if cipher_id == CipherId.AES128:
        ark, sbox_out = aes_round1_intermediates(plaintext, key)
        if EventTag.PLAINTEXT_LOAD in profile.tags:
            events.extend(LeakageEvent(plaintext[b], EventTag.PLAINTEXT_LOAD, b) for b in range(16))
        if EventTag.ARK_STORE in profile.tags:
            events.extend(LeakageEvent(ark[b], EventTag.ARK_STORE, b) for b in range(16))
        if EventTag.SBOX_LOAD in profile.tags:
            for b in range(16):
                events.append(LeakageEvent(sbox_out[b], EventTag.SBOX_LOAD, b))
                if EventTag.SBOX_STORE in profile.tags:
                    events.append(LeakageEvent(sbox_out[b], EventTag.SBOX_STORE, b))
    else:
        pt1, pt2 = block_to_words(plaintext)
        k1, k2 = block_to_words(key)
        t, r1, y1 = speck_round1_values(pt1, pt2, k2)
        r2 = speck_round2_target(r1, y1) ^ speck_key_schedule(k1, k2).k_prime
        words = {
            EventTag.SPECK_T_STORE: t,
            EventTag.SPECK_R1_STORE: r1,
            EventTag.SPECK_R1_LOAD_M1: r1,
            EventTag.SPECK_Y1_STORE: y1,
            EventTag.SPECK_R2_STORE: r2,
            EventTag.SPECK_R2_LOAD_M2: r2,
        }
        for tag in SPECK_TAG_ORDER:
            if tag in profile.tags:
                events.extend(_limb_events(words[tag], tag, profile.limb_width))

    return EventSchedule(events, profile.capture_window, profile.limb_width)
