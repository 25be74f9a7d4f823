"""
Deterministic randomness for the whole lab.

Every random draw in a simulation comes from xorshift64* states derived from a
single user seed, so a run is reproducible from its seed alone. The scalar
functions and the vectorised GeneratorBank produce identical streams.
"""
import math
from typing import Iterable

import numpy as np

from randomness.src.constants import SPLITMIX_INCREMENT, SPLITMIX_MULTIPLIER_1, SPLITMIX_MULTIPLIER_2, \
    XORSHIFT_MULTIPLIER, XORSHIFT_SHIFTS, ZERO_SEED_REPLACEMENT

MASK64 = (1 << 64) - 1
TWO_POW_53 = float(1 << 53)

_S1, _S2, _S3 = XORSHIFT_SHIFTS


class StreamPurpose:
    # schedule randomness (injection counts, shuffles, filler values)
    SCHEDULE = 0
    # measurement noise
    NOISE = 1
    # simulated device activity on the shared supply line
    PARALLEL = 2
    # plaintext generation
    PLAINTEXT = 3
    # entropy sources of the seed generator
    SOURCE = 4


class GeneratorState:
    def __init__(self, value: int) -> None:
        value &= MASK64
        self.value = value if value != 0 else ZERO_SEED_REPLACEMENT

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorState):
            return NotImplemented
        return self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __repr__(self) -> str:
        return f"GeneratorState({self.value:#018x})"


def prng_next(state: GeneratorState) -> tuple[int, GeneratorState]:
    x = state.value
    x ^= x >> _S1
    x ^= (x << _S2) & MASK64
    x ^= x >> _S3
    return (x * XORSHIFT_MULTIPLIER) & MASK64, GeneratorState(x)


def splitmix64(x: int) -> int:
    z = (x + SPLITMIX_INCREMENT) & MASK64
    z = ((z ^ (z >> 30)) * SPLITMIX_MULTIPLIER_1) & MASK64
    z = ((z ^ (z >> 27)) * SPLITMIX_MULTIPLIER_2) & MASK64
    return z ^ (z >> 31)


def derive_substream(seed: int, index: int, purpose: int = StreamPurpose.SCHEDULE) -> GeneratorState:
    """
    State for stream (seed, index, purpose). Distinct indices and purposes
    give unrelated streams, so trace i can be regenerated on its own.
    """
    tag = splitmix64(((purpose & 0xFFFF) << 48) ^ (index & ((1 << 48) - 1)))
    return GeneratorState(splitmix64((seed & MASK64) ^ tag))


class Rng:
    """
    Mutable owner of one generator state, for code that draws a few values
    at a time (schedules, shuffles).
    """

    def __init__(self, state: GeneratorState) -> None:
        self.state = state

    @classmethod
    def from_seed(cls, seed: int, index: int = 0, purpose: int = StreamPurpose.SCHEDULE) -> "Rng":
        return cls(derive_substream(seed, index, purpose))

    def next_u64(self) -> int:
        value, self.state = prng_next(self.state)
        return value

    def below(self, n: int) -> int:
        """
        Uniform integer in [0, n) from the top 32 bits, for n <= 2^32.
        """
        assert 0 < n <= 1 << 32
        return ((self.next_u64() >> 32) * n) >> 32

    def next_byte(self) -> int:
        return self.next_u64() >> 56

    def uniform(self) -> float:
        return (self.next_u64() >> 11) / TWO_POW_53

    def gaussian(self) -> float:
        """
        Box-Muller on two consecutive outputs x, y:
        u1 = ((x >> 11) + 1) / 2^53, u2 = (y >> 11) / 2^53,
        z = sqrt(-2 ln u1) * cos(2 pi u2). One normal per pair.
        """
        u1 = ((self.next_u64() >> 11) + 1) / TWO_POW_53
        u2 = (self.next_u64() >> 11) / TWO_POW_53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def permutation(self, n: int) -> list[int]:
        """
        Fisher-Yates shuffle of range(n).
        """
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            order[i], order[j] = order[j], order[i]
        return order


class GeneratorBank:
    """
    Many generator states stepped together. Column t of a draw is output t
    of every stream, so bank.next_u64() over a set of substreams equals
    calling prng_next on each state one by one.
    """

    def __init__(self, states: np.ndarray) -> None:
        assert states.dtype == np.uint64
        assert not np.any(states == 0), "zero states must be remapped before use"
        self.states = states.copy()

    @classmethod
    def from_substreams(cls, seed: int, indices: Iterable[int],
                        purpose: int = StreamPurpose.NOISE) -> "GeneratorBank":
        return cls(np.array([derive_substream(seed, i, purpose).value for i in indices], dtype=np.uint64))

    def __len__(self) -> int:
        return len(self.states)

    def next_u64(self) -> np.ndarray:
        x = self.states.copy()
        x ^= x >> np.uint64(_S1)
        x ^= x << np.uint64(_S2)
        x ^= x >> np.uint64(_S3)
        self.states = x
        with np.errstate(over='ignore'):
            return x * np.uint64(XORSHIFT_MULTIPLIER)

    def uniform(self) -> np.ndarray:
        return (self.next_u64() >> np.uint64(11)).astype(np.float64) / TWO_POW_53

    def next_byte(self) -> np.ndarray:
        return (self.next_u64() >> np.uint64(56)).astype(np.uint8)

    def gaussian(self) -> np.ndarray:
        u1 = ((self.next_u64() >> np.uint64(11)) + np.uint64(1)).astype(np.float64) / TWO_POW_53
        u2 = (self.next_u64() >> np.uint64(11)).astype(np.float64) / TWO_POW_53
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
