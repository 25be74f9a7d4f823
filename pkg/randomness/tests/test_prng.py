import numpy as np
import pytest

from randomness.src.constants import ZERO_SEED_REPLACEMENT
from randomness.src.prng import GeneratorBank, GeneratorState, Rng, StreamPurpose, derive_substream, prng_next
from randomness.src.quality import chi_square_uniformity, spectral_flatness


def outputs(seed: int, count: int) -> list[int]:
    state = GeneratorState(seed)
    values = []
    for _ in range(count):
        value, state = prng_next(state)
        values.append(value)
    return values


def test_same_seed_same_stream() -> None:
    assert outputs(12345, 1000) == outputs(12345, 1000)
    assert outputs(12345, 10) != outputs(12346, 10)


def test_seed_one_reference_outputs() -> None:
    # computed with a separate shell implementation of the recurrence
    assert outputs(1, 3) == [0x47e4ce4b896cdd1d, 0xabcfa6a8e079651d, 0xb9d10d8feb731f57]


def test_zero_seed_is_remapped() -> None:
    assert GeneratorState(0).value == ZERO_SEED_REPLACEMENT
    value, state = prng_next(GeneratorState(0))
    assert state.value != 0
    assert value != 0


def test_prng_next_is_pure() -> None:
    state = GeneratorState(99)
    first, _ = prng_next(state)
    second, _ = prng_next(state)
    assert first == second
    assert state == GeneratorState(99)


def test_bank_matches_scalar_streams() -> None:
    bank = GeneratorBank.from_substreams(7, range(5), StreamPurpose.NOISE)
    rngs = [Rng.from_seed(7, i, StreamPurpose.NOISE) for i in range(5)]
    for _ in range(20):
        column = bank.next_u64()
        assert [int(v) for v in column] == [rng.next_u64() for rng in rngs]

    gaussians = bank.gaussian()
    assert gaussians.tolist() == pytest.approx([rng.gaussian() for rng in rngs], rel=1e-12, abs=1e-12)


def test_substreams_are_disjoint() -> None:
    windows = []
    for index in (0, 1):
        rng = Rng(derive_substream(2024, index, StreamPurpose.NOISE))
        windows.append({rng.next_u64() for _ in range(10_000)})
    assert windows[0].isdisjoint(windows[1])

    schedule = Rng(derive_substream(2024, 0, StreamPurpose.SCHEDULE))
    assert schedule.next_u64() not in windows[0]


def test_below_range_and_permutation() -> None:
    rng = Rng.from_seed(3)
    draws = [rng.below(8) for _ in range(2000)]
    assert min(draws) == 0 and max(draws) == 7
    order = rng.permutation(16)
    assert sorted(order) == list(range(16))


def test_gaussian_moments() -> None:
    bank = GeneratorBank.from_substreams(11, range(50_000))
    z = bank.gaussian()
    assert abs(float(np.mean(z))) < 0.02
    assert float(np.std(z)) == pytest.approx(1.0, abs=0.02)


def test_stream_passes_uniformity_and_spectral_tests() -> None:
    values = np.array(outputs(2718, 20_000), dtype=np.uint64) & np.uint64(0xFFFF)
    _, passed = chi_square_uniformity(values, 100, value_range=(0, 1 << 16))
    assert passed
    _, flat = spectral_flatness(values.astype(np.float64))
    assert flat
