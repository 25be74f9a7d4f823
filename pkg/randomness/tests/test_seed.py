import numpy as np
import pytest

from randomness.src.quality import chi_square_uniformity
from randomness.src.seed import SeedSource, assemble_seed_from_adc, assemble_seed_from_bits, collect_seeds, \
    expected_fold_bias
from tracelab.src.errors import ConfigurationError

LANES = 100_000


def test_deterministic_source_folds() -> None:
    source = SeedSource.biased_bits(1.0, seed=1, lanes=8)
    assert np.all(assemble_seed_from_bits(source, 16, 1) == 0xFFFF)
    assert np.all(assemble_seed_from_bits(source, 16, 3) == 0xFFFF)
    assert np.all(assemble_seed_from_bits(source, 16, 4) == 0)

    never = SeedSource.biased_bits(0.0, seed=1, lanes=8)
    assert np.all(assemble_seed_from_bits(never, 16, 5) == 0)


def test_fold_bias_example() -> None:
    source = SeedSource.biased_bits(0.1, seed=5, lanes=LANES)
    ones = float(np.mean(assemble_seed_from_bits(source, 1, 10)))
    assert expected_fold_bias(0.1, 10) == pytest.approx(0.4463, abs=1e-4)
    assert ones == pytest.approx(0.4463, abs=0.02)


@pytest.mark.parametrize("p", [0.05, 0.1, 0.3])
@pytest.mark.parametrize("m", [1, 10, 100])
def test_fold_bias_law(p: float, m: int) -> None:
    source = SeedSource.biased_bits(p, seed=int(p * 1000) + m, lanes=LANES)
    ones = float(np.mean(assemble_seed_from_bits(source, 1, m)))
    expected = expected_fold_bias(p, m)
    standard_error = np.sqrt(expected * (1 - expected) / LANES)
    assert abs(ones - expected) <= 3 * standard_error


def test_insufficient_folds_fail_and_enough_folds_pass() -> None:
    biased = SeedSource.biased_bits(0.005, seed=100, lanes=20_000)
    _, passed = chi_square_uniformity(assemble_seed_from_bits(biased, 16, 100), 100, value_range=(0, 1 << 16))
    assert not passed

    biased = SeedSource.biased_bits(0.005, seed=1000, lanes=20_000)
    _, passed = chi_square_uniformity(assemble_seed_from_bits(biased, 16, 1000), 100, value_range=(0, 1 << 16))
    assert passed


def test_thousand_folds_of_moderate_bias_pass() -> None:
    source = SeedSource.biased_bits(0.1, seed=42, lanes=20_000)
    seeds = collect_seeds(source, 16, 1000)
    assert int(seeds.max()) < 1 << 16
    _, passed = chi_square_uniformity(seeds, 100, value_range=(0, 1 << 16))
    assert passed


def test_adc_single_word_when_width_matches() -> None:
    source = SeedSource.adc_words(16, seed=9, lanes=32)
    twin = SeedSource.adc_words(16, seed=9, lanes=32)
    assert np.array_equal(assemble_seed_from_adc(source, 16, 1), twin.draw())


def test_adc_draws_two_words_for_sixteen_bits() -> None:
    source = SeedSource.adc_words(10, seed=9, lanes=32)
    twin = SeedSource.adc_words(10, seed=9, lanes=32)
    first, second = twin.draw(), twin.draw()
    expected = ((first << np.uint64(10)) | second) & np.uint64(0xFFFF)
    assert np.array_equal(assemble_seed_from_adc(source, 16, 1), expected)
    # both sources consumed exactly two words
    assert np.array_equal(source.draw(), twin.draw())


def test_adc_words_stay_in_range() -> None:
    words = SeedSource.adc_words(10, seed=4, lanes=10_000).draw()
    assert int(words.max()) <= 1023
    assert 400 < float(words.mean()) < 624


def test_adc_ten_folds_pass() -> None:
    source = SeedSource.adc_words(10, seed=77, lanes=20_000)
    _, passed = chi_square_uniformity(collect_seeds(source, 16, 10), 100, value_range=(0, 1 << 16))
    assert passed


def test_source_validation() -> None:
    with pytest.raises(ConfigurationError):
        SeedSource.biased_bits(1.5, seed=1)
    with pytest.raises(ConfigurationError):
        SeedSource.adc_words(17, seed=1)
    with pytest.raises(ConfigurationError):
        assemble_seed_from_bits(SeedSource.biased_bits(0.5, seed=1), 0, 1)
    with pytest.raises(ConfigurationError):
        assemble_seed_from_adc(SeedSource.biased_bits(0.5, seed=1), 16, 1)
