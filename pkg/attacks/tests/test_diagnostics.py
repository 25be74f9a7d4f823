import numpy as np
import pytest

from attacks.src.diagnostics import check_paired, synthesize_zero_key_pair, zero_key_diagnostic
from cipher.src.codec import parse_hex
from leakage.src.constants import DEFAULT_AES_KEY
from leakage.src.settings import NoiseConfig
from leakage.src.traces import TraceSet
from tracelab.src.errors import ConfigurationError

KEY = parse_hex(DEFAULT_AES_KEY)


@pytest.fixture(scope="module")
def pair() -> tuple[TraceSet, TraceSet]:
    return synthesize_zero_key_pair(KEY, 500, seed=1)


def test_loads_make_zero_the_winner(pair: tuple[TraceSet, TraceSet]) -> None:
    diagnosis = zero_key_diagnostic(*pair, true_key=KEY)
    assert diagnosis.zero_lanes >= 12
    assert diagnosis.anomaly_visible


def test_without_loads_the_key_returns(pair: tuple[TraceSet, TraceSet]) -> None:
    diagnosis = zero_key_diagnostic(*pair, true_key=KEY)
    assert diagnosis.true_lanes == 16
    assert diagnosis.key_without_loads == KEY


def test_peaks_sit_at_the_load_and_the_store(pair: tuple[TraceSet, TraceSet]) -> None:
    with_loads, _ = pair
    slot = NoiseConfig().slot_width
    lane = zero_key_diagnostic(*pair, true_key=KEY).lanes[0]
    load_sample, store_sample = 0, 16 * slot
    assert load_sample in lane.zero_peaks
    assert store_sample in lane.key_peaks
    assert all(t < with_loads.samples_per_trace for t in lane.key_peaks)


def test_zero_key_reports_zero_everywhere() -> None:
    with_loads, without_loads = synthesize_zero_key_pair(bytes(16), 300, seed=2)
    diagnosis = zero_key_diagnostic(with_loads, without_loads, true_key=bytes(16))
    assert diagnosis.key_with_loads == bytes(16)
    assert diagnosis.key_without_loads == bytes(16)
    assert not diagnosis.anomaly_visible


def test_full_profiles_pair_too() -> None:
    with_loads, without_loads = synthesize_zero_key_pair(KEY, 300, seed=3, with_loads_profile="aes_full")
    assert zero_key_diagnostic(with_loads, without_loads).zero_lanes >= 12


def test_unpaired_sets_are_rejected(pair: tuple[TraceSet, TraceSet]) -> None:
    with_loads, _ = pair
    other_with, other_without = synthesize_zero_key_pair(KEY, 500, seed=4)
    with pytest.raises(ConfigurationError):
        check_paired(with_loads, other_without)
    with pytest.raises(ConfigurationError):
        check_paired(with_loads, other_with)
    shifted = TraceSet(with_loads.samples, np.roll(with_loads.plaintexts, 1, axis=0), with_loads.cipher_id)
    with pytest.raises(ConfigurationError):
        zero_key_diagnostic(shifted, pair[1])


def test_summary_and_table(pair: tuple[TraceSet, TraceSet]) -> None:
    diagnosis = zero_key_diagnostic(*pair, true_key=KEY)
    assert "16/16 lanes recovered" in diagnosis.summary()
    assert len(diagnosis.to_dataframe()) == 16
