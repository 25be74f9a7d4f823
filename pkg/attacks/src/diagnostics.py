"""
The zero-key anomaly.

An XOR selection HW(p XOR g) is exactly HW(p) for g = 0. When the capture
window also holds the loads of the plaintext bytes, guess 0 matches that
load leakage perfectly and, loads being the stronger accesses, outranks the
true key at the AddRoundKey store. The diagnostic attacks a pair of sets that
differ only in whether the loads are captured and records both outcomes.
"""
import logging
from typing import Optional

import numpy as np
import pandas as pd

from attacks.src.constants import DIAGNOSTIC_PEAK_THRESHOLD
from cipher.src.codec import format_hex
from cpa.src.correlation import pearson_correlate
from cpa.src.engine import find_peaks
from cpa.src.ranking import KeyRanking, rank_guesses
from cpa.src.selection import SelectionKind, SelectionModel, build_hypotheses
from leakage.src.events import CipherId, ScheduleProfile
from leakage.src.settings import NoiseConfig, SimulationSettings
from leakage.src.synth import random_plaintexts, synthesize_trace_set
from leakage.src.traces import TraceSet
from tracelab.src.errors import ConfigurationError

# profile with the plaintext loads -> the same profile without them
LOAD_PAIRS = {"aes_xor_with_load": "aes_xor_only", "aes_full": "aes_no_load"}


class LaneDiagnosis:
    def __init__(self, lane: int, with_loads: KeyRanking, without_loads: KeyRanking,
                 zero_peaks: list[int], key_peaks: list[int]) -> None:
        self.lane = lane
        self.with_loads = with_loads
        self.without_loads = without_loads
        # peaks of the guess-0 and true-key curves on the set with loads
        self.zero_peaks = zero_peaks
        self.key_peaks = key_peaks


class ZeroKeyDiagnosis:
    def __init__(self, lanes: list[LaneDiagnosis], true_key: Optional[bytes]) -> None:
        self.lanes = lanes
        self.true_key = true_key

    @property
    def key_with_loads(self) -> bytes:
        return bytes(lane.with_loads.best for lane in self.lanes)

    @property
    def key_without_loads(self) -> bytes:
        return bytes(lane.without_loads.best for lane in self.lanes)

    @property
    def zero_lanes(self) -> int:
        return sum(lane.with_loads.best == 0 for lane in self.lanes)

    @property
    def true_lanes(self) -> Optional[int]:
        if self.true_key is None:
            return None
        return sum(lane.without_loads.best == self.true_key[lane.lane] for lane in self.lanes)

    @property
    def anomaly_visible(self) -> bool:
        return self.zero_lanes > len(self.lanes) // 2 and any(self.key_without_loads)

    def summary(self) -> str:
        lines = [f"with loads:    {format_hex(self.key_with_loads, ' ')}  ({self.zero_lanes}/16 lanes report 00)",
                 f"without loads: {format_hex(self.key_without_loads, ' ')}"]
        if self.true_key is not None:
            lines.append(f"true key:      {format_hex(self.true_key, ' ')}  ({self.true_lanes}/16 lanes recovered)")
        lane = self.lanes[0]
        lines.append(f"lane 0 peaks with loads: guess 00 at {lane.zero_peaks}, key guess at {lane.key_peaks}")
        return "\n".join(lines)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame.from_records([{
            "lane": lane.lane,
            "best_with_loads": lane.with_loads.best,
            "score_with_loads": lane.with_loads.scores[0],
            "best_without_loads": lane.without_loads.best,
            "score_without_loads": lane.without_loads.scores[0],
            "zero_peaks": " ".join(map(str, lane.zero_peaks)),
            "key_peaks": " ".join(map(str, lane.key_peaks)),
        } for lane in self.lanes])


def _profile_name(traceset: TraceSet) -> Optional[str]:
    profile = traceset.meta.get("profile")
    return profile.get("name") if isinstance(profile, dict) else None


def check_paired(with_loads: TraceSet, without_loads: TraceSet) -> None:
    """
    Pairing is judged on what the sets carry: both AES, same plaintexts in
    the same order, and, when metadata is present, the same seed, noise and
    countermeasures with profiles that differ only in the plaintext loads.
    """
    if with_loads.cipher_id != CipherId.AES128 or without_loads.cipher_id != CipherId.AES128:
        raise ConfigurationError("the zero-key diagnostic needs two AES trace sets")
    if not np.array_equal(with_loads.plaintexts, without_loads.plaintexts):
        raise ConfigurationError("trace sets are not paired: plaintexts differ")
    for field in ("seed", "first_index", "noise", "countermeasures"):
        if field in with_loads.meta and field in without_loads.meta \
                and with_loads.meta[field] != without_loads.meta[field]:
            raise ConfigurationError(f"trace sets are not paired: {field} differs")
    name_with, name_without = _profile_name(with_loads), _profile_name(without_loads)
    if name_with is not None and name_without is not None and LOAD_PAIRS.get(name_with) != name_without:
        raise ConfigurationError(f"profiles {name_with} and {name_without} do not differ only in plaintext loads")


def zero_key_diagnostic(with_loads: TraceSet, without_loads: TraceSet, true_key: Optional[bytes] = None,
                        polarity: int = 1) -> ZeroKeyDiagnosis:
    check_paired(with_loads, without_loads)
    model = SelectionModel(SelectionKind.AES_XOR)
    lanes = []
    for lane in range(16):
        c_with = pearson_correlate(with_loads.samples, build_hypotheses(with_loads, model, lane))
        ranking_without = rank_guesses(
            pearson_correlate(without_loads.samples, build_hypotheses(without_loads, model, lane)), lane, polarity)
        key_guess = true_key[lane] if true_key is not None else ranking_without.best
        curves = c_with.numpy()
        lanes.append(LaneDiagnosis(
            lane, rank_guesses(c_with, lane, polarity), ranking_without,
            find_peaks(curves[0], DIAGNOSTIC_PEAK_THRESHOLD), find_peaks(curves[key_guess], DIAGNOSTIC_PEAK_THRESHOLD)))

    diagnosis = ZeroKeyDiagnosis(lanes, true_key)
    if diagnosis.anomaly_visible:
        logging.warning(f"{diagnosis.zero_lanes}/16 lanes report key byte 00 when the plaintext loads are captured")
    return diagnosis


def synthesize_zero_key_pair(key: bytes, count: int, seed: int, noise: Optional[NoiseConfig] = None,
                             with_loads_profile: str = "aes_xor_with_load") -> tuple[TraceSet, TraceSet]:
    if with_loads_profile not in LOAD_PAIRS:
        raise ConfigurationError(f"{with_loads_profile} has no load-free counterpart; "
                                 f"known: {', '.join(LOAD_PAIRS)}")
    plaintexts = random_plaintexts(count, seed)
    pair = []
    for name in (with_loads_profile, LOAD_PAIRS[with_loads_profile]):
        pair.append(synthesize_trace_set(SimulationSettings(ScheduleProfile.by_name(name), key, noise),
                                         plaintexts, seed))
    return pair[0], pair[1]
