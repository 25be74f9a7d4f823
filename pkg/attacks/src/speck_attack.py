"""
Two-phase CPA on Speck128/128.

Phase 1 targets the first-round output R1 = T XOR K2 where T = ROR(PT1, 8) + PT2
is known, recovering K2 byte by byte. Phase 2 needs K2 to compute
U = ROR(R1, 8) + y1 and targets R2 = U XOR K', recovering the second round
key K'. Inverting the first key-schedule step turns (K', K2) into K1. Lane b
of either phase is byte b of the word, least significant first.
"""
import logging
import time
from typing import Any, Optional

import numpy as np
import pandas as pd

from attacks.src.constants import EXPERIMENT_LANE, LOW_CONFIDENCE_GAP, SPECK16_BUDGET
from attacks.src.report import AttackReport, is_low_confidence, median_gap
from cipher.src.codec import block_to_words, words_to_block
from cipher.src.speck import recover_k1, word_byte
from cpa.src.engine import attack_byte, minimal_stable_traces, trace_grid
from cpa.src.ranking import KeyRanking
from cpa.src.selection import SelectionKind, SelectionModel
from leakage.src.constants import DEFAULT_SEED
from leakage.src.events import CipherId, ScheduleProfile
from leakage.src.settings import NoiseConfig, SimulationSettings
from leakage.src.synth import random_plaintexts, synthesize_trace_set
from leakage.src.traces import TraceSet
from tracelab.src.errors import ConfigurationError


def _check_cipher(traceset: TraceSet, expected: CipherId) -> None:
    if traceset.cipher_id != expected:
        raise ConfigurationError(f"expected a {expected.name} trace set, got {traceset.cipher_id.name}")


def assemble_word(rankings: list[KeyRanking]) -> int:
    return sum(ranking.best << (8 * lane) for lane, ranking in enumerate(rankings))


def _attack_lanes(traceset: TraceSet, model: SelectionModel, polarity: int) -> list[KeyRanking]:
    return [attack_byte(traceset, model, lane, polarity) for lane in range(model.lanes)]


def attack_speck_phase1_lanes(traceset: TraceSet, polarity: int = 1) -> list[KeyRanking]:
    _check_cipher(traceset, CipherId.SPECK_PHASE1)
    return _attack_lanes(traceset, SelectionModel(SelectionKind.SPECK_R1), polarity)


def attack_speck_phase1(traceset: TraceSet, polarity: int = 1) -> int:
    k2 = assemble_word(attack_speck_phase1_lanes(traceset, polarity))
    logging.info(f"Phase 1 on {traceset.num_traces} traces: K2 = {k2:#018x}")
    return k2


def attack_speck_phase2_lanes(traceset: TraceSet, k2: int, polarity: int = 1) -> list[KeyRanking]:
    _check_cipher(traceset, CipherId.SPECK_PHASE2)
    return _attack_lanes(traceset, SelectionModel(SelectionKind.SPECK_R2, k2), polarity)


def attack_speck_phase2(traceset: TraceSet, k2: int, polarity: int = 1,
                        threshold: float = LOW_CONFIDENCE_GAP) -> tuple[int, int, bool]:
    """
    Returns (K', K1, low_confidence). A wrong K2 leaves every lane without a
    clear winner, which shows up as a median gap below threshold.
    """
    rankings = attack_speck_phase2_lanes(traceset, k2, polarity)
    k_prime = assemble_word(rankings)
    k1 = recover_k1(k_prime, k2)
    low_confidence = is_low_confidence(rankings, threshold)
    if low_confidence:
        logging.warning(f"Phase 2 median gap {median_gap(rankings):.3f} is below {threshold}; "
                        f"K2 = {k2:#018x} is probably wrong")
    logging.info(f"Phase 2 on {traceset.num_traces} traces: K' = {k_prime:#018x}, K1 = {k1:#018x}")
    return k_prime, k1, low_confidence


def attack_speck_full(ts1: TraceSet, ts2: TraceSet, polarity: int = 1, true_key: Optional[bytes] = None,
                      flags: Optional[dict[str, Any]] = None) -> AttackReport:
    """
    Phase 1, then phase 2 with the recovered K2, then key = K1 || K2.
    The report holds the 8 phase-1 lanes followed by the 8 phase-2 lanes.
    """
    start = time.time()
    phase1 = attack_speck_phase1_lanes(ts1, polarity)
    k2 = assemble_word(phase1)
    phase1_time = time.time() - start

    start = time.time()
    phase2 = attack_speck_phase2_lanes(ts2, k2, polarity)
    k_prime = assemble_word(phase2)
    k1 = recover_k1(k_prime, k2)
    phase2_time = time.time() - start

    rankings = phase1 + [KeyRanking(r.guesses, r.scores, r.peak_times, r.signs, 8 + r.byte_index) for r in phase2]
    report = AttackReport("speck128", rankings, words_to_block(k1, k2),
                          {"phase1": ts1.num_traces, "phase2": ts2.num_traces},
                          {"phase1": phase1_time, "phase2": phase2_time},
                          is_low_confidence(phase1) or is_low_confidence(phase2), flags)
    report.flags.setdefault("k_prime", f"{k_prime:#018x}")
    if true_key is not None:
        report.grade(true_key)
    logging.info(f"Speck attack: K1 = {k1:#018x}, K2 = {k2:#018x}")
    return report


def speck_phase_settings(profile: str, key: bytes, limb_width: int = 8,
                         noise: Optional[NoiseConfig] = None) -> SimulationSettings:
    return SimulationSettings(ScheduleProfile.by_name(profile, limb_width), key, noise)


def synthesize_speck_pair(key: bytes, count: int, seed: int, limb_width: int = 8,
                          noise: Optional[NoiseConfig] = None) -> tuple[TraceSet, TraceSet]:
    """
    Phase 1 and phase 2 sets under one key. The phases are separate captures,
    so phase 2 starts its plaintexts and streams after those of phase 1.
    """
    plaintexts = random_plaintexts(2 * count, seed)
    ts1 = synthesize_trace_set(speck_phase_settings("speck_phase1", key, limb_width, noise),
                               plaintexts[:count], seed)
    ts2 = synthesize_trace_set(speck_phase_settings("speck_phase2", key, limb_width, noise),
                               plaintexts[count:], seed, first_index=count)
    return ts1, ts2


def speck16_comparison(key: bytes, budget: int = SPECK16_BUDGET, seed: int = DEFAULT_SEED,
                       lane: int = EXPERIMENT_LANE, noise: Optional[NoiseConfig] = None) -> pd.DataFrame:
    """
    Minimal stable phase-1 trace counts for the same key, plaintexts and
    noise streams on an 8 bit and a 16 bit bus. The byte-wise attack still
    works on 16 bit limbs; the other byte of each limb acts as noise.
    """
    _, k2 = block_to_words(key)
    plaintexts = random_plaintexts(budget, seed)
    model = SelectionModel(SelectionKind.SPECK_R1)
    rows = []
    for limb_width in (8, 16):
        traceset = synthesize_trace_set(speck_phase_settings("speck_phase1", key, limb_width, noise), plaintexts, seed)
        count = minimal_stable_traces(traceset, model, lane, trace_grid(budget), word_byte(k2, lane))
        rows.append({"limb_width": limb_width, "minimal_traces": count if count is not None else np.nan,
                     "reached": count is not None})
    return pd.DataFrame.from_records(rows)


def speck_phase_report(traceset: TraceSet, k2: Optional[int] = None, polarity: int = 1,
                       true_key: Optional[bytes] = None, flags: Optional[dict[str, Any]] = None) -> AttackReport:
    """
    Report of a single phase. Phase 1 reports K2; phase 2 needs K2 and
    reports K1, with K' kept in the flags. Grading compares against the
    matching half of the true key.
    """
    start = time.time()
    if traceset.cipher_id == CipherId.SPECK_PHASE1:
        rankings = attack_speck_phase1_lanes(traceset, polarity)
        word, half = assemble_word(rankings), 1
        phase = "phase1"
    else:
        if k2 is None:
            raise ConfigurationError("phase 2 needs K2 from phase 1")
        rankings = attack_speck_phase2_lanes(traceset, k2, polarity)
        k_prime = assemble_word(rankings)
        word, half = recover_k1(k_prime, k2), 0
        phase = "phase2"
        flags = {**(flags or {}), "k_prime": f"{k_prime:#018x}"}
    report = AttackReport(f"speck128-{phase}", rankings, word.to_bytes(8, "big"), {phase: traceset.num_traces},
                          {phase: time.time() - start}, is_low_confidence(rankings), flags)
    if true_key is not None:
        report.grade(true_key[8 * half:8 * half + 8])
    return report
