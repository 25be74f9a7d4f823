"""
Countermeasure experiments: how many traces the attack needs as one knob
of the simulator is turned up.

Every (level, seed) cell synthesises its own trace set of `budget` traces
and measures the smallest grid count from which the true key byte of one
lane stays ranked first. The same seeds are used at every level so levels
are compared on identical plaintexts and noise streams. A cell that never
stabilises within the budget is recorded as not reached and counts as
infinitely many traces in the median.
"""
import logging
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from attacks.src.constants import EXPERIMENT_BUDGET, EXPERIMENT_LANE, EXPERIMENT_PROFILE, EXPERIMENT_SEEDS, \
    EXPERIMENT_SIGMA, INJECTION_LEVELS, LOWPASS_LEVELS, SHUFFLE_LEVELS
from cipher.src.codec import block_to_words
from cipher.src.speck import speck_key_schedule, word_byte
from cpa.src.engine import minimal_stable_traces, trace_grid
from cpa.src.selection import SelectionKind, SelectionModel
from leakage.src.events import CipherId, ScheduleProfile
from leakage.src.settings import CountermeasureSettings, NoiseConfig, SimulationSettings
from leakage.src.synth import random_plaintexts, synthesize_trace_set
from tracelab.src.errors import ConfigurationError


class ExperimentAxis(Enum):
    INJECTION = "injection"
    SHUFFLE = "shuffle"
    LOWPASS = "lowpass"
    NOISE = "noise"
    PARALLEL = "parallel"

    @classmethod
    def by_name(cls, name: str) -> "ExperimentAxis":
        try:
            return cls(name)
        except ValueError:
            raise ConfigurationError(
                f"unknown countermeasure axis {name!r}; known: {', '.join(a.value for a in cls)}") from None


def with_level(settings: SimulationSettings, axis: ExperimentAxis, level: float) -> SimulationSettings:
    noise = dict(vars(settings.noise))
    countermeasures = dict(vars(settings.countermeasures))
    match axis:
        case ExperimentAxis.INJECTION:
            countermeasures["injection_max"] = int(level)
        case ExperimentAxis.SHUFFLE:
            countermeasures["shuffle"] = bool(level)
        case ExperimentAxis.LOWPASS:
            countermeasures["lowpass_lambda"] = float(level)
        case ExperimentAxis.NOISE:
            noise["sigma"] = float(level)
        case ExperimentAxis.PARALLEL:
            countermeasures["parallel_activity"] = int(level)
    return SimulationSettings(settings.profile, settings.key, NoiseConfig(**noise),
                              CountermeasureSettings(**countermeasures))


def target_model(settings: SimulationSettings) -> SelectionModel:
    match settings.cipher_id:
        case CipherId.AES128:
            return SelectionModel(SelectionKind.AES_SBOX)
        case CipherId.SPECK_PHASE1:
            return SelectionModel(SelectionKind.SPECK_R1)
        case CipherId.SPECK_PHASE2:
            return SelectionModel(SelectionKind.SPECK_R2, block_to_words(settings.key)[1])
    raise ConfigurationError(f"no selection for {settings.cipher_id}")


def target_byte(settings: SimulationSettings, lane: int) -> int:
    """
    The byte a successful attack on this lane must return.
    """
    match settings.cipher_id:
        case CipherId.AES128:
            return settings.key[lane]
        case CipherId.SPECK_PHASE1:
            return word_byte(block_to_words(settings.key)[1], lane)
        case CipherId.SPECK_PHASE2:
            k1, k2 = block_to_words(settings.key)
            return word_byte(speck_key_schedule(k1, k2).k_prime, lane)
    raise ConfigurationError(f"no target byte for {settings.cipher_id}")


class ExperimentResult:
    """
    runs:
     * One row per (level, seed): minimal_traces (NaN when not reached) and reached.
    medians:
     * One row per level: median over seeds and how many seeds reached stability.
    """

    def __init__(self, axis: ExperimentAxis, runs: pd.DataFrame, budget: int) -> None:
        self.axis = axis
        self.runs = runs
        self.budget = budget
        self.medians = self._medians()

    def _medians(self) -> pd.DataFrame:
        rows = []
        for level, group in self.runs.groupby("level", sort=False):
            counts = group["minimal_traces"].fillna(np.inf).to_numpy()
            rows.append({"level": level, "median": float(np.median(counts)),
                         "reached": int(group["reached"].sum()), "seeds": len(group)})
        return pd.DataFrame.from_records(rows)

    def median_of(self, level: float) -> float:
        return float(self.medians.loc[self.medians["level"] == level, "median"].iloc[0])

    def ratios(self) -> pd.Series:
        """
        Median of every level over the median of the first level.
        """
        medians = self.medians.set_index("level")["median"]
        return medians / medians.iloc[0]

    @property
    def all_reached(self) -> bool:
        return bool(self.runs["reached"].all())


def countermeasure_experiment(base_settings: SimulationSettings, axis: ExperimentAxis, levels: Sequence[float],
                              seeds: Sequence[int] = EXPERIMENT_SEEDS, budget: int = EXPERIMENT_BUDGET,
                              grid: Optional[Sequence[int]] = None, lane: int = EXPERIMENT_LANE,
                              progress: bool = False) -> ExperimentResult:
    if not levels:
        raise ConfigurationError("countermeasure experiment needs at least one level")
    if not seeds:
        raise ConfigurationError("countermeasure experiment needs at least one seed")
    grid = list(grid) if grid is not None else trace_grid(budget)
    if grid[-1] > budget:
        raise ConfigurationError(f"grid reaches {grid[-1]} traces but the budget is {budget}")

    model = target_model(base_settings)
    true_byte = target_byte(base_settings, lane)
    rows = []
    cells = [(level, seed) for level in levels for seed in seeds]
    for level, seed in tqdm(cells, desc=f"{axis.value} experiment", disable=not progress):
        settings = with_level(base_settings, axis, level)
        traceset = synthesize_trace_set(settings, random_plaintexts(budget, seed), seed)
        count = minimal_stable_traces(traceset, model, lane, grid, true_byte)
        logging.info(f"{axis.value}={level} seed={seed}: "
                     f"{count if count is not None else 'not reached within ' + str(budget)}")
        rows.append({"level": level, "seed": seed,
                     "minimal_traces": float(count) if count is not None else np.nan, "reached": count is not None})

    result = ExperimentResult(axis, pd.DataFrame.from_records(rows), budget)
    logging.info(f"{axis.value} medians: {dict(zip(result.medians['level'], result.medians['median']))}")
    return result


def experiment_settings(profile: str = EXPERIMENT_PROFILE, key: Optional[bytes] = None,
                        sigma: float = EXPERIMENT_SIGMA) -> SimulationSettings:
    settings = SimulationSettings(ScheduleProfile.by_name(profile), noise=NoiseConfig(sigma=sigma))
    if key is not None:
        settings.key = key
    return settings


def injection_experiment(levels: Sequence[int] = INJECTION_LEVELS, seeds: Sequence[int] = EXPERIMENT_SEEDS,
                         budget: int = EXPERIMENT_BUDGET, settings: Optional[SimulationSettings] = None,
                         progress: bool = False) -> ExperimentResult:
    return countermeasure_experiment(settings or experiment_settings(), ExperimentAxis.INJECTION, levels, seeds,
                                     budget, progress=progress)


def shuffle_experiment(levels: Sequence[int] = SHUFFLE_LEVELS, seeds: Sequence[int] = EXPERIMENT_SEEDS,
                       budget: int = EXPERIMENT_BUDGET, settings: Optional[SimulationSettings] = None,
                       progress: bool = False) -> ExperimentResult:
    return countermeasure_experiment(settings or experiment_settings(), ExperimentAxis.SHUFFLE, levels, seeds,
                                     budget, progress=progress)


def filter_experiment(levels: Sequence[float] = LOWPASS_LEVELS, seeds: Sequence[int] = EXPERIMENT_SEEDS,
                      budget: int = EXPERIMENT_BUDGET, settings: Optional[SimulationSettings] = None,
                      progress: bool = False) -> ExperimentResult:
    return countermeasure_experiment(settings or experiment_settings(), ExperimentAxis.LOWPASS, levels, seeds,
                                     budget, progress=progress)
