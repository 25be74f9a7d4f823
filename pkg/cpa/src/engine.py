import logging
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from cpa.src.constants import CHUNK_SIZE, GRID_RATIO, GRID_START, NUM_GUESSES, PEAK_REL_THRESHOLD
from cpa.src.correlation import CorrelationAccumulator, CorrelationMatrix, pearson_correlate
from cpa.src.ranking import KeyRanking, rank_guesses
from cpa.src.selection import SelectionModel, build_hypotheses
from leakage.src.traces import TraceSet
from tracelab.src.errors import ConfigurationError, DegenerateDataError


def correlate_byte(traceset: TraceSet, model: SelectionModel, byte_index: int) -> CorrelationMatrix:
    return pearson_correlate(traceset.samples, build_hypotheses(traceset, model, byte_index))


def attack_byte(traceset: TraceSet, model: SelectionModel, byte_index: int, polarity: int = 1) -> KeyRanking:
    return rank_guesses(correlate_byte(traceset, model, byte_index), byte_index, polarity)


class SweepTrajectory:
    """
    Rankings of one key byte after the first n traces, for each n of the grid.
    A ranking is None where the data were still degenerate.
    """

    def __init__(self, counts: list[int], rankings: list[Optional[KeyRanking]], byte_index: int) -> None:
        self.counts = counts
        self.rankings = rankings
        self.byte_index = byte_index

    def scores_table(self) -> pd.DataFrame:
        """
        One row per guess, one column per grid count, peak |rho| as values.
        """
        columns = {}
        for count, ranking in zip(self.counts, self.rankings):
            column = np.full(NUM_GUESSES, np.nan)
            if ranking is not None:
                for guess, score in zip(ranking.guesses, ranking.scores):
                    column[guess] = score
            columns[count] = column
        table = pd.DataFrame(columns)
        table.index.name = "guess"
        return table

    def leaders(self) -> list[Optional[int]]:
        return [ranking.best if ranking is not None else None for ranking in self.rankings]

    def stable_count(self, true_byte: int) -> Optional[int]:
        """
        Smallest grid count from which the true byte ranks first at every
        grid point, or None when that never happens.
        """
        stable: Optional[int] = None
        for count, leader in zip(self.counts, self.leaders()):
            if leader == true_byte:
                if stable is None:
                    stable = count
            else:
                stable = None
        return stable


def _check_grid(grid: Sequence[int], num_traces: int) -> list[int]:
    counts = [int(n) for n in grid]
    if not counts:
        raise ConfigurationError("sweep grid is empty")
    if any(b <= a for a, b in zip(counts, counts[1:])):
        raise ConfigurationError(f"sweep grid must be strictly ascending, got {counts}")
    if counts[0] < 2 or counts[-1] > num_traces:
        raise ConfigurationError(f"sweep grid must lie within [2, {num_traces}], got {counts[0]}..{counts[-1]}")
    return counts


def trace_grid(max_count: int, start: int = GRID_START, ratio: float = GRID_RATIO) -> list[int]:
    """
    Roughly geometric grid from start up to max_count, always ending at max_count.
    """
    if max_count < 2:
        raise ConfigurationError(f"need at least 2 traces for a grid, got {max_count}")
    counts = []
    value = float(max(2, min(start, max_count)))
    while value < max_count:
        count = int(round(value))
        if not counts or count > counts[-1]:
            counts.append(count)
        value *= ratio
    if not counts or counts[-1] != max_count:
        counts.append(max_count)
    return counts


def sweep_traces(traceset: TraceSet, model: SelectionModel, byte_index: int, grid: Sequence[int],
                 polarity: int = 1) -> SweepTrajectory:
    """
    Ranks the byte after the first n traces for every n of the grid, in one
    pass: the accumulator is fed up to each grid count and read there.
    """
    counts = _check_grid(grid, traceset.num_traces)
    hypotheses = build_hypotheses(traceset.head(counts[-1]), model, byte_index).h
    accumulator = CorrelationAccumulator(traceset.samples_per_trace)
    rankings: list[Optional[KeyRanking]] = []
    fed = 0
    for count in counts:
        for start in range(fed, count, CHUNK_SIZE):
            stop = min(start + CHUNK_SIZE, count)
            accumulator.update(traceset.samples[start:stop], hypotheses[start:stop])
        fed = count
        try:
            rankings.append(rank_guesses(accumulator.correlation(), byte_index, polarity))
        except DegenerateDataError:
            rankings.append(None)
    return SweepTrajectory(counts, rankings, byte_index)


def minimal_stable_traces(traceset: TraceSet, model: SelectionModel, byte_index: int, grid: Sequence[int],
                          true_byte: int, polarity: int = 1) -> Optional[int]:
    stable = sweep_traces(traceset, model, byte_index, grid, polarity).stable_count(true_byte)
    if stable is None:
        logging.info(f"byte {byte_index} never stabilised on {true_byte:#04x} within {grid[-1]} traces")
    return stable


def correlation_vs_time(traceset: TraceSet, model: SelectionModel, byte_index: int,
                        guesses: Optional[Sequence[int]] = None) -> pd.DataFrame:
    """
    Correlation curves over sample index, one row per guess.
    """
    c = correlate_byte(traceset, model, byte_index).numpy()
    rows = list(range(NUM_GUESSES)) if guesses is None else [int(g) for g in guesses]
    table = pd.DataFrame(c[rows], index=rows, columns=range(c.shape[1]))
    table.index.name = "guess"
    return table


def find_peaks(curve: Sequence[float], rel_threshold: float = PEAK_REL_THRESHOLD) -> list[int]:
    """
    Sample indices of local maxima of |curve| reaching rel_threshold of its maximum.
    """
    magnitude = np.nan_to_num(np.abs(np.asarray(curve, dtype=np.float64)), nan=0.0)
    if magnitude.size == 0 or magnitude.max() == 0:
        return []
    floor = rel_threshold * magnitude.max()
    padded = np.concatenate([[-np.inf], magnitude, [-np.inf]])
    return [i for i in range(magnitude.size)
            if magnitude[i] >= floor and padded[i + 1] > padded[i] and padded[i + 1] >= padded[i + 2]]
