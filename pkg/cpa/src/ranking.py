import logging

import numpy as np

from cpa.src.constants import TIE_DECIMALS
from cpa.src.correlation import CorrelationMatrix
from tracelab.src.errors import DegenerateDataError


class KeyRanking:
    """
    Guesses of one key byte ordered by peak |rho|, best first. Undefined
    guesses come last with a NaN score.

    gap is the best score minus the best score of any guess that is not the
    polarity twin of the winner (same |rho|, opposite sign). Under a linear
    selection the bitwise complement of the key byte is such a twin and
    carries no information of its own.
    """

    def __init__(self, guesses: list[int], scores: list[float], peak_times: list[int], signs: list[float],
                 byte_index: int = 0) -> None:
        self.guesses = guesses
        self.scores = scores
        self.peak_times = peak_times
        self.signs = signs
        self.byte_index = byte_index
        self._rank = {guess: rank for rank, guess in enumerate(guesses)}

    @property
    def best(self) -> int:
        return self.guesses[0]

    @property
    def gap(self) -> float:
        return self.gap_of(self.best)

    def rank_of(self, guess: int) -> int:
        return self._rank[guess]

    def score_of(self, guess: int) -> float:
        return self.scores[self._rank[guess]]

    def peak_time_of(self, guess: int) -> int:
        return self.peak_times[self._rank[guess]]

    def _is_twin(self, i: int, j: int) -> bool:
        return bool(round(self.scores[i], TIE_DECIMALS) == round(self.scores[j], TIE_DECIMALS)
                    and self.signs[i] * self.signs[j] < 0)

    def gap_of(self, guess: int) -> float:
        """
        Score of `guess` minus the best score among the other guesses that
        are not its polarity twin. Negative when another guess beats it.
        """
        index = self._rank[guess]
        for other in range(len(self.guesses)):
            if other == index or self._is_twin(index, other) or np.isnan(self.scores[other]):
                continue
            return self.scores[index] - self.scores[other]
        return self.scores[index]

    def top(self, count: int) -> list[tuple[int, float]]:
        return list(zip(self.guesses[:count], self.scores[:count]))


def rank_guesses(c: CorrelationMatrix, byte_index: int = 0, polarity: int = 1) -> KeyRanking:
    """
    Orders guesses by peak |rho|. Equal scores go to the guess whose peak
    has the expected polarity (positive unless the probe is inverted), then
    to the smaller guess.
    """
    scores, times, signs = c.peaks()
    defined = [g for g in range(len(scores)) if not np.isnan(scores[g])]
    if not defined:
        raise DegenerateDataError(f"every correlation of byte {byte_index} is undefined (constant data)")

    def order(guess: int) -> tuple[float, int, int]:
        return (-round(float(scores[guess]), TIE_DECIMALS), 0 if signs[guess] * polarity >= 0 else 1, guess)

    ranked = sorted(defined, key=order) + [g for g in range(len(scores)) if np.isnan(scores[g])]
    ranking = KeyRanking(ranked, [float(scores[g]) for g in ranked], [int(times[g]) for g in ranked],
                         [float(signs[g]) for g in ranked], byte_index)
    logging.debug(f"byte {byte_index}: best {ranking.best:#04x} score {ranking.scores[0]:.4f} gap {ranking.gap:.4f}")
    return ranking
