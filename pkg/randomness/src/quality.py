import logging
from typing import Optional

import numpy as np
import pandas as pd

from randomness.src.constants import CHI_SQUARE_CRITICAL, CHI_SQUARE_MIN_SAMPLES_PER_BIN, \
    CHI_SQUARE_SIGNIFICANCE, NORMAL_UPPER_QUANTILE, SPECTRAL_FLATNESS_THRESHOLD, SPECTRAL_MIN_SAMPLES
from tracelab.src.errors import ConfigurationError, InsufficientDataError


def histogram(samples: np.ndarray, bins: int,
              value_range: Optional[tuple[float, float]] = None) -> pd.DataFrame:
    """
    Equal-width bins over value_range (or the range of the samples). Returns
    one row per bin with its edges and count.
    """
    if bins < 1:
        raise ConfigurationError(f"bins must be at least 1, got {bins}")
    counts, edges = np.histogram(np.asarray(samples, dtype=np.float64), bins=bins, range=value_range)
    return pd.DataFrame({"bin_low": edges[:-1], "bin_high": edges[1:], "count": counts})


def chi_square_critical_value(dof: int, significance: float) -> float:
    if (dof, significance) in CHI_SQUARE_CRITICAL:
        return CHI_SQUARE_CRITICAL[(dof, significance)]
    if significance not in NORMAL_UPPER_QUANTILE:
        raise ConfigurationError(
            f"no critical values for significance {significance}; use one of {sorted(NORMAL_UPPER_QUANTILE)}")
    # Wilson-Hilferty cube approximation
    z = NORMAL_UPPER_QUANTILE[significance]
    h = 2.0 / (9.0 * dof)
    return float(dof * (1.0 - h + z * np.sqrt(h)) ** 3)


def chi_square_uniformity(samples: np.ndarray, bins: int, significance: float = CHI_SQUARE_SIGNIFICANCE,
                          value_range: Optional[tuple[float, float]] = None) -> tuple[float, bool]:
    if bins < 2:
        raise ConfigurationError(f"chi-square needs at least 2 bins, got {bins}")
    samples = np.asarray(samples)
    if len(samples) < CHI_SQUARE_MIN_SAMPLES_PER_BIN * bins:
        raise InsufficientDataError(
            f"{len(samples)} samples are too few for {bins} bins "
            f"(need {CHI_SQUARE_MIN_SAMPLES_PER_BIN * bins})")

    counts = histogram(samples, bins, value_range)["count"].to_numpy(dtype=np.float64)
    expected = len(samples) / bins
    statistic = float(np.sum((counts - expected) ** 2) / expected)
    critical = chi_square_critical_value(bins - 1, significance)
    passed = statistic < critical
    logging.debug(f"chi-square {statistic:.3f} against critical {critical:.3f} ({'pass' if passed else 'fail'})")
    return statistic, passed


def magnitude_spectrum(samples: np.ndarray) -> np.ndarray:
    """
    Fourier magnitudes of the samples without the zero-frequency term.
    """
    return np.abs(np.fft.rfft(np.asarray(samples, dtype=np.float64)))[1:]


def spectral_flatness(samples: np.ndarray,
                      threshold: float = SPECTRAL_FLATNESS_THRESHOLD) -> tuple[float, bool]:
    """
    Ratio of the largest to the mean Fourier magnitude, DC excluded. A white
    stream spreads its energy over every frequency and stays far below the
    threshold; a periodic one concentrates it into a few lines.
    """
    if len(samples) < SPECTRAL_MIN_SAMPLES:
        raise InsufficientDataError(
            f"spectral test needs at least {SPECTRAL_MIN_SAMPLES} samples, got {len(samples)}")
    magnitudes = magnitude_spectrum(samples)
    mean = float(np.mean(magnitudes))
    if mean == 0.0:
        # a constant stream has no spectrum to be flat
        return float("inf"), False
    metric = float(np.max(magnitudes)) / mean
    return metric, metric < threshold


def spectrum_table(samples: np.ndarray) -> pd.DataFrame:
    magnitudes = magnitude_spectrum(samples)
    return pd.DataFrame({"frequency_index": np.arange(1, len(magnitudes) + 1), "magnitude": magnitudes})
