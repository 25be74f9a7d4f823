# xorshift64* shift triple and output multiplier
XORSHIFT_SHIFTS = (12, 25, 27)
XORSHIFT_MULTIPLIER = 2685821657736338717

# A state of zero is a fixed point of xorshift, so seed 0 is mapped here
ZERO_SEED_REPLACEMENT = 0x9E3779B97F4A7C15

# SplitMix64 finaliser constants, used to derive per-trace substreams
SPLITMIX_INCREMENT = 0x9E3779B97F4A7C15
SPLITMIX_MULTIPLIER_1 = 0xBF58476D1CE4E5B9
SPLITMIX_MULTIPLIER_2 = 0x94D049BB133111EB

# Working fold counts of the two hardware seed setups
BIT_SOURCE_FOLDS = 1000
ADC_SOURCE_FOLDS = 10

# The ADC in the second setup resolves about 10 bits
ADC_BITS = 10
# Standard deviation of the simulated ADC noise as a fraction of full scale
ADC_STD_FRACTION = 0.125

SEED_BITS = 16
SEED_COUNT = 20000
HISTOGRAM_BINS = 100

CHI_SQUARE_SIGNIFICANCE = 0.01
# Samples per bin below which a chi-square verdict is not trusted
CHI_SQUARE_MIN_SAMPLES_PER_BIN = 10

# Upper critical values of the chi-square distribution keyed by (degrees of freedom, significance)
CHI_SQUARE_CRITICAL = {
    (15, 0.05): 24.996,
    (15, 0.01): 30.578,
    (99, 0.05): 123.225,
    (99, 0.01): 134.642,
    (255, 0.05): 293.248,
    (255, 0.01): 310.457,
}
# Standard normal upper quantiles for the Wilson-Hilferty approximation
NORMAL_UPPER_QUANTILE = {
    0.05: 1.6449,
    0.01: 2.3263,
    0.001: 3.0902,
}

SPECTRAL_MIN_SAMPLES = 256
# Max/mean Fourier magnitude below which a stream counts as white
SPECTRAL_FLATNESS_THRESHOLD = 10.0
