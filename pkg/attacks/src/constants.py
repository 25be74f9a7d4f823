# A phase whose median lane gap falls below this is reported as low confidence
LOW_CONFIDENCE_GAP = 0.05

# Ranked guesses shown per lane in the text report
REPORT_ROWS = 5

# Curves whose local maxima reach this fraction of the largest count as peaks
# in the zero-key diagnostic, low enough to catch the smaller second peak
DIAGNOSTIC_PEAK_THRESHOLD = 0.2

# Defaults for the countermeasure experiments. The target profile captures
# only the Sbox loads, one leaking access per key byte
EXPERIMENT_PROFILE = "aes_sbox_load"
EXPERIMENT_SIGMA = 2.0
EXPERIMENT_BUDGET = 2000
EXPERIMENT_SEEDS = (1, 2, 3, 4, 5)
EXPERIMENT_LANE = 0
INJECTION_LEVELS = (0, 1, 3, 7)
SHUFFLE_LEVELS = (0, 1)
LOWPASS_LEVELS = (0.0, 0.5, 0.9)
NOISE_LEVELS = (0.5, 1.0, 2.0, 4.0)
PARALLEL_LEVELS = (0, 1, 2, 4)

# Traces per phase for the 8 versus 16 bit Speck comparison
SPECK16_BUDGET = 3000
