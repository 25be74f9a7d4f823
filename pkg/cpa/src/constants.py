# Traces folded into the accumulators per batch
CHUNK_SIZE = 4096

NUM_GUESSES = 256

# Peak scores equal to this many decimals are ties
TIE_DECIMALS = 9

# Relative variance below which a column or guess is treated as constant
ZERO_VARIANCE_TOLERANCE = 1e-12

# Default trace-count grid for sweeps: starts at GRID_START and grows by GRID_RATIO
GRID_START = 5
GRID_RATIO = 1.15

# Fraction of the curve's maximum a local maximum must reach to count as a peak
PEAK_REL_THRESHOLD = 0.5
