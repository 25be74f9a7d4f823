# Volts per unit of Hamming weight on the bus
ALPHA = 1.0
BASELINE = 0.0
# Standard deviation of the Gaussian measurement noise, in volts
SIGMA = 1.0
SAMPLES_PER_EVENT = 1
# Pure-noise samples after every event
FILLER_GAP = 3
# Memory reads drive the bus harder than register stores
LOAD_GAIN = 1.5
# Acquisitions averaged per plaintext by the oscilloscope
AVERAGING = 1

# Random instruction injection is off unless asked for
INJECTION_MAX = 0
# Power-line filter smoothing factor, 0 is no filter
LOWPASS_LAMBDA = 0.0
# Random bytes leaked per sample by a second device on the supply line
PARALLEL_ACTIVITY = 0

# Key of the AES experiments, the one every example and test attacks
DEFAULT_AES_KEY = "67 76 89 79 88 98 A6 57 65 F7 65 77 5B 87 68 8C"
DEFAULT_TRACE_COUNT = 500
DEFAULT_SEED = 1

# Spacing of the per-acquisition stream purposes when traces are averaged
ACQUISITION_PURPOSE_STRIDE = 16
