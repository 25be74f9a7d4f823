# Trace-set file header: magic, version u16, cipher id u8, data length u16,
# trace count u32, samples per trace u32, all little-endian
TRACE_FILE_MAGIC = b"SCAT"
TRACE_FILE_VERSION = 1
TRACE_FILE_HEADER = "<4sHBHII"
TRACE_FILE_DATA_LEN = 16

# Exit statuses of the command line
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DEGENERATE = 4

OUTPUT_DIR = "generated_artifacts"
