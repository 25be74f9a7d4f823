import sys

from tracelab.src.cli import cli_dispatch

if __name__ == "__main__":
    sys.exit(cli_dispatch())
