"""Entry point for rlihf-bench."""

import sys

from rlihf_bench.cli import run


def main() -> None:
    """Run the rlihf-bench command line."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
