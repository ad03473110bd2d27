"""Entry point for the mopbnb CLI."""

import sys

from mopbnb.cli import main as cli_main


def main() -> None:
    """Main entry point."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
