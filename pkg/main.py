import logging
import sys

from quasiwitt.front.cli import main


# Entry point of the command line tool.
if __name__ == "__main__":
    # Log records go to stderr, reports to stdout.
    logging.basicConfig(level=logging.INFO)

    sys.exit(main())
