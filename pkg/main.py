#!/usr/bin/env python3
"""
NetFactor - Main entry point.

Subcommands:
1. estimate  - fit PCA or network-penalized PCA on a panel
2. tune      - select the penalty parameters with the C_L criterion
3. select-r  - select the number of factors (ER / one step further)
4. simulate  - run the Monte Carlo study and write the result table
5. validate  - rolling recursive validation on a real panel
"""

import logging
import os
import sys

from dotenv import load_dotenv

from src.cli import main as cli_main
from src.sentry import init_sentry, shutdown_sentry

# Load environment variables
load_dotenv()

# Configure logging
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO").upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def main() -> int:
    """Main entry point."""
    # Initialize Sentry for error tracking (optional)
    sentry_dsn = os.getenv("SENTRY_DSN", "")
    if sentry_dsn:
        init_sentry(
            dsn=sentry_dsn,
            environment=os.getenv("SENTRY_ENVIRONMENT", "production"),
            traces_sample_rate=float(os.getenv("SENTRY_TRACES_SAMPLE_RATE", "0.2")),
            release=os.getenv("VERSION"),
        )

    try:
        return cli_main(sys.argv[1:])
    finally:
        shutdown_sentry()


if __name__ == "__main__":
    sys.exit(main())
