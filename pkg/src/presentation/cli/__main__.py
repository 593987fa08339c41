"""
Entry point for running the batch driver as a module: python -m src.presentation.cli
"""

import sys

from .main import run

if __name__ == "__main__":
    sys.exit(run())
