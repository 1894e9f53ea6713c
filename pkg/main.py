"""
Beltrami Lab - command-line entry point.

    python main.py --config run.json solve
    python main.py --set grid.n_theta=64 verify
"""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

# Load environment FIRST
import load_environment
load_environment.load_environment()

from src.cli.commands import cli


if __name__ == "__main__":
    cli()
