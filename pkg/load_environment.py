"""
Environment Loader
Reads .env and config/beltrami.env into the process environment before
config.settings is imported, so BELTRAMI_LAB_* overrides apply everywhere.
"""

import sys
from pathlib import Path
from typing import List

from dotenv import load_dotenv


def load_environment(verbose: bool = False) -> List[Path]:
    """
    Load the environment files that exist, in order.

    Values already set in the process environment win over both files.

    Returns:
        The files that were loaded
    """
    root_dir = Path(__file__).parent

    env_files = [
        root_dir / '.env',
        root_dir / 'config' / 'beltrami.env'
    ]

    loaded = []
    for env_file in env_files:
        if env_file.exists():
            load_dotenv(env_file, override=False)
            loaded.append(env_file)
            if verbose:
                # stderr: stdout carries command output
                print(f"Loaded: {env_file.name}", file=sys.stderr)

    return loaded


if __name__ == "__main__":
    load_environment(verbose=True)
