#!/usr/bin/env python3
"""
Quick start script for the spectral gap workbench
"""

import argparse
import os
import sys

from src.config import Settings
from src.main import main as workbench_main


def check_config(env_file: str = '.env') -> bool:
    """Check that the environment file, if present, holds valid settings"""
    if not os.path.exists(env_file):
        print(f"No '{env_file}' found; using built-in defaults.")
        print("Copy .env.example to .env to change thread counts, budgets or thresholds.")
        return True

    try:
        Settings(env_file)
    except ValueError as e:
        print(f"Configuration error in {env_file}: {e}")
        return False

    print(f"Configuration in {env_file} looks good.")
    return True


def main():
    parser = argparse.ArgumentParser(
        description='Start the spectral gap workbench',
        epilog='Arguments after the command are passed through, e.g. '
               'run_workbench.py kesten --generators 2 --nmax 30'
    )
    parser.add_argument('--check', action='store_true',
                        help='Only validate the environment file')
    parser.add_argument('--env-file', default='.env',
                        help='Environment file path')
    args, rest = parser.parse_known_args()

    if not check_config(args.env_file):
        sys.exit(1)
    if args.check:
        return
    if not rest:
        parser.print_help()
        sys.exit(1)

    if '--env-file' not in rest:
        rest += ['--env-file', args.env_file]
    sys.exit(workbench_main(rest))


if __name__ == "__main__":
    main()
