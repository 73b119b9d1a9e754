#!/usr/bin/env python3
"""Run the command-line interface as ``python -m macromic``."""
import sys

from macromic import cli

if __name__ == '__main__':
    sys.exit(cli.main())
