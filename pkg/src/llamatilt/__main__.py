#!/usr/bin/env python3
"""
Entry point for LlamaTilt CLI.

This script allows LlamaTilt to be executed as a module:
  python -m llamatilt
"""

from llamatilt.cli.main import main

if __name__ == "__main__":
    main()
