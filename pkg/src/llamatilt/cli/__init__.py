"""
Command-line interface for LlamaTilt.

This package provides the ``llamatilt`` command and its subcommands.
"""

from llamatilt.cli.main import main, cli_app

__all__ = ['main', 'cli_app']
