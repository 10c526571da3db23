"""
Utility functions for LlamaTilt.

This module provides exact rational parsing, the package's error types and
a few helpers shared by the library modules and the command-line interface.
"""

import os
import re
import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple, Union

# Set up module-level logger
logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

WORKERS_ENV_VAR = "LLAMATILT_WORKERS"

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class LlamaTiltError(Exception):
    """Base class for all errors raised by LlamaTilt."""


class DomainError(LlamaTiltError, ValueError):
    """A mathematical precondition of an operation does not hold.

    Args:
        message: Human readable description.
        field: Name of the offending input field, if any.
        hypothesis: Name of the proposition hypothesis that failed, if any.
    """

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        hypothesis: Optional[str] = None
    ) -> None:
        super().__init__(message)
        self.field = field
        self.hypothesis = hypothesis


class ParseError(LlamaTiltError, ValueError):
    """An exact input could not be parsed."""

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        super().__init__(message)
        self.field = field


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce a value to an exact rational.

    Integers, fractions and "p/q" strings are accepted. Floats and booleans
    are rejected so that no binary rounding can leak into a computation.

    Args:
        value: The value to coerce.

    Returns:
        The value as a Fraction.

    Raises:
        ParseError: If the value is not an exact rational.
    """
    if isinstance(value, bool):
        raise ParseError(f"Boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ParseError(f"Not an exact rational: {value!r} ({type(value).__name__})")


def parse_rational(text: str, field: Optional[str] = None) -> Fraction:
    """Parse an integer or "p/q" string into a Fraction.

    Args:
        text: The text to parse, e.g. "3", "-1/2".
        field: Optional field name used in error messages.

    Returns:
        The parsed Fraction.

    Raises:
        ParseError: For decimal, exponent or otherwise malformed literals.
    """
    match = _RATIONAL_PATTERN.match(text)
    if not match:
        where = f" for '{field}'" if field else ""
        raise ParseError(
            f"Malformed rational{where}: {text!r} (use an integer or p/q)",
            field=field
        )
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise ParseError(f"Zero denominator in {text!r}", field=field)
    return Fraction(int(numerator), int(denominator or 1))


def parse_integer(text: str, field: Optional[str] = None) -> int:
    """Parse an integer-valued exact literal ("4" or "8/2")."""
    value = parse_rational(text, field)
    if value.denominator != 1:
        raise ParseError(f"Expected an integer for '{field}', got {text!r}", field=field)
    return value.numerator


def parse_rational_list(
    text: str,
    length: Optional[int] = None,
    field: Optional[str] = None
) -> Tuple[Fraction, ...]:
    """Parse a comma separated list of exact rationals.

    Args:
        text: Text such as "1,0,-1/2,1/6".
        length: Required number of entries, if any.
        field: Optional field name used in error messages.

    Returns:
        Tuple of Fractions.
    """
    parts = text.split(",")
    if length is not None and len(parts) != length:
        raise ParseError(
            f"Expected {length} comma separated values for '{field}', got {len(parts)}",
            field=field
        )
    return tuple(parse_rational(part, field) for part in parts)


def default_workers() -> int:
    """Get the default worker count from the environment.

    Returns:
        The value of LLAMATILT_WORKERS, or 1 when unset or invalid.
    """
    raw = os.environ.get(WORKERS_ENV_VAR)
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {WORKERS_ENV_VAR}={raw!r}")
        return 1
    return max(1, workers)


def ensure_directory(directory: Union[str, Path]) -> Path:
    """Ensure a directory exists, creating it if necessary.

    Args:
        directory: The directory path to ensure exists.

    Returns:
        The Path object for the directory.
    """
    directory = Path(directory)
    if directory.exists() and not directory.is_dir():
        raise ValueError(f"Path exists but is not a directory: {directory}")

    if not directory.exists():
        directory.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Created directory: {directory}")

    return directory
