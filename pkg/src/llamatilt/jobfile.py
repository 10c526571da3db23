"""
Declarative job files.

A job file is flat ``key = value`` text with ``#`` comments, one entry per
line. Keys are the command-line option names with dashes replaced by
underscores; a ``command`` entry names the subcommand. Every exact field is
validated on load, so a float literal is reported with its line number.

Example::

    # unstable family on P^3
    command = p3-family
    n = 2
    m = 2
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

from llamatilt.chern import DEFAULT_LATTICE_DENOMS, PolarizedGeometry, TiltParameter
from llamatilt.utils import ParseError, parse_integer, parse_rational, parse_rational_list

# Set up module-level logger
logger = logging.getLogger(__name__)

COMMANDS = (
    "slope",
    "charge",
    "discriminant",
    "bmt",
    "line-bundle",
    "two-c",
    "ideal-sheaf",
    "p3-family",
    "search",
    "wall",
    "points-ideal",
    "convert",
)

_LINE_PATTERN = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


def _boolean(text: str, field_name: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ParseError(f"Expected true or false for '{field_name}', got {text!r}", field=field_name)


def _choice(*choices: str) -> Callable[[str, str], str]:
    def check(text: str, field_name: str) -> str:
        if text not in choices:
            raise ParseError(
                f"'{field_name}' must be one of {', '.join(choices)}, got {text!r}",
                field=field_name
            )
        return text
    return check


def _vector(text: str, field_name: str) -> tuple:
    return parse_rational_list(text, length=4, field=field_name)


def parse_lattice(text: str, field_name: str = "lattice") -> Tuple[int, ...]:
    """Parse four integer lattice denominators such as "1,1,2,6"."""
    denoms = parse_rational_list(text, length=4, field=field_name)
    if any(q.denominator != 1 for q in denoms):
        raise ParseError(f"Lattice denominators must be integers, got {text!r}", field=field_name)
    return tuple(int(q) for q in denoms)


def _free(text: str, field_name: str) -> str:
    return text


FIELD_PARSERS: Dict[str, Callable[[str, str], object]] = {
    "command": _choice(*COMMANDS),
    "format": _choice("json", "csv", "text"),
    "output": _free,
    "form": _choice("strong", "weak"),
    "alpha_sq": parse_rational,
    "beta": parse_rational,
    "D": parse_rational,
    "lattice": parse_lattice,
    "v": _vector,
    "w": _vector,
    "k": parse_rational,
    "m_sq": parse_rational,
    "mu_max": parse_rational,
    "mu_max_sq": parse_rational,
    "d": parse_rational,
    "ch3_oc": parse_rational,
    "genus": parse_integer,
    "hypersurface": _boolean,
    "n": parse_integer,
    "m": parse_integer,
    "rank_bound": parse_integer,
    "ch2_bound": parse_rational,
    "workers": parse_integer,
    "prune": _boolean,
    "no_quotient_check": _boolean,
    "case_split": _boolean,
    "beta_min": parse_rational,
    "beta_max": parse_rational,
    "count": parse_integer,
    "ell": parse_rational,
    "length": parse_rational,
    "rank": parse_integer,
    "c1": parse_rational,
    "c2": parse_rational,
    "c3": parse_rational,
}

BOOLEAN_FIELDS = frozenset(
    name for name, parser in FIELD_PARSERS.items() if parser is _boolean
)


class JobfileError(ParseError):
    """A job file could not be read, with line and field diagnostics."""

    def __init__(
        self,
        message: str,
        path: Optional[Path] = None,
        line: Optional[int] = None,
        field: Optional[str] = None
    ) -> None:
        location = f"{path}:{line}: " if path is not None and line is not None else ""
        super().__init__(f"{location}{message}", field=field)
        self.path = path
        self.line = line


@dataclass(frozen=True)
class JobSpec:
    """
    A parsed job.

    ``values`` maps field names to their validated text. Geometry and tilt
    parameter are derived from the ``D``, ``lattice``, ``alpha_sq`` and
    ``beta`` entries.
    """

    command: Optional[str]
    values: Dict[str, str] = field(default_factory=dict)
    source: Optional[Path] = None

    @classmethod
    def from_options(
        cls,
        command: Optional[str],
        options: Mapping[str, object],
        source: Optional[Path] = None
    ) -> "JobSpec":
        """Collect the text-valued job fields of parsed command-line options."""
        values = {
            key: value for key, value in options.items()
            if key in FIELD_PARSERS and key != "command" and isinstance(value, str)
        }
        if command is not None:
            values["command"] = command
        return cls(command, values, source)

    @property
    def geometry(self) -> PolarizedGeometry:
        lattice = self.values.get("lattice")
        return PolarizedGeometry(
            parse_rational(self.values.get("D", "1"), "D"),
            parse_lattice(lattice) if lattice else DEFAULT_LATTICE_DENOMS,
        )

    @property
    def parameter(self) -> Optional[TiltParameter]:
        if "alpha_sq" not in self.values:
            return None
        return TiltParameter(
            parse_rational(self.values["alpha_sq"], "alpha_sq"),
            parse_rational(self.values.get("beta", "0"), "beta"),
        )

    @property
    def payload(self) -> Dict[str, str]:
        shared_keys = {"command", "format", "output", "D", "lattice", "alpha_sq", "beta"}
        return {key: value for key, value in self.values.items() if key not in shared_keys}


def parse_jobfile_text(text: str, path: Optional[Path] = None) -> JobSpec:
    """
    Parse job file contents.

    Raises:
        JobfileError: For malformed lines, unknown or repeated keys and
            values that fail validation.
    """
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        match = _LINE_PATTERN.match(line)
        if not match:
            raise JobfileError(f"Expected 'key = value', got {raw.strip()!r}", path, number)
        key, value = match.group(1), match.group(2)
        if key not in FIELD_PARSERS:
            raise JobfileError(f"Unknown key '{key}'", path, number, field=key)
        if key in values:
            raise JobfileError(f"Key '{key}' given twice", path, number, field=key)
        try:
            FIELD_PARSERS[key](value, key)
        except ParseError as e:
            raise JobfileError(str(e), path, number, field=key) from e
        values[key] = value
    logger.debug(f"Read {len(values)} job entries from {path or '<text>'}")
    return JobSpec(values.get("command"), values, path)


def load_jobfile(path: Union[str, Path]) -> JobSpec:
    """
    Load a job file from disk.

    Raises:
        JobfileError: If the file is missing or does not parse.
    """
    path = Path(path)
    if not path.is_file():
        raise JobfileError(f"Job file not found: {path}", field="jobfile")
    return parse_jobfile_text(path.read_text(encoding="utf-8"), path)
