"""
Report envelopes and their serialization.

Every command produces a ReportEnvelope. Its JSON form is canonical: keys
are sorted, every rational is a "p/q" string and no float ever appears.
Tabular results (family members, wall samples, search candidates) live
under ``results["rows"]`` and are written to CSV with a fixed header.
"""

import json
import logging
from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import pandas as pd

from llamatilt.chern import ChernVector
from llamatilt.tilt import SlopeValue
from llamatilt.utils import DomainError, LlamaTiltError, ParseError

# Set up module-level logger
logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

FORMATS = ("json", "csv", "text")

TABLE_HEADERS: Dict[str, List[str]] = {
    "p3-family": ["n", "m", "c2", "c3", "ch0", "ch1", "ch2", "ch3", "nu_zero", "bmt_violated"],
    "wall": ["beta", "alpha_sq"],
    "search": ["w0", "w1", "w2", "nu_hat", "strict", "sub_delta_bar", "quotient_delta_bar"],
}

KEY_VALUE_HEADER = ["field", "value"]


def to_jsonable(value: Any) -> Any:
    """
    Convert library values to JSON-compatible data.

    Fractions and slopes become strings, Chern vectors lists of strings,
    dataclasses dicts of their fields and enums their values.

    Raises:
        TypeError: For floats and unsupported types.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        raise TypeError(f"Refusing to serialize float {value!r}")
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, SlopeValue):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, ChernVector):
        return [str(component) for component in value]
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    # sympy expressions and polynomials
    if hasattr(value, "as_expr"):
        return str(value.as_expr())
    raise TypeError(f"Cannot serialize {type(value).__name__}: {value!r}")


@dataclass
class ReportEnvelope:
    """
    The outer structure of every report.

    Attributes:
        command: Command that produced the report.
        inputs: Echo of the parsed inputs, as strings.
        results: Command-specific results.
        assumptions: Hypotheses under which the verdicts hold.
        warnings: Boundary cases worth a reader's attention.
        propositions: Names of the statements the verdicts come from.
    """

    command: str
    inputs: Dict[str, Any]
    results: Dict[str, Any]
    assumptions: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    propositions: List[str] = field(default_factory=list)
    schema: int = SCHEMA_VERSION

    @classmethod
    def build(
        cls,
        command: str,
        inputs: Dict[str, Any],
        results: Dict[str, Any],
        assumptions: Optional[List[str]] = None,
        warnings: Optional[List[str]] = None,
        propositions: Optional[List[str]] = None
    ) -> "ReportEnvelope":
        """Create an envelope, converting library values to JSON data."""
        return cls(
            command=command,
            inputs=to_jsonable(inputs),
            results=to_jsonable(results),
            assumptions=list(assumptions or []),
            warnings=list(warnings or []),
            propositions=list(propositions or []),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": self.schema,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "assumptions": self.assumptions,
            "warnings": self.warnings,
            "propositions": self.propositions,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportEnvelope":
        """
        Rebuild an envelope from its JSON form.

        Raises:
            ParseError: If the schema version is not supported or a key is missing.
        """
        if data.get("schema") != SCHEMA_VERSION:
            raise ParseError(f"Unsupported report schema: {data.get('schema')!r}", field="schema")
        try:
            return cls(
                command=data["command"],
                inputs=data["inputs"],
                results=data["results"],
                assumptions=list(data.get("assumptions", [])),
                warnings=list(data.get("warnings", [])),
                propositions=list(data.get("propositions", [])),
                schema=data["schema"],
            )
        except KeyError as e:
            raise ParseError(f"Report is missing key {e}", field=str(e.args[0])) from e


def error_object(error: LlamaTiltError) -> Dict[str, Any]:
    """Machine-readable error report written on exit status 2."""
    return {
        "error": {
            "type": type(error).__name__,
            "message": str(error),
            "field": getattr(error, "field", None),
            "hypothesis": getattr(error, "hypothesis", None),
        },
        "schema": SCHEMA_VERSION,
    }


def canonical_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ",".join(_cell(item) for item in value)
    return str(value)


def _flatten(data: Dict[str, Any], prefix: str = "") -> List[List[str]]:
    rows = []
    for key in sorted(data):
        value = data[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_flatten(value, f"{name}."))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for index, item in enumerate(value):
                rows.extend(_flatten(item, f"{name}.{index}."))
        else:
            rows.append([name, _cell(value)])
    return rows


def to_frame(report: ReportEnvelope) -> pd.DataFrame:
    """
    Tabular view of a report.

    Commands with a fixed header yield one row per entry of
    ``results["rows"]``; every other command a ``field,value`` table.
    """
    header = TABLE_HEADERS.get(report.command)
    if header is not None and "rows" in report.results:
        rows = [[_cell(row.get(column)) for column in header] for row in report.results["rows"]]
        return pd.DataFrame(rows, columns=header, dtype=str)
    return pd.DataFrame(_flatten(report.results), columns=KEY_VALUE_HEADER, dtype=str)


def emit(report: ReportEnvelope, format: str = "json") -> str:
    """
    Serialize a report.

    Args:
        report: The report to serialize.
        format: "json" (canonical), "csv" (fixed headers) or "text".

    Returns:
        The serialized report.

    Raises:
        DomainError: For an unknown format.
    """
    if format == "json":
        return canonical_json(report.to_dict())
    if format == "csv":
        return to_frame(report).to_csv(index=False, lineterminator="\n")
    if format == "text":
        lines = [f"{report.command}"]
        frame = to_frame(report)
        lines.append(frame.to_string(index=False) if not frame.empty else "(no results)")
        for title, items in (
            ("assumptions", report.assumptions),
            ("warnings", report.warnings),
            ("propositions", report.propositions),
        ):
            if items:
                lines.append(f"{title}:")
                lines.extend(f"  - {item}" for item in items)
        return "\n".join(lines) + "\n"
    raise DomainError(f"Unknown output format: {format!r}", field="format")
