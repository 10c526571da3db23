"""
Job file tests for LlamaTilt.

This module contains tests for parsing and loading declarative job files.
"""

from fractions import Fraction

import pytest

from llamatilt.chern import PolarizedGeometry, TiltParameter
from llamatilt.jobfile import (
    BOOLEAN_FIELDS,
    JobfileError,
    JobSpec,
    load_jobfile,
    parse_jobfile_text,
    parse_lattice,
)
from llamatilt.utils import ParseError

F = Fraction

FAMILY_JOB = """\
# unstable family on P^3
command = p3-family
n = 2
m = 2   # same parity as n
"""


def test_parse_family_job():
    """Test a minimal job file with comments."""
    job = parse_jobfile_text(FAMILY_JOB)
    assert job.command == "p3-family"
    assert job.values == {"command": "p3-family", "n": "2", "m": "2"}
    assert job.payload == {"n": "2", "m": "2"}
    assert job.parameter is None
    assert job.geometry == PolarizedGeometry()


def test_geometry_and_parameter():
    """Test the derived geometry and tilt parameter."""
    job = parse_jobfile_text("command = slope\nD = 5\nlattice = 1,1,2,6\nalpha_sq = 7/2\nbeta = -1/3\nv = 1,0,-1,1\n")
    assert job.geometry == PolarizedGeometry(F(5))
    assert job.parameter == TiltParameter(F(7, 2), F(-1, 3))
    assert job.payload == {"v": "1,0,-1,1"}


def test_integer_lattice():
    """Test that lattice denominators are read as integers."""
    job = parse_jobfile_text("command = slope\nlattice = 1,1,4/2,6\n")
    assert job.geometry.lattice_denoms == (1, 1, 2, 6)
    assert parse_lattice("2,2,4,12") == (2, 2, 4, 12)
    with pytest.raises(ParseError) as excinfo:
        parse_lattice("1,3/2,2,6")
    assert excinfo.value.field == "lattice"


def test_from_options():
    """Test collecting a job from parsed command-line options."""
    options = {"command": "bmt", "v": "-3,6,-2,2", "alpha_sq": "4", "beta": "0", "D": "1",
               "lattice": "1,1,2,6", "form": "strong", "format": "json", "output": None,
               "prune": False, "jobfile": "ignored.job", "verbose": True}
    job = JobSpec.from_options("bmt", options)
    assert job.command == "bmt"
    assert job.values["command"] == "bmt"
    assert "jobfile" not in job.values and "output" not in job.values
    assert job.geometry == PolarizedGeometry()
    assert job.parameter == TiltParameter(4, 0)
    assert job.payload == {"v": "-3,6,-2,2", "form": "strong"}


def test_boolean_fields():
    """Test that flags are recognized as booleans."""
    assert {"hypersurface", "prune", "no_quotient_check", "case_split"} == set(BOOLEAN_FIELDS)
    job = parse_jobfile_text("command = search\nprune = yes\ncase_split = false\n")
    assert job.values["prune"] == "yes"
    with pytest.raises(JobfileError):
        parse_jobfile_text("prune = maybe\n")


@pytest.mark.parametrize("text,line,field", [
    ("command = slope\nalpha_sq = 0.5\n", 2, "alpha_sq"),
    ("command = slope\nv = 1,0,0\n", 2, "v"),
    ("command = slope\n\n# note\ncolour = red\n", 4, "colour"),
    ("n = 2\nn = 3\n", 2, "n"),
    ("command = plot\n", 1, "command"),
    ("command = p3-family\nn = 2.0\n", 2, "n"),
    ("format = xml\n", 1, "format"),
    ("command = slope\nlattice = 1,3/2,2,6\n", 2, "lattice"),
])
def test_invalid_entries(text, line, field, tmp_path):
    """Test that every rejected entry reports its line and field."""
    path = tmp_path / "job.txt"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(JobfileError) as excinfo:
        load_jobfile(path)
    assert excinfo.value.line == line
    assert excinfo.value.field == field
    assert str(excinfo.value).startswith(f"{path}:{line}: ")


def test_malformed_line():
    """Test that a line without '=' is rejected."""
    with pytest.raises(JobfileError) as excinfo:
        parse_jobfile_text("command = slope\njust text\n")
    assert excinfo.value.line == 2


def test_jobfile_error_is_parse_error():
    """Test that job file errors are reported like other parse errors."""
    with pytest.raises(ParseError):
        parse_jobfile_text("alpha_sq = 1e3\n")


def test_load_jobfile(tmp_path):
    """Test loading a job file from disk."""
    path = tmp_path / "family.job"
    path.write_text(FAMILY_JOB, encoding="utf-8")
    job = load_jobfile(str(path))
    assert job.source == path
    assert job.command == "p3-family"


def test_missing_jobfile(tmp_path):
    """Test that a missing file is a job file error."""
    with pytest.raises(JobfileError) as excinfo:
        load_jobfile(tmp_path / "missing.job")
    assert excinfo.value.field == "jobfile"
