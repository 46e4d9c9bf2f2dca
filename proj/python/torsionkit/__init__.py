"""Python front end for the torsionkit C++ core.

Documents and reports are plain dicts; the heavy lifting happens in the
compiled ``_torsionkit`` extension.
"""

import json
import os

from ._torsionkit import (
    InvariantBreach,
    SolverError,
    ValidationError,
    commands,
    conley_zehnder,
    planar_upper_bound,
)
from . import _torsionkit

__all__ = [
    "InvariantBreach",
    "SolverError",
    "ValidationError",
    "commands",
    "conley_zehnder",
    "planar_upper_bound",
    "load",
    "run",
    "run_checked",
]


def load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _document_text(document):
    if isinstance(document, (str, os.PathLike)) and os.path.exists(document):
        with open(document, encoding="utf-8") as fh:
            return fh.read()
    if isinstance(document, str):
        return document
    return json.dumps(document)


def run(document, command, **options):
    """Run a command; returns the report dict or raises one of the error types."""
    return json.loads(_torsionkit.run(_document_text(document), command, json.dumps(options)))


def run_checked(document, command, **options):
    """Run a command; returns (report dict, exit code) without raising."""
    text, code = _torsionkit.run_checked(_document_text(document), command, json.dumps(options))
    return json.loads(text), code
