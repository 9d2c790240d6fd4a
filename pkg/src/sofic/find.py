"""
functions for finding input files
"""

from __future__ import annotations
import importlib.resources
import json
import sys
import typing as T
from pathlib import Path

FIXTURE_PACKAGE = "sofic.fixtures"


def catalog() -> dict[str, dict[str, str]]:
    """shipped worked examples, by file name"""

    return json.loads(importlib.resources.read_text(FIXTURE_PACKAGE, "fixtures.json"))


def fixture(name: str) -> str:
    """text of a shipped fixture"""

    if name not in catalog():
        raise FileNotFoundError(f"{name} is not a shipped fixture, see --fixtures")

    return importlib.resources.read_text(FIXTURE_PACKAGE, name)


def read_input(name: str | Path, stdin: T.TextIO = None) -> str:
    """
    text of an input given as '-' (stdin), an existing file or a fixture name

    A file on disk takes precedence over a fixture of the same name.
    """

    if str(name) == "-":
        return (stdin or sys.stdin).read()

    path = Path(name).expanduser()
    if path.is_file():
        return path.read_text()
    if path.is_dir():
        raise FileNotFoundError(f"give a filename, not a directory {path}")

    try:
        return fixture(str(name))
    except FileNotFoundError:
        raise FileNotFoundError(f"{name} is neither a file nor a shipped fixture")
