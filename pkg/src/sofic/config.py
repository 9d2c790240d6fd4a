"""
run-time limits and environment overrides
"""

from __future__ import annotations
import importlib.resources
import json
import logging
import os

from .parallel import get_cpu_count

THREADS_ENV = "SOFIC_THREADS"


def load_limits() -> dict[str, int]:
    """defaults shipped in limits.json"""

    raw = importlib.resources.read_text("sofic", "limits.json")
    return json.loads(raw)


def limit(name: str) -> int:
    try:
        return int(load_limits()[name])
    except KeyError:
        raise KeyError(f"{name} is not a known limit in limits.json")


def check_word_length(length: int) -> int:
    """exhaustive enumerations refuse lengths above max_word_length"""

    top = limit("max_word_length")
    if length < 0:
        raise ValueError(f"word length must be non-negative, got {length}")
    if length > top:
        raise ValueError(f"word length {length} exceeds max_word_length {top}")
    return length


def worker_count(override: int = None) -> int:
    """
    number of worker threads

    priority: explicit override, then environment variable SOFIC_THREADS,
    then the physical CPU count.
    """

    if override is not None:
        if override < 1:
            raise ValueError("thread count must be at least one")
        return override

    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
            if n >= 1:
                return n
        except ValueError:
            pass
        n = get_cpu_count()
        logging.warning(f"{THREADS_ENV}={env} is not a positive integer, falling back to {n}")
        return n

    return get_cpu_count()
