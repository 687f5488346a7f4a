"""Bundled example inputs."""

from importlib.resources import files
from pathlib import Path


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture: ``reviews.csv``, ``emoji.tsv`` or ``ratings.csv``."""
    return Path(str(files(__package__) / name))
