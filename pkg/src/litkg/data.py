"""Paths to the packaged default configuration files."""

from __future__ import annotations

from pathlib import Path

_DATA_DIR = Path(__file__).parent / "data"


def default_whitelist_path() -> Path:
    """Disease-term CUIs that filtering always retains."""
    return _DATA_DIR / "ad_whitelist.txt"


def default_semtype_rules_path() -> Path:
    """Semantic-type codes excluded as too generic to carry signal."""
    return _DATA_DIR / "excluded_semtypes.txt"
