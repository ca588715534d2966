"""Bundled case-study implementations (``*.obj`` DSL sources)."""

from __future__ import annotations

from importlib import resources

from lintrack.lang.parser import parse_implementation

NAMES = ("rwcas", "atomic_register", "broken_write", "stale_read")


def path(name: str):
    """Filesystem path of a bundled source, e.g. ``path("rwcas")``."""
    return resources.files(__name__).joinpath(f"{name}.obj")


def source(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def load(name: str, domains=None):
    return parse_implementation(source(name), domains)
