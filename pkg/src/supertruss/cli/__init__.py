"""Command-line front end and the ``.stx`` presentation format."""

from .app import SCHEMA_VERSION, execute, load_source, main, render_text, run, shipped_file
from .stx import parse_morphism, parse_stx, render_element, render_morphism, render_stx

__all__ = [
    "SCHEMA_VERSION",
    "execute",
    "load_source",
    "main",
    "parse_morphism",
    "parse_stx",
    "render_element",
    "render_morphism",
    "render_stx",
    "render_text",
    "run",
    "shipped_file",
]
