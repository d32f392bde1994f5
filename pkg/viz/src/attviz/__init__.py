"""Render attitude trajectory bundles (JSONL) as sphere figures."""

from .io import Bundle, load_bundle
from .render import RenderSpec, render_s2, render_so3

__version__ = "0.1.0"

__all__ = ["Bundle", "load_bundle", "RenderSpec", "render_s2", "render_so3"]
