"""Terminal display, JSON encoding and SVG rendering."""

from .display import DisplayManager
from .render import RenderKind, render

__all__ = ["DisplayManager", "RenderKind", "render"]
