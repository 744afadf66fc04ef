"""Deterministic figure renderer for monitored-circuit result tables."""

from .render import FIGURE_KINDS, RenderError, render

__all__ = ["FIGURE_KINDS", "RenderError", "render"]
