"""Kronecker-quiver pairings, reflections and exceptional slopes in exact arithmetic."""

__version__ = "0.1.0"
