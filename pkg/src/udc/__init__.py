"""Exact modular expansions, uniformization numerics, and subgroup arithmetic."""

__version__ = "0.1.0"
