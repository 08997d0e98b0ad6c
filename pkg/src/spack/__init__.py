"""Exact S-packing colorings, vertex-criticality and small-graph census."""

__version__ = "0.1.0"
