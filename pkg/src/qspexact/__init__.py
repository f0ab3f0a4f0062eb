"""Exact constructions for quantum signal processing pre-processing."""

__version__ = "0.1.0"
