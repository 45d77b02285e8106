"""Quantum reading with classical error-correcting codes."""

__version__ = "0.1.0"
