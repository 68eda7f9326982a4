"""Iterative ASR transcript correction with FSM-controlled neighbor search."""

__version__ = "0.1.0"
