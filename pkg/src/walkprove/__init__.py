"""Guess-and-prove toolkit for lattice walk generating functions."""

__version__ = "0.1.0"
