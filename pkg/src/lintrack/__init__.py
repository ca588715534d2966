"""Bounded linearizability checking by tracking all possible linearizations."""

__version__ = "0.1.0"
