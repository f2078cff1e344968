"""Simulation lab for pooled, tranched emerging-market sovereign bonds."""

__version__ = "0.1.0"
