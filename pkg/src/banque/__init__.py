"""Exact equilibria of the three-person game baccara banque."""

__version__ = "0.1.0"
