"""Fundamental groups, coverings and orbifold Euler data of complexes of groups."""

__version__ = "0.1.0"
