"""Noncrossing partition posets, dual Artin presentations and interval complexes."""

__version__ = "0.1.0"
