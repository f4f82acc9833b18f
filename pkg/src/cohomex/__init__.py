"""Integral cohomology of small finite groups and exponent-bound checks."""

__version__ = "0.1.0"
