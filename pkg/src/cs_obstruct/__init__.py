"""Exact toolkit for an instanton concordance obstruction on Whitehead doubles of torus knots."""

__version__ = "0.1.0"
