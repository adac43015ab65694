"""Exhaustive computations on the surface x0 x1^q - x1 x0^q + x2 x3^q - x3 x2^q = 0."""

__version__ = "0.1.0"
