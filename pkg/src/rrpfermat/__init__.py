"""Arithmetic toolkit for the equations x^r + y^r = d z^p and
x^5 + y^5 = d z^p over totally real fields."""

__version__ = "0.1.0"
