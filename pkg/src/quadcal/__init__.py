"""Calibers, m-calibers, class numbers and fundamental units of real quadratic discriminants."""

__version__ = "0.1.0"
