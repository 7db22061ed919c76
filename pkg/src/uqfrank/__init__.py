"""Rank bounds for universal quadratic lattices over real quadratic fields."""
__version__ = "0.1.0"
