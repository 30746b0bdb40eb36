"""Bound states, momentum distributions and tail exponents of symmetric
potential wells with a kink at the origin."""

__version__ = "0.1.0"
