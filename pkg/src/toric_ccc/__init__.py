"""Exact constructible-function and toric Theta-complex toolkit."""

__version__ = "0.1.0"
