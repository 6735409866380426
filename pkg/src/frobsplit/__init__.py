"""Frobenius splittings of invariant rings in characteristic p, computed concretely."""

__version__ = "0.1.0"
