"""Exact lattice and intersection-theory computations for O'Grady-10 moduli spaces."""

__version__ = "0.1.0"
