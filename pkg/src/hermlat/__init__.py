"""Genera, exact masses and single-class partial genera of definite unimodular
hermitian lattices over imaginary-quadratic fields."""

__version__ = "0.1.0"
