"""Bernoulli-type polynomials, polylogarithm delta functions and Lipschitz summation."""

__version__ = "0.1.0"
