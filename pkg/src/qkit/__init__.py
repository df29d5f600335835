"""Numerical checks for Q-systems and W*-algebra objects in unitary fusion categories."""

__version__ = "0.1.0"
