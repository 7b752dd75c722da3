"""Quantum weighted entropy: functionals, trace inequalities and their numerical verification."""

__version__ = "0.1.0"
