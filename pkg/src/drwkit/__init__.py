"""Exact computations with log de Rham-Witt complexes, Witt vectors and Koszul models."""

__version__ = "0.1.0"
