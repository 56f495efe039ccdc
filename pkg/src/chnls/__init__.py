"""Pseudospectral solver and asymptotic-soliton laboratory for the defocusing
Camassa-Holm NLS equation."""

__version__ = "0.1.0"
