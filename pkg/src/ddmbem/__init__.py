"""Boundary-element domain decomposition for time-harmonic scattering by perfect conductors."""

__version__ = "0.1.0"
