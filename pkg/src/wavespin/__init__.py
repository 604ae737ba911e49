"""Exact Dirac eigenstates of a 2D infinite well, their current densities,
vortex structure and first-order current-field interaction energies."""

__version__ = "0.1.0"
