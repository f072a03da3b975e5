"""Collective dissipation and pairwise entanglement of qubit registers."""

__version__ = "0.1.0"
