"""Simulation and optimization toolkit for the three-qubit quantum absorption refrigerator."""

__version__ = "0.1.0"
