"""Exact semipositivity toolkit for matrices over polyhedral cones."""

__version__ = "0.1.0"
