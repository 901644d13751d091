"""Exact toolkit for rational varieties with a torus action of complexity one."""

__version__ = "0.1.0"
