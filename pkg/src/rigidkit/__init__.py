"""Rigidity analysis of bar-joint and body-bar frameworks in (R^d, lq)."""

__version__ = "0.1.0"
