"""Polars, quasi-convex hulls and qc-density certificates for finite abelian
groups and truncated models of T, Z_p, their products and the solenoid."""

__version__ = "0.1.0"
