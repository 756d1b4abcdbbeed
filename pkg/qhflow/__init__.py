"""Structural stability of planar quasihomogeneous vector fields."""
