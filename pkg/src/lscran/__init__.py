"""Scaling-law laboratory for dense cooperative radio access networks."""
