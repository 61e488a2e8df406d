"""Csiszar f-divergences, MN-convexity classification and inequality checks."""
__version__ = "0.1.0"
