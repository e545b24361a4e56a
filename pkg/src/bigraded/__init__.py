"""bigraded: an exact-arithmetic workbench for bigraded homology boxes,
slope and stability-range calculus, tautological-ring pairings, and finite
poset connectivity checking."""

__version__ = "0.1.0"
