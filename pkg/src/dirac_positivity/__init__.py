"""Positivity preservation of the free Euclidean Dirac equation."""
