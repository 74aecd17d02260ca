"""Ginibre-type ensembles, exact cumulants and limit-variance checks."""
