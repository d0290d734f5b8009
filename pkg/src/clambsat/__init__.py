"""Stochastic SAT solving with synchronous circuit cells: two cell engines, a ProbSAT baseline and benchmark tooling."""

__version__ = "0.1.0"
