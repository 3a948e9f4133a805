"""Hypergraph containers, Janson-type edge measures, and desk-scale
induced-Ramsey experiments."""

__version__ = "0.1.0"
