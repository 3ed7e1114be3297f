"""Algorithms for graph products of cyclic groups."""

from graphprod.graph import SimplicialGraph
from graphprod.words import IDENTITY, NormalForm, Presentation, multiply, invert, reduce

__all__ = ["IDENTITY", "NormalForm", "Presentation", "SimplicialGraph", "invert", "multiply", "reduce"]
