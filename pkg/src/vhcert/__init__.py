"""Verification toolkit for one-vertex VH square complexes.

Checks the link condition, computes local permutation groups on tree
spheres, runs coset enumeration and Reidemeister-Schreier rewriting, and
chains the results into machine-checked simplicity certificates for
lattices acting on products of two regular trees.
"""

__version__ = "0.1.0"
