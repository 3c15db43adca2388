"""Exact dynamical twists over finite group algebras.

Construction, verification, gauge classification, and the two-way passage
between twists and induction data (subgroup + projective representation
family), all in exact cyclotomic arithmetic.
"""

from .scalars import CycScalar, RootOfUnity

__all__ = ["CycScalar", "RootOfUnity"]
__version__ = "0.1.0"
