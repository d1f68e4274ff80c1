"""Computational commutative algebra in weighted (non-standard) graded polynomial rings."""

from .core import (
    Elementary,
    GradedAutomorphism,
    Polynomial,
    RingDescriptor,
    TermOrder,
    decompose_automorphism,
    lex_order,
    random_automorphism,
)
from .groebner import GenericityError, Ideal, MonomialIdeal, buchberger, colon, gin, initial_ideal, saturation
from .hilbert import gap_bound, hilbert_function, hilbert_series, quasi_polynomial, stabilization_degree
from .lex import is_lexicographic_ideal, lexify
from .polarization import completely_polarize, polarize
from .resolution import betti, depth, free_resolution, regularity
from .stability import is_strongly_stable, is_T_fixed

__all__ = [
    "Elementary", "GradedAutomorphism", "Polynomial", "RingDescriptor", "TermOrder",
    "decompose_automorphism", "lex_order", "random_automorphism", "GenericityError", "Ideal",
    "MonomialIdeal", "buchberger", "colon", "gin", "initial_ideal", "saturation", "gap_bound",
    "hilbert_function", "hilbert_series", "quasi_polynomial", "stabilization_degree",
    "is_lexicographic_ideal", "lexify", "completely_polarize", "polarize", "betti", "depth",
    "free_resolution", "regularity", "is_strongly_stable", "is_T_fixed",
]
