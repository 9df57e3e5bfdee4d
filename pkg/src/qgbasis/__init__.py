"""Exact experiments with the Lindenstrauss basis of l1 and its greedy behaviour."""

from .vectors import CoeffMap, SparseVec, l1_norm, linear_combine, pair, restrict, sup_norm
from .lindenstrauss import (
    NotInSpan,
    alpha_chain,
    analyze,
    basis_vector,
    dual_vector,
    expand,
    expansion_norm,
    level,
    parent,
)

__version__ = "0.1.0"
