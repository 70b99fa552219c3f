"""Exact desk-scale computations of coarse (co)homology on sampled metric spaces."""

__version__ = "0.1.0"

from .algebra import GF, QQ, ZZ, HomologyGroup, SparseMatrix, homology, parse_ring, smith_normal_form, solve_linear
from .chain_complex import (Chain, Cochain, augment, boundary, build_window_complex, coboundary, cone_homotopy,
                            support, window_complex)
from .metric_space import MetricSpace, load_space
