"""Exact functional Welch bounds over p-adic and Laurent scalar domains."""

__version__ = "0.1.0"

from .linalg import FrameConfig, frame_operator, gram, is_scalar_identity, trace
from .scalar import AbsValue, Backend, Laurent, valuation
from .search import SearchSpace, search_equality, search_equiangular, search_zauner
from .symtensor import sym_dim, sym_frame_operator
from .welch import Variant, Verdict, check_bound, check_unital

__all__ = [
    "AbsValue",
    "Backend",
    "FrameConfig",
    "Laurent",
    "SearchSpace",
    "Variant",
    "Verdict",
    "check_bound",
    "check_unital",
    "frame_operator",
    "gram",
    "is_scalar_identity",
    "search_equality",
    "search_equiangular",
    "search_zauner",
    "sym_dim",
    "sym_frame_operator",
    "trace",
    "valuation",
]
