"""Multilinear models of bounded read: rank measures, hard polynomials,
strict-interval ABP conversion, ROABP identity testing and depth reduction."""

__version__ = "0.1.0"

from .abp import Abp, Edge, abp_expand, path_abp
from .field import DEFAULT_PRIME, FieldElem, ff_arith
from .formula import Const, Formula, Prod, Sum, Var, formula_expand
from .kernels import BACKEND
from .partitions import BlockStructure, Coloring, Pairing, Partition
from .pit import PitResult, roabp_pit, strict_interval_pit
from .poly import MultilinearPoly, mlp_add, mlp_eval, mlp_mul
from .rank import pd_matrix, rank_of
from .rng import SplitMix64, derive_seed
from .transforms import (
    classify_nodes,
    depth_reduce_interval,
    find_tree_separator,
    one_order_to_roabp,
    reverse_abp,
    split_asc_desc,
    strict_interval_to_roabp,
    sum_roabps,
)

__all__ = [
    "__version__",
    "Abp",
    "BACKEND",
    "BlockStructure",
    "Coloring",
    "Const",
    "DEFAULT_PRIME",
    "Edge",
    "FieldElem",
    "Formula",
    "MultilinearPoly",
    "Pairing",
    "Partition",
    "PitResult",
    "Prod",
    "SplitMix64",
    "Sum",
    "Var",
    "abp_expand",
    "classify_nodes",
    "depth_reduce_interval",
    "derive_seed",
    "ff_arith",
    "find_tree_separator",
    "formula_expand",
    "mlp_add",
    "mlp_eval",
    "mlp_mul",
    "one_order_to_roabp",
    "path_abp",
    "pd_matrix",
    "rank_of",
    "reverse_abp",
    "roabp_pit",
    "split_asc_desc",
    "strict_interval_pit",
    "strict_interval_to_roabp",
    "sum_roabps",
]
