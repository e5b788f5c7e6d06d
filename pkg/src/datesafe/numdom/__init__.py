"""Numerical abstract domains over named integer variables."""

from .expr import (
    FALSE,
    TRUE,
    And,
    BinOp,
    BoolConst,
    Cmp,
    Const,
    Not,
    Or,
    Var,
    conj,
    disj,
    evaluate,
    holds,
    is_one_of,
    linearize,
    negate,
)
from .grid import Grid
from .product import INF, K, ProductState

__all__ = [
    "ProductState",
    "Grid",
    "INF",
    "K",
    "Var",
    "Const",
    "BinOp",
    "Cmp",
    "And",
    "Or",
    "Not",
    "BoolConst",
    "TRUE",
    "FALSE",
    "conj",
    "disj",
    "is_one_of",
    "negate",
    "linearize",
    "evaluate",
    "holds",
]
