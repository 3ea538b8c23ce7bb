"""Exact Weyl-algebra kernel and identity checks for the TTW integrals."""

from .polyring import ParamPoly
from .weyl import DiffOp, op_apply, op_commutator, op_compose, op_linear
from .expr import parse_operator, print_operator

__all__ = [
    "ParamPoly",
    "DiffOp",
    "op_apply",
    "op_commutator",
    "op_compose",
    "op_linear",
    "parse_operator",
    "print_operator",
]
