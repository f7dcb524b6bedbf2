"""Exact arithmetic substrate: sparse Laurent polynomials over Q and truncated series."""

from .context import ContextError, TruncationSpec, VarContext, make_context
from .poly import (
    InexactDivisionError,
    SparsePoly,
    add,
    divide_exact,
    monomial_inverse,
    mul,
    power,
    product,
    split_by,
    sub,
)
from .series import (
    FactoredRational,
    NonTerminatingExpansion,
    clear_constant_factors,
    expand_factored,
    geometric_multiply,
    normalize_factors,
)
from .serial import digest, dumps, loads
from .subst import substitute


def poly_arith(a: SparsePoly, b: SparsePoly, op: str) -> SparsePoly:
    """Dispatch ``add`` / ``sub`` / ``mul``; mul honours the context truncation."""
    if op == "add":
        return add(a, b)
    if op == "sub":
        return sub(a, b)
    if op == "mul":
        tr = a.ctx.truncation
        return mul(a, b, None if tr is None else tr.degree)
    raise ValueError(f"unknown op {op!r}")


__all__ = [
    "ContextError", "TruncationSpec", "VarContext", "make_context",
    "InexactDivisionError", "SparsePoly", "add", "sub", "mul", "power", "product",
    "divide_exact", "monomial_inverse", "split_by", "poly_arith",
    "FactoredRational", "NonTerminatingExpansion", "expand_factored",
    "geometric_multiply", "normalize_factors", "clear_constant_factors",
    "dumps", "loads", "digest", "substitute",
]
