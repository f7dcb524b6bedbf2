"""Factored rational functions ``num / prod(1 - m)`` and their truncated expansions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .context import BIAS, MASK, VarContext
from .poly import SparsePoly, _canon, _fix, divide_exact, product


class NonTerminatingExpansion(ValueError):
    """A denominator monomial has no positive series degree."""


@dataclass(frozen=True)
class FactoredRational:
    """``numerator / prod_i (1 - m_i)`` with each ``m_i`` a packed monomial key.

    ``scalar`` is an optional nonzero rational multiplier (``m_i`` carry
    coefficient 1 in ``1 - m_i``).
    """

    numerator: SparsePoly
    factors: tuple[int, ...] = ()
    scalar: Fraction | int = 1

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def ctx(self) -> VarContext:
        return self.numerator.ctx

    def check(self) -> None:
        for m in self.factors:
            if (m & MASK) - BIAS <= 0:
                raise NonTerminatingExpansion(
                    f"denominator factor 1 - {self.ctx.unpack(m)} has series degree "
                    f"{(m & MASK) - BIAS}"
                )

    def denominator(self) -> SparsePoly:
        ctx = self.ctx
        one = SparsePoly.one(ctx)
        return product((one - SparsePoly.from_key(ctx, m) for m in self.factors), ctx)

    def mul(self, other: "FactoredRational") -> "FactoredRational":
        return FactoredRational(
            self.numerator * other.numerator, self.factors + other.factors,
            _canon(Fraction(self.scalar) * Fraction(other.scalar)),
        )


def factor_key(ctx: VarContext, **powers: int) -> int:
    return ctx.monomial(**powers)


def geometric_multiply(p: SparsePoly, m: int, trunc: int) -> SparsePoly:
    """``p / (1 - m)`` truncated at series degree ``trunc``.

    Uses the recurrence ``out[k] = p[k] + out[k - m]`` along each chain.
    """
    ctx = p.ctx
    d = (m & MASK) - BIAS
    if d <= 0:
        raise NonTerminatingExpansion("geometric factor with non-positive series degree")
    lim = trunc + BIAS
    shift = m - ctx.zero
    out: dict[int, object] = {}
    src = {k: c for k, c in p.items() if (k & MASK) <= lim}
    seen = set()
    # visiting keys by series degree reaches each chain k, k+m, ... at its start
    for k in sorted(src, key=lambda k: k & MASK):
        if k in seen:
            continue
        acc = 0
        while (k & MASK) <= lim:
            seen.add(k)
            acc = acc + src.get(k, 0)
            if acc:
                out[k] = acc
            k += shift
    return SparsePoly(ctx, _fix(out), _trusted=True)


def expand_factored(f: FactoredRational, degree: int) -> SparsePoly:
    """Series expansion of ``f`` keeping total series degree <= ``degree``."""
    f.check()
    p = f.numerator.truncate(degree)
    if f.scalar != 1:
        p = p.scale(f.scalar)
    # large-degree factors first keeps intermediate supports small
    for m in sorted(f.factors, key=lambda k: -((k & MASK) - BIAS)):
        p = geometric_multiply(p, m, degree)
    return p


def normalize_factors(
    numerator: SparsePoly, factors: Sequence[int]
) -> tuple[FactoredRational, list[int]]:
    """Rewrite ``numerator / prod(1 - m)`` for expansion.

    Factors of negative series degree are flipped with
    ``1 - m = -m (1 - 1/m)``.  Factors of series degree zero cannot be
    expanded; they are returned separately so the caller can clear them.
    """
    ctx = numerator.ctx
    z = ctx.zero
    num = numerator
    keep: list[int] = []
    const: list[int] = []
    for m in factors:
        d = (m & MASK) - BIAS
        if d > 0:
            keep.append(m)
        elif d < 0:
            inv = 2 * z - m
            # 1/(1-m) = -m^{-1} / (1 - m^{-1})
            num = -num.shift(inv)
            keep.append(inv)
        else:
            const.append(m)
    return FactoredRational(num, tuple(keep)), const


def clear_constant_factors(p: SparsePoly, const: Iterable[int]) -> SparsePoly:
    """Divide ``p`` exactly by every ``1 - m`` in ``const``."""
    ctx = p.ctx
    one = SparsePoly.one(ctx)
    for m in const:
        p = divide_exact(p, one - SparsePoly.from_key(ctx, m))
    return p
