"""Variable contexts and the packed monomial encoding.

A monomial is stored as one Python integer.  Every field is ``WIDTH`` bits
wide and holds ``exponent + BIAS``.  From most to least significant the
fields are: total degree, the variables in declaration order, and the
series degree.  With that layout

* multiplying monomials is ``k1 + k2 - ctx.zero``,
* integer comparison of keys is graded-lexicographic comparison of the
  exponent vectors (the series degree is a function of the exponents, so it
  never breaks a tie), and
* the series degree of a key is ``(key & MASK) - BIAS``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

WIDTH = 24
MASK = (1 << WIDTH) - 1
BIAS = 1 << (WIDTH - 1)


class ContextError(ValueError):
    """Operands live in different variable contexts, or a flag is violated."""


@dataclass(frozen=True)
class TruncationSpec:
    """Total-degree bound over the series-flagged variables."""

    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("truncation degree must be >= 0")


@dataclass(frozen=True, eq=False)
class VarContext:
    """Ordered variable names with per-variable Laurent / series flags.

    ``truncation`` is optional; when set, products computed through the
    operator interface are truncated at that series degree.
    """

    names: tuple[str, ...]
    laurent: frozenset[str] = frozenset()
    series: frozenset[str] = frozenset()
    truncation: TruncationSpec | None = None
    _index: dict = field(init=False, repr=False, compare=False)
    _zero: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "laurent", frozenset(self.laurent))
        object.__setattr__(self, "series", frozenset(self.series))
        if len(set(names)) != len(names):
            raise ContextError(f"duplicate variable names in {names}")
        unknown = (self.laurent | self.series) - set(names)
        if unknown:
            raise ContextError(f"flags on unknown variables {sorted(unknown)}")
        both = self.laurent & self.series
        if both:
            raise ContextError(f"variables both Laurent and series: {sorted(both)}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})
        nf = len(names) + 2
        object.__setattr__(self, "_zero", sum(BIAS << (WIDTH * p) for p in range(nf)))

    # identity ignores the truncation attachment
    def _sig(self):
        return (self.names, self.laurent, self.series)

    def __eq__(self, other):
        return isinstance(other, VarContext) and self._sig() == other._sig()

    def __hash__(self):
        return hash(self._sig())

    def with_truncation(self, degree: int | None) -> "VarContext":
        spec = None if degree is None else TruncationSpec(degree)
        return VarContext(self.names, self.laurent, self.series, spec)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def zero(self) -> int:
        """Key of the constant monomial."""
        return self._zero

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContextError(f"unknown variable {name!r}") from None

    def is_laurent(self, name: str) -> bool:
        return name in self.laurent

    # -- packing -------------------------------------------------------------

    def pack(self, exps: Sequence[int]) -> int:
        n = len(self.names)
        if len(exps) != n:
            raise ContextError(f"exponent vector of length {len(exps)}, expected {n}")
        key = 0
        total = 0
        sdeg = 0
        for name, e in zip(self.names, exps):
            if e < 0 and name not in self.laurent:
                raise ContextError(f"negative exponent for non-Laurent variable {name!r}")
            total += e
            if name in self.series:
                sdeg += e
            key = (key << WIDTH) | (e + BIAS)
        key = ((total + BIAS) << (WIDTH * (n + 1))) | (key << WIDTH) | (sdeg + BIAS)
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        n = len(self.names)
        return tuple(((key >> (WIDTH * (n - i))) & MASK) - BIAS for i in range(n))

    def monomial(self, **powers: int) -> int:
        exps = [0] * len(self.names)
        for name, e in powers.items():
            exps[self.index(name)] = e
        return self.pack(exps)

    @staticmethod
    def series_degree(key: int) -> int:
        return (key & MASK) - BIAS

    def total_degree(self, key: int) -> int:
        return (key >> (WIDTH * (len(self.names) + 1))) - BIAS

    def check_same(self, other: "VarContext") -> None:
        if self != other:
            raise ContextError(f"context mismatch: {self.names} vs {other.names}")


def make_context(
    names: Iterable[str],
    *,
    laurent: Iterable[str] = (),
    series: Iterable[str] = (),
    truncation: int | None = None,
) -> VarContext:
    spec = None if truncation is None else TruncationSpec(truncation)
    return VarContext(tuple(names), frozenset(laurent), frozenset(series), spec)
