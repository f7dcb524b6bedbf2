"""Sparse multivariate Laurent polynomials with exact rational coefficients."""

from __future__ import annotations

import heapq
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, Union

from .context import BIAS, MASK, WIDTH, ContextError, VarContext

Coeff = Union[int, Fraction]


class InexactDivisionError(ArithmeticError):
    """Raised by :func:`divide_exact` when the remainder is nonzero."""

    def __init__(self, message, leading_term=None):
        super().__init__(message)
        self.leading_term = leading_term


def _canon(c) -> Coeff:
    """Exact canonical coefficient: ``int`` when integral, else ``Fraction``."""
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"coefficient {c!r} is not an exact rational")


class SparsePoly:
    """Immutable sparse Laurent polynomial over Q.

    Terms are kept in a dict from packed monomial keys (see
    :mod:`rsverify.exactalg.context`) to nonzero exact coefficients.
    """

    __slots__ = ("ctx", "_t", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[int, Coeff] | None = None, *, _trusted=False):
        self.ctx = ctx
        if terms is None:
            self._t = {}
        elif _trusted:
            self._t = terms  # caller guarantees canonical, nonzero coefficients
        else:
            self._t = {k: c for k, c in ((k, _canon(c)) for k, c in terms.items()) if c}
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ctx: VarContext) -> "SparsePoly":
        return cls(ctx, {}, _trusted=True)

    @classmethod
    def const(cls, ctx: VarContext, c) -> "SparsePoly":
        c = _canon(c)
        return cls(ctx, {ctx.zero: c} if c else {}, _trusted=True)

    @classmethod
    def one(cls, ctx: VarContext) -> "SparsePoly":
        return cls(ctx, {ctx.zero: 1}, _trusted=True)

    @classmethod
    def var(cls, ctx: VarContext, name: str) -> "SparsePoly":
        return cls(ctx, {ctx.monomial(**{name: 1}): 1}, _trusted=True)

    @classmethod
    def mono(cls, ctx: VarContext, coeff=1, **powers: int) -> "SparsePoly":
        c = _canon(coeff)
        return cls(ctx, {ctx.monomial(**powers): c} if c else {}, _trusted=True)

    @classmethod
    def from_exponents(cls, ctx: VarContext, terms: Iterable[tuple[Iterable[int], Coeff]]) -> "SparsePoly":
        out: dict[int, Coeff] = {}
        for exps, c in terms:
            k = ctx.pack(tuple(exps))
            out[k] = out.get(k, 0) + _canon(c)
        return cls(ctx, out)

    @classmethod
    def from_key(cls, ctx: VarContext, key: int, coeff=1) -> "SparsePoly":
        c = _canon(coeff)
        return cls(ctx, {key: c} if c else {}, _trusted=True)

    # -- inspection ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def keys(self):
        return self._t.keys()

    def items(self):
        return self._t.items()

    def coeff_of_key(self, key: int) -> Coeff:
        return self._t.get(key, 0)

    def coeff(self, **powers: int) -> Coeff:
        return self._t.get(self.ctx.monomial(**powers), 0)

    def terms(self) -> Iterator[tuple[tuple[int, ...], Coeff]]:
        """(exponents, coefficient) pairs in canonical (descending grlex) order."""
        unpack = self.ctx.unpack
        for k in sorted(self._t, reverse=True):
            yield unpack(k), self._t[k]

    def leading_key(self) -> int:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        return max(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and self.ctx.zero in self._t)

    def constant_term(self) -> Coeff:
        return self._t.get(self.ctx.zero, 0)

    def max_series_degree(self) -> int:
        if not self._t:
            return -1
        return max((k & MASK) - BIAS for k in self._t)

    def min_series_degree(self) -> int:
        if not self._t:
            return -1
        return min((k & MASK) - BIAS for k in self._t)

    def variables(self) -> set[str]:
        used = set()
        for exps, _ in self.terms():
            used.update(n for n, e in zip(self.ctx.names, exps) if e)
        return used

    def min_exponents(self) -> tuple[int, ...]:
        vecs = [self.ctx.unpack(k) for k in self._t]
        return tuple(min(col) for col in zip(*vecs)) if vecs else (0,) * self.ctx.nvars

    def max_exponents(self) -> tuple[int, ...]:
        vecs = [self.ctx.unpack(k) for k in self._t]
        return tuple(max(col) for col in zip(*vecs)) if vecs else (0,) * self.ctx.nvars

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self._t.values())

    # -- equality / hashing --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.ctx == other.ctx and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({self.ctx.zero: _canon(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._t.items())))
        return self._hash

    def __repr__(self):
        return f"SparsePoly({to_string(self)})"

    def __str__(self):
        return to_string(self)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self.ctx.check_same(other.ctx)
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(self.ctx, other)
        raise TypeError(f"cannot combine SparsePoly with {type(other).__name__}")

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, self._coerce(other))

    def __rsub__(self, other):
        return sub(self._coerce(other), self)

    def __neg__(self):
        return SparsePoly(self.ctx, {k: -c for k, c in self._t.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        tr = self.ctx.truncation
        return mul(self, other, None if tr is None else tr.degree)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._t) == 1:
                (k, c), = self._t.items()
                return monomial_inverse(self) ** (-n)
            raise ValueError("negative power of a non-monomial")
        tr = self.ctx.truncation
        return power(self, n, None if tr is None else tr.degree)

    def scale(self, c) -> "SparsePoly":
        c = _canon(c)
        if not c:
            return SparsePoly.zero(self.ctx)
        if c == 1:
            return self
        if type(c) is int and self.is_integral():
            return SparsePoly(self.ctx, {k: v * c for k, v in self._t.items()}, _trusted=True)
        return SparsePoly(self.ctx, {k: v * c for k, v in self._t.items()})

    def shift(self, key: int) -> "SparsePoly":
        """Multiply by the monomial with packed key ``key`` (coefficient 1)."""
        z = self.ctx.zero
        d = key - z
        out = {k + d: c for k, c in self._t.items()}
        _check_flags(self.ctx, out)
        return SparsePoly(self.ctx, out, _trusted=True)

    def truncate(self, degree: int) -> "SparsePoly":
        """Drop every term whose series degree exceeds ``degree``."""
        lim = degree + BIAS
        return SparsePoly(self.ctx, {k: c for k, c in self._t.items() if (k & MASK) <= lim}, _trusted=True)

    def map_coefficients(self, f: Callable[[Coeff], Coeff]) -> "SparsePoly":
        return SparsePoly(self.ctx, {k: f(c) for k, c in self._t.items()})

    def filter_keys(self, pred: Callable[[int], bool]) -> "SparsePoly":
        return SparsePoly(self.ctx, {k: c for k, c in self._t.items() if pred(k)}, _trusted=True)

    def evaluate(self, point: Mapping[str, object]):
        """Numeric evaluation; ``point`` must bind every variable that occurs."""
        vals = []
        for name in self.ctx.names:
            vals.append(point.get(name))
        total = 0
        for exps, c in self.terms():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    if v is None:
                        raise KeyError("unbound variable in evaluate")
                    term = term * v ** e
            total = total + term
        return total

    def recast(self, ctx: VarContext) -> "SparsePoly":
        """Same polynomial in a context that differs only by its truncation."""
        self.ctx.check_same(ctx)
        return SparsePoly(ctx, self._t, _trusted=True)


def _check_flags(ctx: VarContext, terms) -> None:
    if len(ctx.laurent) == ctx.nvars:
        return
    bad = [n for n in ctx.names if n not in ctx.laurent]
    idx = [ctx.index(n) for n in bad]
    for k in terms:
        exps = ctx.unpack(k)
        for i in idx:
            if exps[i] < 0:
                raise ContextError(f"negative exponent for non-Laurent variable {ctx.names[i]!r}")


def _fix(out: dict) -> dict:
    """Drop zeros and canonicalise Fractions in place."""
    dead = []
    for k, c in out.items():
        if not c:
            dead.append(k)
        elif type(c) is not int and c.denominator == 1:
            out[k] = c.numerator
    for k in dead:
        del out[k]
    return out


def add(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    a.ctx.check_same(b.ctx)
    if len(a._t) < len(b._t):
        a, b = b, a
    out = dict(a._t)
    get = out.get
    for k, c in b._t.items():
        out[k] = get(k, 0) + c
    return SparsePoly(a.ctx, _fix(out), _trusted=True)


def sub(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    a.ctx.check_same(b.ctx)
    out = dict(a._t)
    get = out.get
    for k, c in b._t.items():
        out[k] = get(k, 0) - c
    return SparsePoly(a.ctx, _fix(out), _trusted=True)


def mul(a: SparsePoly, b: SparsePoly, trunc: int | None = None) -> SparsePoly:
    """Exact product; with ``trunc`` only series degree <= trunc is kept."""
    a.ctx.check_same(b.ctx)
    if len(a._t) > len(b._t):
        a, b = b, a
    if not a._t:
        return SparsePoly.zero(a.ctx)
    z = a.ctx.zero
    out: dict[int, Coeff] = {}
    get = out.get
    if trunc is None:
        bi = list(b._t.items())
        for ka, ca in a._t.items():
            d = ka - z
            for kb, cb in bi:
                k = kb + d
                out[k] = get(k, 0) + ca * cb
    else:
        lim = trunc + BIAS
        # group b by series degree so each a-term can stop early
        bs = sorted(b._t.items(), key=lambda kv: kv[0] & MASK)
        bdeg = [(kb & MASK) - BIAS for kb, _ in bs]
        for ka, ca in a._t.items():
            da = (ka & MASK) - BIAS
            if da + BIAS > lim:
                continue
            room = trunc - da
            d = ka - z
            for (kb, cb), db in zip(bs, bdeg):
                if db > room:
                    break
                k = kb + d
                out[k] = get(k, 0) + ca * cb
    return SparsePoly(a.ctx, _fix(out), _trusted=True)


def power(p: SparsePoly, n: int, trunc: int | None = None) -> SparsePoly:
    result = SparsePoly.one(p.ctx)
    base = p
    while n:
        if n & 1:
            result = mul(result, base, trunc)
        n >>= 1
        if n:
            base = mul(base, base, trunc)
    return result


def product(factors: Iterable[SparsePoly], ctx: VarContext, trunc: int | None = None) -> SparsePoly:
    result = SparsePoly.one(ctx)
    for f in factors:
        result = mul(result, f, trunc)
    return result


def monomial_inverse(p: SparsePoly) -> SparsePoly:
    if len(p._t) != 1:
        raise ValueError("only monomials are invertible")
    (k, c), = p._t.items()
    inv = 2 * p.ctx.zero - k
    _check_flags(p.ctx, [inv])
    return SparsePoly(p.ctx, {inv: _canon(Fraction(1) / c)}, _trusted=True)


def divide_exact(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    """Return ``q`` with ``a == b * q`` exactly or raise InexactDivisionError.

    Leading terms are cancelled in graded-lex order.  Every quotient key of an
    exact division lies between ``min(a) - min(b)`` and ``max(a) - max(b)``,
    which bounds the loop for Laurent inputs too.
    """
    a.ctx.check_same(b.ctx)
    ctx = a.ctx
    if not b._t:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a._t:
        return SparsePoly.zero(ctx)
    z = ctx.zero
    lb = max(b._t)
    cb = b._t[lb]
    if len(b._t) == 1:
        # monomial divisor: shift keys; b need not be invertible in the context
        q = {}
        for k, c in a._t.items():
            kq = k - lb + z
            if any(e < 0 for n, e in zip(ctx.names, ctx.unpack(kq)) if n not in ctx.laurent):
                raise InexactDivisionError(
                    f"inexact division: remainder leading term {c}*{_fmt_mono(ctx, ctx.unpack(k))}",
                    (ctx.unpack(k), c),
                )
            q[kq] = _canon(Fraction(c) / cb)
        return SparsePoly(ctx, q, _trusted=True)
    floor_q = min(a._t) - min(b._t) + z
    rest = [(kb - lb, c) for kb, c in b._t.items() if kb != lb]
    r = dict(a._t)
    heap = [-k for k in r]
    heapq.heapify(heap)
    q: dict[int, Coeff] = {}
    non_laurent = [ctx.index(n) for n in ctx.names if n not in ctx.laurent]
    while heap:
        k = -heapq.heappop(heap)
        c = r.get(k)
        if not c:
            r.pop(k, None)
            continue
        kq = k - lb + z
        bad = kq < floor_q
        if not bad and non_laurent:
            exps = ctx.unpack(kq)
            bad = any(exps[i] < 0 for i in non_laurent)
        if bad:
            raise InexactDivisionError(
                f"inexact division: remainder leading term {c}*{_fmt_mono(ctx, ctx.unpack(k))}",
                (ctx.unpack(k), c),
            )
        if type(c) is int and type(cb) is int:
            cq = c // cb if c % cb == 0 else Fraction(c, cb)
        else:
            cq = _canon(Fraction(c) / cb)
        q[kq] = cq
        del r[k]
        for d, cr in rest:
            kk = k + d
            old = r.get(kk)
            if old is None:
                r[kk] = -cq * cr
                heapq.heappush(heap, -kk)
            else:
                r[kk] = old - cq * cr
    return SparsePoly(ctx, _fix(q), _trusted=True)


def _fmt_mono(ctx: VarContext, exps) -> str:
    parts = []
    for n, e in zip(ctx.names, exps):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) or "1"


def to_string(p: SparsePoly) -> str:
    """Human-readable rendering in canonical order."""
    if not p:
        return "0"
    out = []
    for exps, c in p.terms():
        m = _fmt_mono(p.ctx, exps)
        if m == "1":
            s = str(c)
        elif c == 1:
            s = m
        elif c == -1:
            s = "-" + m
        else:
            s = f"{c}*{m}"
        out.append(s)
    return " + ".join(out).replace("+ -", "- ")


def split_by(p: SparsePoly, names: Iterable[str]) -> dict[tuple[int, ...], SparsePoly]:
    """Group terms by the exponents of ``names``.

    Maps each exponent tuple of the chosen variables to the coefficient
    polynomial (same context, chosen variables set to exponent 0).
    """
    ctx = p.ctx
    idx = [ctx.index(n) for n in names]
    n = ctx.nvars
    groups: dict[tuple[int, ...], dict[int, Coeff]] = {}
    sers = [ctx.names[i] in ctx.series for i in idx]
    for k, c in p._t.items():
        exps = ctx.unpack(k)
        sel = tuple(exps[i] for i in idx)
        kk = k
        tot = 0
        sd = 0
        for i, e, s in zip(idx, sel, sers):
            kk -= e << (WIDTH * (n - i))
            tot += e
            if s:
                sd += e
        kk -= (tot << (WIDTH * (n + 1))) + sd
        groups.setdefault(sel, {})[kk] = c
    return {sel: SparsePoly(ctx, t, _trusted=True) for sel, t in groups.items()}
