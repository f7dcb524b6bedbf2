"""Substitution of variables by polynomials, possibly across contexts."""

from __future__ import annotations

from typing import Mapping, Union

from .context import ContextError, VarContext
from .poly import SparsePoly, _fix, monomial_inverse, mul

Binding = Union[SparsePoly, int]


def substitute(
    p: SparsePoly,
    bindings: Mapping[str, Binding],
    target: VarContext | None = None,
    trunc: int | None = None,
) -> SparsePoly:
    """Replace variables of ``p`` by images living in ``target``.

    Unbound variables map to the same-named variable of ``target``.  An image
    may be a SparsePoly or an integer constant.  A variable that occurs with a
    negative exponent must be bound to a monomial.  When ``trunc`` is None the
    truncation attached to ``target`` (if any) applies.
    """
    src = p.ctx
    target = src if target is None else target
    if trunc is None and target.truncation is not None:
        trunc = target.truncation.degree
    images: list[SparsePoly] = []
    for name in src.names:
        if name in bindings:
            img = bindings[name]
            if not isinstance(img, SparsePoly):
                img = SparsePoly.const(target, img)
            target.check_same(img.ctx)
            if name not in src.laurent and img and min(img.min_exponents(), default=0) < 0:
                raise ContextError(
                    f"non-Laurent variable {name!r} bound to an image with negative exponents"
                )
        else:
            if name not in target.names:
                raise ContextError(f"variable {name!r} is unbound and absent from the target")
            img = SparsePoly.var(target, name)
        images.append(img)

    if all(len(img) == 1 for img in images):
        return _substitute_monomial(p, images, target, trunc)

    cache: dict[tuple[int, int], SparsePoly] = {}

    def power(i: int, e: int) -> SparsePoly:
        key = (i, e)
        hit = cache.get(key)
        if hit is not None:
            return hit
        img = images[i]
        if e < 0:
            if len(img) != 1:
                raise ContextError(
                    f"negative power of {src.names[i]!r} needs a monomial image"
                )
            base = monomial_inverse(img)
            e = -e
        else:
            base = img
        res = SparsePoly.one(target)
        for _ in range(e):
            res = mul(res, base, trunc)
        cache[key] = res
        return res

    acc: dict[int, object] = {}
    for exps, c in p.terms():
        term = SparsePoly.const(target, c)
        for i, e in enumerate(exps):
            if e:
                term = mul(term, power(i, e), trunc)
                if not term:
                    break
        for k, v in term.items():
            acc[k] = acc.get(k, 0) + v
    return SparsePoly(target, _fix(acc), _trusted=True)


def _substitute_monomial(p, images, target, trunc):
    z = target.zero
    shifts = []
    scal = []
    for img in images:
        (k, c), = img.items()
        shifts.append(k - z)
        scal.append(c)
    lim = None if trunc is None else trunc
    acc: dict[int, object] = {}
    unit = all(c == 1 for c in scal)
    non_laurent = [target.index(n) for n in target.names if n not in target.laurent]
    for exps, c in p.terms():
        k = z
        for s, e in zip(shifts, exps):
            if e:
                k += s * e
        if not unit:
            for sc, e in zip(scal, exps):
                if e:
                    c = c * sc ** e
        if lim is not None and target.series_degree(k) > lim:
            continue
        acc[k] = acc.get(k, 0) + c
    if non_laurent:
        for k in acc:
            ex = target.unpack(k)
            if any(ex[i] < 0 for i in non_laurent):
                raise ContextError("substitution produced a negative exponent on a non-Laurent variable")
    return SparsePoly(target, _fix(acc), _trusted=True)
