"""Line-oriented text serialization of SparsePoly.

Header lines start with ``#``::

    # vars x,y,t
    # laurent t
    # series x,y
    3/1; 2,0,-1

One term per line, ``num/den; e1,...,ek``, in descending graded-lex order,
so equal polynomials serialize to identical bytes.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

from .context import VarContext, make_context
from .poly import SparsePoly


def dumps(p: SparsePoly) -> str:
    ctx = p.ctx
    lines = [
        "# vars " + ",".join(ctx.names),
        "# laurent " + ",".join(n for n in ctx.names if n in ctx.laurent),
        "# series " + ",".join(n for n in ctx.names if n in ctx.series),
    ]
    for exps, c in p.terms():
        c = Fraction(c)
        lines.append(f"{c.numerator}/{c.denominator}; " + ",".join(map(str, exps)))
    return "\n".join(lines) + "\n"


def _names(field: str) -> list[str]:
    field = field.strip()
    return [n for n in field.split(",") if n] if field else []


def loads(text: str, ctx: VarContext | None = None) -> SparsePoly:
    header: dict[str, list[str]] = {}
    body = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, rest = line[1:].strip().partition(" ")
            header[key] = _names(rest)
        else:
            body.append(line)
    if ctx is None:
        if "vars" not in header:
            raise ValueError("serialized polynomial lacks a '# vars' header")
        ctx = make_context(header["vars"], laurent=header.get("laurent", ()), series=header.get("series", ()))
    elif "vars" in header and tuple(header["vars"]) != ctx.names:
        raise ValueError(f"variable header {header['vars']} does not match context {ctx.names}")
    terms = []
    for line in body:
        coeff, _, exps = line.partition(";")
        num, _, den = coeff.strip().partition("/")
        c = Fraction(int(num), int(den or 1))
        ex = [int(e) for e in exps.split(",")] if exps.strip() else []
        terms.append((ex, c))
    return SparsePoly.from_exponents(ctx, terms)


def digest(p: SparsePoly) -> str:
    return hashlib.sha256(dumps(p).encode()).hexdigest()
