"""Numeric side of the main local identity: Satake classes, Euler factors, twisting.

Floating point only.  The exact statement is the master power-series identity
in ``unram``; the checks here evaluate both sides at sample points with an
explicit tail estimate.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .chars import SP4_WEYL, DominantWeight, irr_char
from .constants import delta_exponents, lfactor_lists, nu_poly
from .exactalg import SparsePoly
from .report import CheckReport, FAIL, timed
from .unram import NumXY, ii_poly

#: below this |A(rho)| the Weyl quotient is replaced by exact polynomial evaluation
SINGULAR_EPS = 1e-6


@dataclass(frozen=True)
class SatakeClass:
    """Sp4 parameters (alpha, beta) and SL2 parameters gamma1, gamma2."""

    alpha: complex
    beta: complex
    gamma1: complex = 1
    gamma2: complex = 1

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma1", "gamma2"):
            if getattr(self, name) == 0:
                raise ZeroDivisionError(f"Satake parameter {name} is zero")

    @classmethod
    def trivial(cls) -> "SatakeClass":
        return cls(1, 1, 1, 1)

    @classmethod
    def random_unitary(cls, rng: random.Random) -> "SatakeClass":
        return cls(*(cmath.exp(2j * math.pi * rng.random()) for _ in range(4)))

    def sp4_eigenvalues(self) -> list:
        a, b = self.alpha, self.beta
        return [a, b, 1 / b, 1 / a]

    def sl2_eigenvalues(self, which: int) -> list:
        g = self.gamma1 if which == 1 else self.gamma2
        return [g, 1 / g]

    def as_list(self) -> list:
        return [self.alpha, self.beta, self.gamma1, self.gamma2]


@dataclass(frozen=True)
class TwistData:
    t1: complex = 0
    t2: complex = 0
    r1: complex = 0
    r2: complex = 0
    r3: complex = 0
    q: int = 3

    def compatibility(self) -> complex:
        return -3 * self.r1 - 3 * self.r2 + 2 * self.r3 + 2 * (self.t1 - self.t2)

    @classmethod
    def solve_r3(cls, t1, t2, r1, r2, q: int = 3) -> "TwistData":
        """The unique r3 satisfying the compatibility condition."""
        return cls(t1, t2, r1, r2, (3 * r1 + 3 * r2 - 2 * (t1 - t2)) / 2, q)


# -- characters ------------------------------------------------------------------------


def _sp4_alternant(e1: int, e2: int, a, b):
    total = 0
    for perm, signs, sg in SP4_WEYL:
        e = (e1, e2)
        total += sg * a ** (signs[0] * e[perm[0]]) * b ** (signs[1] * e[perm[1]])
    return total


def sp4_char(n1: int, n2: int, a, b):
    den = _sp4_alternant(2, 1, a, b)
    if abs(den) < SINGULAR_EPS:
        p = irr_char(DominantWeight(n1, n2, 0))
        return p.evaluate({"a": a, "b": b, "c": 1})
    return _sp4_alternant(n1 + n2 + 2, n2 + 1, a, b) / den


def sl2_char(m: int, g):
    """g^m + g^(m-2) + ... + g^-m."""
    return sum(g ** (m - 2 * k) for k in range(m + 1))


def char_eval(w: DominantWeight | Sequence[int], tau: SatakeClass):
    """[n1, n2; m3; m4] evaluated at tau."""
    if not isinstance(w, DominantWeight):
        w = DominantWeight.from_tuple(tuple(w))
    val = sp4_char(w.n1, w.n2, tau.alpha, tau.beta)
    for m, g in zip(w.sl2, (tau.gamma1, tau.gamma2)):
        val *= sl2_char(m, g)
    return val


# -- Euler factors -------------------------------------------------------------------


class EulerFactor:
    """det(I - u (g x h)) as a degree-8 polynomial in u; calling gives 1/det."""

    def __init__(self, eigenvalues: Sequence[complex]):
        self.eigenvalues = list(eigenvalues)
        coeffs = [1]
        for e in self.eigenvalues:
            nxt = coeffs + [0]
            for i, c in enumerate(coeffs):
                nxt[i + 1] -= e * c
            coeffs = nxt
        self.coeffs = coeffs

    def det(self, u):
        total = 0
        for c in reversed(self.coeffs):
            total = total * u + c
        return total

    def __call__(self, u):
        d = self.det(u)
        if d == 0:
            raise ZeroDivisionError(f"u = {u} is a zero of the determinant")
        return 1 / d

    def zeros(self) -> list:
        return [1 / e for e in self.eigenvalues]


def tensor_eigenvalues(tau: SatakeClass, which: int) -> list:
    return [g * h for g in tau.sp4_eigenvalues() for h in tau.sl2_eigenvalues(which)]


def euler_factor(u, tau: SatakeClass, which: int):
    """1/det(I8 - u (g x h_which))."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    return EulerFactor(tensor_eigenvalues(tau, which))(u)


def sym_power_traces(eigenvalues: Sequence[complex], K: int) -> list:
    """Tr sym^k for k = 0..K via Newton's identities."""
    p = [sum(e ** k for e in eigenvalues) for k in range(K + 1)]
    h = [1]
    for k in range(1, K + 1):
        h.append(sum(p[i] * h[k - i] for i in range(1, k + 1)) / k)
    return h


def euler_series(u, tau: SatakeClass, which: int, K: int):
    """Sum_{k <= K} u^k Tr sym^k(g x h_which)."""
    h = sym_power_traces(tensor_eigenvalues(tau, which), K)
    return sum(c * u ** k for k, c in enumerate(h))


# -- the theorem ----------------------------------------------------------------------


def _num_lfactor(abc, x, y, Q):
    a, b, c = abc
    return x ** (2 * a) * y ** (3 * a + b) * Q ** (3 * a + b + c)


def zeta_ratio(x, y, Q):
    r = lfactor_lists()["zeta_ratio"]
    out = 1
    for abc in r["denominator"]:
        out *= 1 - _num_lfactor(abc, x, y, Q)
    for abc in r["numerator"]:
        out /= 1 - _num_lfactor(abc, x, y, Q)
    return out


def normalizing_factor(x, y, Q):
    out = 1
    for abc in lfactor_lists()["normalizing"]:
        out /= 1 - _num_lfactor(abc, x, y, Q)
    return out


def Z4_value(x, y):
    z2 = (1 - y ** 2) * (1 - x ** 2 * y ** 2) ** 2 * (1 - x ** 2 * y ** 4) ** 2
    z3 = (1 - x ** 2 * y ** 2) * (1 - x ** 2 * y ** 4) * (1 - x ** 4 * y ** 6)
    return z2 * z3


def weights_upto(N: int):
    for d in range(N + 1):
        for m1 in range(d + 1):
            for m2 in range(d + 1 - m1):
                for m3 in range(d + 1 - m1 - m2):
                    yield (m1, m2, m3, d - m1 - m2 - m3)


@lru_cache(maxsize=8)
def ii_coefficients(x: float, y: float, N: int) -> dict:
    """m -> ii(m2, m1, m3, m4)(x, y) for |m| <= N."""
    R = NumXY(x, y)
    return {m: ii_poly((m[1], m[0], m[2], m[3]), R) for m in weights_upto(N)}


def nu_delta_coefficients(x: float, y: float, N: int, nu: SparsePoly | None = None) -> dict:
    """m -> Z4(x, y) [t^m] nu/delta at (x y, x y^2, t), by dense recurrences."""
    nu = nu_poly() if nu is None else nu
    X, Y = x * y, x * y * y
    f = {m: 0.0 for m in weights_upto(N)}
    for e, c in nu.terms():
        m = tuple(e[2:])
        if sum(m) <= N:
            f[m] += float(c) * X ** e[0] * Y ** e[1]
    scale = Z4_value(x, y)
    for e in delta_exponents():
        v = X ** e[0] * Y ** e[1]
        step = tuple(e[2:])
        if not any(step):
            scale /= 1 - v
            continue
        # f <- f / (1 - v t^step), in increasing degree
        for m in f:
            src = tuple(a - b for a, b in zip(m, step))
            if min(src) >= 0:
                f[m] += v * f[src]
    return {m: scale * c for m, c in f.items()}


def shell_tail(shells: Sequence[float]):
    """Geometric estimate of the sum over degrees > N from the last shell magnitudes.

    Shells alternate in size with the parity of the degree, so the ratio is taken
    over two-degree steps.
    """
    n = len(shells) - 1
    if n < 3:
        return math.inf
    ratios = [shells[d] / shells[d - 2] for d in range(max(2, n - 3), n + 1) if shells[d - 2] > 0]
    if not ratios:
        return 0.0 if shells[-1] == shells[-2] == 0 else math.inf
    r = max(ratios)
    if r >= 1:
        return math.inf
    return (shells[-1] + shells[-2]) * r / (1 - r)


def theorem_sides(tau: SatakeClass, x, y, N: int, q: int = 3, nu: SparsePoly | None = None,
                  route: str = "ii"):
    """(LHS, RHS, tail estimate) of the main local identity at one sample."""
    x, y = float(x), float(y)
    Q = 1 / q
    if route == "ii" and nu is None:
        coeffs = ii_coefficients(x, y, N)
    elif route in ("nu", "ii"):
        coeffs = nu_delta_coefficients(x, y, N, nu)
    else:
        raise ValueError(f"unknown route {route!r}")
    sp4 = {}
    sl2 = {1: {}, 2: {}}
    total = 0
    shells = [0.0] * (N + 1)
    for m, c in coeffs.items():
        if c == 0:
            continue
        k = (m[0], m[1])
        if k not in sp4:
            sp4[k] = sp4_char(m[0], m[1], tau.alpha, tau.beta)
        if m[2] not in sl2[1]:
            sl2[1][m[2]] = sl2_char(m[2], tau.gamma1)
        if m[3] not in sl2[2]:
            sl2[2][m[3]] = sl2_char(m[3], tau.gamma2)
        total += c * sp4[k] * sl2[1][m[2]] * sl2[2][m[3]]
        shells[sum(m)] += abs(c) * DominantWeight(*m).dimension()
    zr = zeta_ratio(x, y, Q)
    lhs = zr * total
    rhs = euler_factor(x * y, tau, 1) * euler_factor(x * y * y, tau, 2) / normalizing_factor(x, y, Q)
    tail = abs(zr) * shell_tail(shells) / abs(rhs)
    return lhs, rhs, tail


def verify_theorem(tau: SatakeClass | Sequence[SatakeClass] | None = None, x=Fraction(1, 8), y=Fraction(1, 8),
                   N: int = 20, tol: float = 1e-8, q: int = 3, nu: SparsePoly | None = None,
                   route: str = "ii", samples: int = 0, seed: int = 0) -> CheckReport:
    """Both sides of the main local identity at each sample Satake class.

    With ``samples`` > 0, that many unitary classes are drawn from ``seed``.
    """
    if abs(float(x)) > 0.25 or abs(float(y)) > 0.25:
        raise ValueError("need |x|, |y| <= 1/4")
    if nu is not None and route == "ii":
        route = "nu"
    if samples:
        rng = random.Random(seed)
        taus = [SatakeClass.random_unitary(rng) for _ in range(samples)]
    elif tau is None:
        taus = [SatakeClass.trivial()]
    elif isinstance(tau, SatakeClass):
        taus = [tau]
    else:
        taus = list(tau)
    rep = CheckReport("theorem", {"x": str(x), "y": str(y), "degree": N, "tol": tol, "q": q, "route": route,
                                  "samples": samples, "seed": seed, "nu": "data" if nu is None else "override"},
                      paper_ref="Theorem (main local)")
    with timed(rep):
        worst = 0.0
        rows = []
        for t in taus:
            lhs, rhs, tail = theorem_sides(t, x, y, N, q, nu, route)
            err = abs(lhs - rhs) / abs(rhs)
            worst = max(worst, err)
            rows.append({"tau": [_c(v) for v in t.as_list()], "lhs": _c(lhs), "rhs": _c(rhs),
                         "rel_error": f"{err:.3e}", "tail": f"{tail:.3e}",
                         "ok": err <= tol and tail < tol / 10})
        rep.details["samples"] = rows
        rep.residual = f"{worst:.3e}"
        bad = [i for i, r in enumerate(rows) if not r["ok"]]
        if bad:
            tails = [i for i in bad if float(rows[i]["tail"]) >= tol / 10]
            rep.fail(rep.residual, failed_samples=bad, tail_bound_violated=tails)
    return rep


def _c(z) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}j"


# -- twisting reduction ---------------------------------------------------------------


def twisted_lvalue(svar, tau: SatakeClass, tw: TwistData, which: int, r):
    """L(svar, pi, St^vee_GSp4 x St_GL2^(which) x |.|^r) for the twisted class.

    The GSp4 class is q^{-t2} g, so its contragredient has eigenvalues q^{t2}/g_i;
    the GL2 class is q^{-t1} h.
    """
    q = tw.q
    g = [q ** tw.t2 / e for e in tau.sp4_eigenvalues()]
    h = [q ** (-tw.t1) * e for e in tau.sl2_eigenvalues(which)]
    u = q ** (-svar) * q ** (-r)
    return EulerFactor([a * b for a in g for b in h])(u)


def untwisted_lvalue(svar, tau: SatakeClass, which: int, q: int):
    return euler_factor(q ** (-svar), tau, which)


def twist_reduce(tw: TwistData, tau: SatakeClass, s: Sequence[complex] = (7, 2), tol: float = 1e-12) -> CheckReport:
    """L-values at s with twisted data against s' = s + (r1, r2) untwisted."""
    rep = CheckReport("twist-reduce", {"t1": _c(tw.t1), "t2": _c(tw.t2), "r": [_c(tw.r1), _c(tw.r2), _c(tw.r3)],
                                       "q": tw.q, "s": [_c(v) for v in s]},
                      paper_ref="proof of Theorem (main local), reduction to trivial characters")
    if abs(tw.compatibility()) > 1e-12:
        raise ValueError("twist data violates -3r1 - 3r2 + 2r3 + 2(t1 - t2) = 0")
    with timed(rep):
        s1, s2 = s
        s1p, s2p = s1 + tw.r1, s2 + tw.r2
        cases = {
            1: ((s1 - s2) / 2 - 1, (s1p - s2p) / 2 - 1, tw.r3 - tw.r1 - 2 * tw.r2),
            2: ((s1 + s2) / 2 - 2, (s1p + s2p) / 2 - 2, tw.r3 - tw.r1 - tw.r2),
        }
        worst = 0.0
        for which, (u, up, r) in cases.items():
            a = twisted_lvalue(u, tau, tw, which, r)
            b = untwisted_lvalue(u - tw.t2 + tw.t1 + r, tau, which, tw.q)
            c = untwisted_lvalue(up, tau, which, tw.q)
            err = max(abs(a - b), abs(a - c)) / abs(a)
            worst = max(worst, err)
            rep.details[f"factor_{which}"] = {"twisted": _c(a), "shifted": _c(b), "at_s_prime": _c(c),
                                              "rel_error": f"{err:.3e}"}
        rep.residual = f"{worst:.3e}"
        if worst > tol:
            rep.fail(rep.residual)
    return rep


def random_twist(rng: random.Random, q: int = 3, scale: float = 0.5) -> TwistData:
    t1, t2, r1, r2 = (complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)) for _ in range(4))
    return TwistData.solve_r3(t1, t2, r1, r2, q)


def verify_twist_samples(samples: int = 10, seed: int = 0, q: int = 3, tol: float = 1e-12) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("twist-reduce", {"samples": samples, "seed": seed, "q": q, "tol": tol},
                      paper_ref="proof of Theorem (main local), reduction to trivial characters")
    with timed(rep):
        worst = 0.0
        for _ in range(samples):
            tw = random_twist(rng, q)
            tau = SatakeClass.random_unitary(rng)
            r = twist_reduce(tw, tau, tol=tol)
            worst = max(worst, float(r.residual))
        rep.residual = f"{worst:.3e}"
        if worst > tol:
            rep.status = FAIL
    return rep
