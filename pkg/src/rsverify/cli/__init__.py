"""Check registry, parameter validation, result cache and report files."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from ..constants import data_fingerprint
from ..report import FAIL, CheckReport

CACHE_ENV = "RSVERIFY_CACHE"


class UsageError(ValueError):
    """Unknown check or parameter outside its documented range (exit code 2)."""


@dataclass(frozen=True)
class Param:
    kind: type
    default: object
    lo: object = None
    hi: object = None
    choices: tuple = ()

    def coerce(self, name: str, raw):
        try:
            if self.kind is Fraction:
                v = Fraction(str(raw))
            elif self.kind is float:
                v = float(raw)
            else:
                v = self.kind(raw)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"parameter {name}={raw!r} is not a valid {self.kind.__name__}") from exc
        if self.choices and v not in self.choices:
            raise UsageError(f"parameter {name}={v} not in {list(self.choices)}")
        if self.lo is not None and v < self.lo or self.hi is not None and v > self.hi:
            raise UsageError(f"parameter {name}={v} outside [{self.lo}, {self.hi}]")
        return v


@dataclass
class CheckSpec:
    id: str
    summary: str
    runner: Callable[..., CheckReport]
    params: dict = field(default_factory=dict)
    paper_ref: str = ""
    cached: bool = False

    def resolve(self, given: dict) -> dict:
        """Defaults overridden by ``given``; keys this check does not take are ignored."""
        out = {}
        for name, p in self.params.items():
            raw = given.get(name)
            out[name] = p.default if raw is None else p.coerce(name, raw)
        return out


def canonical_params(params: dict) -> str:
    return ";".join(f"{k}={params[k]}" for k in sorted(params))


# -- cache ---------------------------------------------------------------------------


class Cache:
    """Serialized intermediate results keyed by (check id, parameters, data fingerprint)."""

    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root if root is not None else os.environ.get(CACHE_ENV, ".cache"))

    def key(self, check: str, params: dict) -> str:
        raw = "|".join((check, canonical_params(params), data_fingerprint()))
        return hashlib.sha256(raw.encode()).hexdigest()[:32]

    def path(self, check: str, params: dict) -> Path:
        return self.root / f"{check}-{self.key(check, params)}.txt"

    def get(self, check: str, params: dict) -> str | None:
        p = self.path(check, params)
        return p.read_text() if p.exists() else None

    def put(self, check: str, params: dict, text: str) -> Path:
        p = self.path(check, params)
        atomic_write(p, text)
        return p


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


# -- runners -------------------------------------------------------------------------


def _uq(n):
    from ..matgroups import verify_uq_identities
    return verify_uq_identities(n)


def _det(n, samples, seed):
    from ..matgroups import verify_det_mQ1
    return verify_det_mQ1(n, samples, seed)


def _factorization():
    from ..weyl import factorization_check
    return factorization_check()


def _cosets():
    from ..weyl import coset_census
    return coset_census()


def _intersection():
    from ..weyl import verify_main_intersection
    return verify_main_intersection()


def _orbits(prime):
    from ..weyl import orbit_table
    return orbit_table(prime)


def _vxw(degree):
    from ..chars import verify_prop_sym_VxW
    return verify_prop_sym_VxW(degree)


def _cor(degree):
    from ..chars import verify_cor_symalg
    return verify_cor_symalg(degree)


def _gammas():
    from ..chars import validate_gammas
    return validate_gammas()


def _triple(degree):
    from ..chars import verify_prop_triple
    return verify_prop_triple(degree)


def _double(mode, degree):
    from ..chars import verify_prop_double_sl2
    return verify_prop_double_sl2(mode, degree)


def _double_tau():
    from ..chars import verify_prop_double_sl2
    return verify_prop_double_sl2("tau-exact")


def _master(degree, cache: Cache | None = None):
    from ..exactalg import dumps, loads
    from ..unram import XY_CTX, master_lhs, verify_master

    lhs = None
    hit = False
    if cache is not None:
        text = cache.get("master-lhs", {"degree": degree})
        if text is not None:
            lhs, hit = loads(text, XY_CTX), True
    if lhs is None:
        lhs = master_lhs(degree)
        if cache is not None:
            cache.put("master-lhs", {"degree": degree}, dumps(lhs))
    rep = verify_master(degree, lhs=lhs)
    rep._cache_hit = hit
    return rep


def _normalization():
    from ..unram import verify_normalization
    return verify_normalization()


def _nu_s():
    from ..unram import verify_nu_s
    return verify_nu_s()


def _theorem(x, y, degree, tol, samples, seed, prime):
    from ..lfactors import verify_theorem
    return verify_theorem(x=x, y=y, N=degree, tol=tol, samples=samples, seed=seed, q=prime)


def _twist(samples, seed, prime, tol):
    from ..lfactors import verify_twist_samples
    return verify_twist_samples(samples, seed, prime, tol)


_DEG = lambda d, hi: Param(int, d, 0, hi)  # noqa: E731

REGISTRY: dict[str, CheckSpec] = {}


def register(spec: CheckSpec) -> CheckSpec:
    REGISTRY[spec.id] = spec
    return spec


for _spec in [
    CheckSpec("uq-group-law", "u_Q group law, inverse and commutator", _uq, {"n": Param(int, 2, 1, 3)},
              "u_Q(X+U, Y+V, Z+W...)"),
    CheckSpec("det-mq1", "det of the induced action of m_Q^1", _det,
              {"n": Param(int, 2, 1, 3), "samples": Param(int, 20, 1, 1000), "seed": Param(int, 0)},
              "det g1^-n det g2^2n"),
    CheckSpec("factorization", "main Weyl element: word, permutation, w1 w2 w3", _factorization, {},
              "w as a permutation"),
    CheckSpec("coset-25", "minimal (P, Q) double-coset representatives", _cosets, {},
              "25 possibilities for sigma"),
    CheckSpec("conjugate-intersection", "U_Q meet w^-1 P w", _intersection, {}, "solution space y7, y8"),
    CheckSpec("orbit-table", "P'_S orbits on the SO6 quadric over F_p", _orbits,
              {"prime": Param(int, 3, choices=(3, 5, 7))}, "orbit table of the Lemma"),
    CheckSpec("prop-sym-vxw", "sym algebra of V x W decomposed", _vxw, {"degree": _DEG(10, 14)},
              "Prop mu_{i,j}"),
    CheckSpec("cor-symalg", "Corollary generating function", _cor, {"degree": _DEG(8, 12)}, "Corollary"),
    CheckSpec("gammas", "gamma_1..gamma_7 against brute-force sums", _gammas, {}, "Prop mu_{i,j,k} gammas"),
    CheckSpec("prop-triple", "sym algebra of the triple decomposed", _triple, {"degree": _DEG(6, 8)},
              "Prop mu_{i,j,k}"),
    CheckSpec("prop-double-sl2", "V x V' decomposition, series or tau-exact", _double,
              {"mode": Param(str, "series", choices=("series", "tau-exact")), "degree": _DEG(5, 7)},
              "Prop decomp of V x V'"),
    CheckSpec("prop-double-sl2-tau", "V x V' decomposition, exact tau identity", _double_tau, {},
              "Prop decomp of V x V'"),
    CheckSpec("master", "master power-series identity Z4 nu / delta", _master, {"degree": _DEG(6, 10)},
              "Z_4(x,y) nu / delta", cached=True),
    CheckSpec("normalization", "N(s, chi_0) zeta-ratio Z2 Z3 = 1", _normalization, {}, "N(s, chi)"),
    CheckSpec("nu-s", "nu_s monomial identity", _nu_s, {}, "nu_s(t)"),
    CheckSpec("theorem", "main local identity at random unitary Satake classes", _theorem,
              {"x": Param(Fraction, Fraction(1, 6), Fraction(-1, 4), Fraction(1, 4)),
               "y": Param(Fraction, Fraction(1, 6), Fraction(-1, 4), Fraction(1, 4)),
               "degree": _DEG(24, 40), "tol": Param(float, 1e-6, 0.0, 1.0),
               "samples": Param(int, 10, 1, 200), "seed": Param(int, 0), "prime": Param(int, 3, 2, 10 ** 6)},
              "Theorem (main local)"),
    CheckSpec("twist-reduce", "reduction to trivial characters", _twist,
              {"samples": Param(int, 10, 1, 1000), "seed": Param(int, 0), "prime": Param(int, 3, 2, 10 ** 6),
               "tol": Param(float, 1e-12, 0.0, 1.0)},
              "reduction to trivial characters"),
]:
    register(_spec)


def run(check: str, params: dict | None = None, cache: Cache | None = None) -> CheckReport:
    """Execute a registered check; the report carries the CLI id and resolved parameters."""
    if check not in REGISTRY:
        raise UsageError(f"unknown check {check!r}")
    spec = REGISTRY[check]
    resolved = spec.resolve(params or {})
    kwargs = dict(resolved)
    if spec.cached:
        kwargs["cache"] = cache
    rep = spec.runner(**kwargs)
    rep.check = spec.id
    rep.params = {k: str(v) if isinstance(v, Fraction) else v for k, v in resolved.items()}
    rep.paper_ref = spec.paper_ref
    rep.details["data_fingerprint"] = data_fingerprint()
    return rep


def write_report(rep: CheckReport, out_dir: str | os.PathLike, timing: bool = False) -> Path:
    """<id>.json (deterministic unless ``timing``) and <id>.timing.json beside it."""
    out = Path(out_dir)
    path = out / f"{rep.check}.json"
    atomic_write(path, rep.to_json(timing=timing))
    side = {"check": rep.check, "elapsed_ms": int(rep.elapsed_ms),
            "cache_hit": bool(getattr(rep, "_cache_hit", False))}
    atomic_write(out / f"{rep.check}.timing.json", json.dumps(side, sort_keys=True) + "\n")
    return path


def load_reports(paths) -> list[CheckReport]:
    reps = []
    for p in paths:
        p = Path(p)
        files = sorted(f for f in p.glob("*.json") if not f.name.endswith(".timing.json")) if p.is_dir() else [p]
        for f in files:
            try:
                reps.append(CheckReport.from_dict(json.loads(f.read_text())))
            except (OSError, ValueError, KeyError) as exc:
                raise UsageError(f"unreadable report {f}: {exc}") from exc
    return reps


def render_text(reps) -> str:
    head = ("check", "status", "residual", "elapsed_ms", "paper_ref")
    rows = [head] + [(r.check, r.status, r.residual, str(r.elapsed_ms), r.paper_ref) for r in reps]
    widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def render_json(reps) -> str:
    from ..report import _plain
    return json.dumps([_plain(r.to_dict()) for r in reps], sort_keys=True, indent=2) + "\n"


def aggregate_exit(reps) -> int:
    return 1 if any(r.status == FAIL for r in reps) else 0


def read_config(path: str | os.PathLike) -> dict:
    """Flat key=value file; '#' starts a comment."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key=value")
        out[key.strip()] = val.strip()
    return out
