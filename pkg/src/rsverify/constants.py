"""Transcribed constants, loaded from checksummed files in ``rsverify/data``."""

from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources

from .exactalg import SparsePoly, VarContext, loads, make_context

DATA_FILES = ("nu.txt", "delta.txt", "corollary.json", "lfactor_lists.json")


class ChecksumError(RuntimeError):
    pass


def _read(name: str) -> bytes:
    return resources.files("rsverify").joinpath("data", name).read_bytes()


@lru_cache(maxsize=None)
def expected_checksums() -> dict[str, str]:
    out = {}
    for line in _read("SHA256SUMS").decode().splitlines():
        if line.strip():
            digest, name = line.split()
            out[name] = digest
    return out


def file_checksum(name: str) -> str:
    return hashlib.sha256(_read(name)).hexdigest()


def verify_checksums() -> dict[str, str]:
    """Return ``{file: sha256}``; raise if any file differs from the manifest."""
    exp = expected_checksums()
    got = {}
    for name in DATA_FILES:
        h = file_checksum(name)
        if exp.get(name) != h:
            raise ChecksumError(f"data file {name} does not match its recorded checksum")
        got[name] = h
    return got


def data_fingerprint() -> str:
    """Single hash over all data files, used in cache keys."""
    h = hashlib.sha256()
    for name in DATA_FILES:
        h.update(name.encode())
        h.update(_read(name))
    return h.hexdigest()[:16]


def _text(name: str) -> str:
    verify_checksums()
    return _read(name).decode()


#: x, y are series (truncated) variables; t1..t4 mark highest weights
NU_CTX = make_context(["x", "y", "t1", "t2", "t3", "t4"], series=["x", "y"])


@lru_cache(maxsize=None)
def nu_poly() -> SparsePoly:
    return loads(_text("nu.txt"), NU_CTX)


@lru_cache(maxsize=None)
def delta_exponents() -> tuple[tuple[int, ...], ...]:
    rows = []
    for line in _text("delta.txt").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            rows.append(tuple(int(v) for v in line.split(",")))
    return tuple(rows)


def delta_factors(ctx: VarContext = NU_CTX) -> list[int]:
    return [ctx.pack(e) for e in delta_exponents()]


@lru_cache(maxsize=None)
def corollary_data() -> dict:
    return json.loads(_text("corollary.json"))


@lru_cache(maxsize=None)
def lfactor_lists() -> dict:
    return json.loads(_text("lfactor_lists.json"))
