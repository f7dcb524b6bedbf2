"""One test per acceptance criterion; a PASS/FAIL line per criterion is printed at the end of the run."""

import time

import pytest

from conftest import ACCEPTANCE
from rsverify.cli import REGISTRY, run
from rsverify.cli.main import main
from rsverify.unram import mutate_nu, nu_term_t_degrees, verify_master


class Criterion:
    def __init__(self, num, text, limit_s):
        self.num, self.text, self.limit = num, text, limit_s

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.notes = []
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        ok = exc_type is None and dt < self.limit
        extra = f" [{'; '.join(self.notes)}]" if self.notes else ""
        ACCEPTANCE.append((self.num, ok, f"{self.text} ({dt:.2f}s, limit {self.limit:g}s){extra}"))
        if exc_type is None:
            assert dt < self.limit, f"runtime {dt:.2f}s over {self.limit}s"
        return False


def check(rep):
    assert rep.status == "pass", (rep.check, rep.residual, rep.details)
    return rep


@pytest.mark.xfail(strict=True, reason="the displayed group law needs a factor 1/2 on its pairing terms; "
                                      "inverse and commutator identities hold")
def test_c01_uq_identities():
    with Criterion(1, "u_Q group law, inverse, commutator for n=2,3", 5) as c:
        for n in (2, 3):
            rep = run("uq-group-law", {"n": n})
            c.notes.append(f"n={n} residual terms {rep.residual}")
            check(rep)


def test_c02_det_mq1():
    with Criterion(2, "det of m_Q^1 on 20 exact samples, n=2", 5):
        rep = check(run("det-mq1", {"n": 2, "samples": 20}))
        assert rep.details["mismatches"] == 0


def test_c03_main_word():
    with Criterion(3, "main Weyl word: permutation, reduced length 20, w1 w2 w3", 1):
        rep = check(run("factorization"))
        assert rep.details["lengths"] == {"w1": 3, "w2": 7, "w3": 10, "w": 20}


def test_c04_cosets_and_intersection():
    with Criterion(4, "25 double-coset representatives; intersection free in y7, y8", 10):
        rep = check(run("coset-25"))
        assert rep.details["count"] == 25 and rep.details["signatures_distinct"]
        rep = check(run("conjugate-intersection"))
        assert rep.details["free"] == ["y7", "y8"]


@pytest.mark.parametrize("prime", [3, 5])
def test_c05_orbit_table(prime):
    with Criterion(5, f"orbit table over F_{prime}", 60):
        rep = check(run("orbit-table", {"prime": prime}))
        assert all(r["separated"] for r in rep.details["rows"])
        assert [r["orbits"] for r in rep.details["rows"]] == [r["expected"] for r in rep.details["rows"]]


def test_c06_sym_props():
    with Criterion(6, "sym algebra identities to degree 10 and 8", 600):
        check(run("prop-sym-vxw", {"degree": 10}))
        check(run("cor-symalg", {"degree": 8}))


def test_c07_triple():
    with Criterion(7, "gammas against brute force on {0..4}^2; triple series to degree 6", 600):
        assert check(run("gammas")).details["cases"] == 25
        check(run("prop-triple", {"degree": 6}))


def test_c08_double_sl2():
    with Criterion(8, "V x V' decomposition: exact identity and series to degree 5", 900):
        assert check(run("prop-double-sl2", {"mode": "tau-exact"})).residual == "0"
        check(run("prop-double-sl2", {"mode": "series", "degree": 5}))


def test_c09_master():
    with Criterion(9, "master identity to t-degree 6; nu mutations detected", 600) as c:
        check(run("master", {"degree": 6}))
        detectable = [i for i, d in enumerate(nu_term_t_degrees()) if d <= 6]
        for i in detectable:
            assert verify_master(6, nu=mutate_nu(i)).status == "fail", i
        c.notes.append(f"{len(detectable)} mutations flip to fail")


def test_c10_normalization():
    with Criterion(10, "normalization identity exact in (x, y)", 1):
        check(run("normalization"))


def test_c11_nu_s():
    with Criterion(11, "nu_s monomial identity", 1):
        check(run("nu-s"))


def test_c12_theorem_and_twist():
    with Criterion(12, "main local identity at 10 unitary classes; twist reduction", 300) as c:
        rep = check(run("theorem", {"x": "1/6", "y": "1/6", "degree": 24, "tol": 1e-6, "samples": 10}))
        assert len(rep.details["samples"]) == 10
        c.notes.append(f"max rel error {rep.residual}")
        rep = check(run("twist-reduce", {"tol": 1e-12}))
        c.notes.append(f"twist residual {rep.residual}")


def test_c13_determinism(tmp_path, tmp_cache):
    with Criterion(13, "two full-suite runs give byte-identical JSON", 600):
        dirs = [tmp_path / "a", tmp_path / "b"]
        for d in dirs:
            assert main(["verify", "all", "--out", str(d), "--quiet"]) in (0, 1)
        for k in REGISTRY:
            assert (dirs[0] / f"{k}.json").read_bytes() == (dirs[1] / f"{k}.json").read_bytes(), k
