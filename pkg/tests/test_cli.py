import io
import json

import pytest

from rsverify.chars import DominantWeight, irr_char
from rsverify.cli import REGISTRY, Cache, UsageError, load_reports, render_json, render_text, run, write_report
from rsverify.cli.main import main
from rsverify.exactalg import dumps
from rsverify.report import CheckReport


def call(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_list_checks():
    code, text = call("list-checks")
    assert code == 0
    for k in REGISTRY:
        assert k in text


def test_unknown_check_is_usage_error(tmp_cache):
    assert call("verify", "no-such-check")[0] == 2
    with pytest.raises(UsageError):
        run("no-such-check")


def test_out_of_range_param_is_usage_error(tmp_cache, tmp_path):
    assert call("verify", "master", "--degree", "99", "--out", str(tmp_path))[0] == 2
    assert call("verify", "orbit-table", "--prime", "11", "--out", str(tmp_path))[0] == 2
    assert call("verify", "theorem", "--x", "1/2", "--out", str(tmp_path))[0] == 2
    assert call("verify", "theorem", "--tol", "abc", "--out", str(tmp_path))[0] == 2
    assert not list(tmp_path.iterdir())


def test_bad_subcommand_is_usage_error():
    assert call("frobnicate")[0] == 2


def test_pass_and_fail_exit_codes(tmp_cache, tmp_path):
    assert call("verify", "coset-25", "--out", str(tmp_path), "--quiet")[0] == 0
    assert call("verify", "uq-group-law", "--out", str(tmp_path), "--quiet")[0] == 1
    rep = json.loads((tmp_path / "coset-25.json").read_text())
    assert rep["status"] == "pass"
    assert rep["details"]["data_fingerprint"]


def test_run_coset_count():
    rep = run("coset-25")
    assert rep.status == "pass"
    assert rep.check == "coset-25"


def test_master_cache(tmp_cache, tmp_path):
    out = tmp_path / "r"
    assert call("verify", "master", "--degree", "4", "--out", str(out), "--quiet")[0] == 0
    first = json.loads((out / "master.timing.json").read_text())
    assert first["cache_hit"] is False
    body = (out / "master.json").read_text()
    assert call("verify", "master", "--degree", "4", "--out", str(out), "--quiet")[0] == 0
    assert json.loads((out / "master.timing.json").read_text())["cache_hit"] is True
    assert (out / "master.json").read_text() == body
    assert any(tmp_cache.iterdir())


def test_cache_key_depends_on_params(tmp_path):
    c = Cache(tmp_path)
    assert c.key("master", {"degree": 4}) != c.key("master", {"degree": 5})
    assert c.key("master", {"degree": 4}) == Cache(tmp_path / "x").key("master", {"degree": 4})


def test_config_file_and_flag_precedence(tmp_cache, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# small run\ndegree = 3\n")
    out = tmp_path / "r"
    assert call("verify", "master", "--config", str(cfg), "--out", str(out), "--quiet")[0] == 0
    assert json.loads((out / "master.json").read_text())["params"]["degree"] == 3
    assert call("verify", "master", "--config", str(cfg), "--degree", "2", "--out", str(out), "--quiet")[0] == 0
    assert json.loads((out / "master.json").read_text())["params"]["degree"] == 2
    cfg.write_text("degree\n")
    assert call("verify", "master", "--config", str(cfg), "--out", str(out))[0] == 2


def test_report_aggregation(tmp_cache, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert call("report", str(empty))[0] == 0
    call("verify", "coset-25", "--out", str(tmp_path), "--quiet")
    assert call("report", str(tmp_path / "coset-25.json"))[0] == 0
    call("verify", "uq-group-law", "--out", str(tmp_path), "--quiet")
    code, text = call("report", str(tmp_path))
    assert code == 1
    assert "coset-25" in text and "uq-group-law" in text
    code, js = call("report", str(tmp_path), "--format", "json")
    assert code == 1
    rows = json.loads(js)
    assert {r["check"] for r in rows} == {"coset-25", "uq-group-law"}
    again = [CheckReport.from_dict(r) for r in rows]
    assert render_text(again) == render_text(load_reports([tmp_path]))
    assert render_json(again) == js


def test_report_unreadable_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("report", str(bad))[0] == 2


def test_decompose_subcommand(tmp_path):
    p = irr_char(DominantWeight(1, 0, 1)) * irr_char(DominantWeight(0, 0, 1))
    f = tmp_path / "p.txt"
    f.write_text(dumps(p))
    code, text = call("decompose", str(f))
    assert code == 0
    data = json.loads(text)
    got = {tuple(r["weight"]): r["mult"] for r in data["components"]}
    assert got == {(1, 0, 2): 1, (1, 0, 0): 1}
    f.write_text(dumps(p - irr_char(DominantWeight(1, 0, 2)) * 2))
    assert call("decompose", str(f))[0] == 1
    assert call("decompose", str(tmp_path / "missing.txt"))[0] == 2


def test_coset_enum_subcommand():
    code, text = call("coset-enum")
    assert code == 0
    assert text.strip().endswith("total 25")
    code, js = call("coset-enum", "--format", "json")
    data = json.loads(js)
    assert data["total"] == 25 and len(data["reps"]) == 25
    assert data["reps"][0]["length"] == 0


def test_orbit_table_subcommand():
    code, text = call("orbit-table", "--q", "3")
    assert code == 0
    code, js = call("orbit-table", "--q", "3", "--format", "json")
    assert code == 0
    data = json.loads(js)
    assert data["status"] == "pass"
    assert len(text.strip().splitlines()) == len(data["rows"]) == 8
    assert call("orbit-table", "--q", "4")[0] == 2


def test_reports_deterministic(tmp_cache, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        call("verify", "twist-reduce", "--out", str(d), "--quiet")
        call("verify", "normalization", "--out", str(d), "--quiet")
    for name in ("twist-reduce.json", "normalization.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert json.loads((a / "twist-reduce.json").read_text())["elapsed_ms"] == 0


def test_timing_flag(tmp_cache, tmp_path):
    call("verify", "coset-25", "--out", str(tmp_path), "--quiet", "--timing")
    side = json.loads((tmp_path / "coset-25.timing.json").read_text())
    assert side["check"] == "coset-25" and side["elapsed_ms"] >= 0


def test_write_report_roundtrip(tmp_path):
    rep = run("normalization")
    path = write_report(rep, tmp_path)
    assert load_reports([path])[0].to_json() == rep.to_json(timing=False)
