import json
import subprocess
import sys

import pytest

from bogomolov import catalog
from bogomolov.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_a5(capsys):
    code, out, _ = _run(capsys, "compute", "--group", "A5")
    report = json.loads(out)
    assert code == 0
    assert report["order"] == 60
    assert report["schur_multiplier"] == [2]
    assert report["bogomolov_multiplier"] == []
    assert report["strategy"] == "direct"


def test_compute_cyclic(capsys):
    code, out, _ = _run(capsys, "compute", "--group", "C7")
    report = json.loads(out)
    assert code == 0 and report["schur_multiplier"] == [] and report["bogomolov_multiplier"] == []


def test_compute_psl34_sylow(capsys):
    code, out, _ = _run(capsys, "compute", "--group", "PSL(3,4)", "--strategy", "sylow")
    report = json.loads(out)
    assert code == 0 and report["bogomolov_multiplier"] == [] and report["strategy"] == "sylow"


def test_compute_is_deterministic(capsys):
    _, first, _ = _run(capsys, "compute", "--group", "S4")
    _, second, _ = _run(capsys, "compute", "--group", "S4")
    assert first == second


def test_group_file(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(catalog.named("D4").to_json()))
    code, out, _ = _run(capsys, "compute", "--group-file", str(path))
    assert code == 0 and json.loads(out)["schur_multiplier"] == [2]
    path.write_text(json.dumps({"name": "Q8"}))
    code, out, _ = _run(capsys, "compute", "--group-file", str(path))
    assert code == 0 and json.loads(out)["schur_multiplier"] == []


@pytest.mark.parametrize("argv", [
    ["compute", "--group", "Nope"],
    ["compute"],
    ["compute", "--group", "A5", "--strategy", "guess"],
    ["frobnicate"],
])
def test_parse_failures_exit_64(capsys, argv):
    if argv[0] == "frobnicate" or "--strategy" in argv:
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 64
    else:
        code, _, _ = _run(capsys, *argv)
        assert code == 64


def test_bad_group_file_exit_64(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text("{not json")
    code, _, _ = _run(capsys, "compute", "--group-file", str(path))
    assert code == 64


def test_inconclusive_exit_2(capsys):
    code, out, _ = _run(capsys, "compute", "--group", "A9", "--strategy", "direct")
    assert code == 2 and json.loads(out)["bogomolov_multiplier"] is None
    code, _, _ = _run(capsys, "compute", "--group", "S4", "--strategy", "semidirect")
    assert code == 2


def test_max_direct_order_flag(capsys):
    from bogomolov.config import settings

    old = settings.max_direct_order
    try:
        code, out, _ = _run(capsys, "compute", "--group", "S4", "--max-direct-order", "10")
        report = json.loads(out)
        assert report["schur_multiplier"] is None and report["strategy"] != "direct"
    finally:
        settings.max_direct_order = old


def test_replay_roundtrip_and_tampering(tmp_path, capsys):
    code, out, _ = _run(capsys, "compute", "--group", "A5")
    good = tmp_path / "a5.json"
    good.write_text(out)
    assert _run(capsys, "replay", str(good))[0] == 0
    report = json.loads(out)
    w = report["certificate"]["witnesses"][0]
    w["values"][7] = (w["values"][7] + 1) % w["modulus"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(report))
    code, _, err = _run(capsys, "replay", str(bad))
    assert code == 3 and "witness 0" in err


def test_replay_commutator_tampering(tmp_path, capsys):
    out = tmp_path / "qs"
    assert _run(capsys, "verify-theorem", "quasisimple", "--group", "SL(2,5)", "--out", str(out))[0] == 0
    path = next(out.glob("*.json"))
    assert _run(capsys, "replay", str(path))[0] == 0
    data = json.loads(path.read_text())
    w = data["certificates"]["commutators"]["witnesses"][0]
    w["b"] = w["a"]
    path.write_text(json.dumps(data))
    assert _run(capsys, "replay", str(path))[0] == 3


def test_replay_empty_certificate(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("{}")
    assert _run(capsys, "replay", str(path))[0] == 0
    code, out, _ = _run(capsys, "compute", "--group", "C1")
    path.write_text(out)
    assert _run(capsys, "replay", str(path))[0] == 0


def test_replay_parse_failure(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text("[1, 2]")
    assert _run(capsys, "replay", str(path))[0] == 64


def test_cache_layout_and_verification(tmp_path, capsys):
    cache = tmp_path / "cache"
    _, first, _ = _run(capsys, "compute", "--group", "D4", "--cache-dir", str(cache))
    entries = [p for p in cache.glob("??/*.json")]
    assert len(entries) == 1 and entries[0].parent.name == entries[0].stem[:2]
    code, second, _ = _run(capsys, "compute", "--group", "D4", "--cache-dir", str(cache), "--verify-cache")
    assert code == 0 and first == second
    # a corrupted entry is caught by verification
    data = json.loads(entries[0].read_text())
    data["value"]["order"] = 9
    entries[0].write_text(json.dumps(data))
    code, _, err = _run(capsys, "compute", "--group", "D4", "--cache-dir", str(cache), "--verify-cache")
    assert code == 3 and "differs" in err
    assert list((cache / "manifests").glob("*.json"))


def test_manifest_separate_from_report(tmp_path, capsys):
    out = tmp_path / "out"
    _run(capsys, "compute", "--group", "S3", "--out", str(out))
    manifests = list((out / "manifests").glob("*.json"))
    assert len(manifests) == 1
    m = json.loads(manifests[0].read_text())
    assert set(m) == {"tool_version", "config", "input_hash", "timings", "outcome"}
    report = json.loads(next(out.glob("*.json")).read_text())
    assert "timings" not in json.dumps(report)


def test_verify_theorem_almost_simple(capsys):
    code, out, _ = _run(capsys, "verify-theorem", "almost-simple", "--group", "S5")
    assert code == 0 and "verified" in out


def test_verify_theorem_out_lemma(tmp_path, capsys):
    path = tmp_path / "A3q5.json"
    path.write_text(json.dumps({"family": "A", "rank": 3, "q": 5}))
    code, out, _ = _run(capsys, "verify-theorem", "out-lemma", "--descriptor", str(path))
    assert code == 0 and "A3(5)" in out and "verified" in out
    code, _, _ = _run(capsys, "verify-theorem", "out-lemma", "--descriptor", "missing-nonsense")
    assert code == 64


def test_verify_theorem_inconclusive(capsys):
    code, out, _ = _run(capsys, "verify-theorem", "almost-simple", "--group", "C2xA5")
    assert code == 2 and "inconclusive" in out


def test_verify_theorem_order_preserved_with_threads(capsys):
    code, out, _ = _run(capsys, "verify-theorem", "quasisimple", "--group", "A6", "--group", "A5", "--threads", "2")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == ["A6", "A5"]


def test_catalog_list_via_module():
    out = subprocess.run([sys.executable, "-m", "bogomolov", "catalog", "list"],
                         capture_output=True, text=True, check=True).stdout
    assert "psl2" in out and "PSL(2,q)" in out and "A3q5" in out
