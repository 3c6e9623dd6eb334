import json
import subprocess
import sys


from quatks.cli import main
from test_catalog import raw_entries


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra(capsys):
    code, out, _ = run(["algebra", "--a=-1", "--b=3"], capsys)
    assert code == 0 and "d_B = 6" in out and "indefinite" in out
    code, out, _ = run(["algebra", "--a=1", "--b=1"], capsys)
    assert "d_B = 1" in out and "split" in out
    code, _, err = run(["algebra", "--a=0", "--b=1"], capsys)
    assert code != 0 and "nonzero" in err


def test_padic(capsys):
    code, out, _ = run(["padic", "--p=3", "--N=20", "--T=standard", "--Tprime=twisted"], capsys)
    assert code == 0 and "det-image valuation: 1" in out
    code, out, _ = run(["padic", "--p=5", "--N=2", "--T=standard", "--Tprime=standard"], capsys)
    assert code == 0 and "det-image valuation: 0" in out
    code, _, err = run(["padic", "--p=2", "--N=20"], capsys)
    assert code != 0 and "unsupported" in err


def test_verify_all_deterministic(tmp_path, capsys):
    a, b, c = tmp_path / "a.jsonl", tmp_path / "b.jsonl", tmp_path / "c.jsonl"
    assert run(["verify-all", "--seed=11", f"--out={a}"], capsys)[0] == 0
    assert run(["verify-all", "--seed=11", f"--out={b}"], capsys)[0] == 0
    assert run(["verify-all", "--seed=11", f"--out={c}", "--jobs=2"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    lines = [json.loads(x) for x in a.read_text().splitlines()]
    records, summ = lines[:-1], lines[-1]
    assert summ["pass"] and summ["total"] == len(records)
    keys = [(r["entry"], r["check"]) for r in records]
    assert keys == sorted(keys)


def test_seed_changes_samples(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run(["verify-all", "--seed=1", f"--out={a}"], capsys)
    run(["verify-all", "--seed=2", f"--out={b}"], capsys)
    assert a.read_bytes() != b.read_bytes()


def test_corrupted_catalog_fails(tmp_path, capsys):
    entries = raw_entries()
    entries[1] = dict(entries[1], basis=entries[1]["basis"][:12] + ["1/3"] * 4)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"entries": entries}))
    out_path = tmp_path / "out.jsonl"
    code, out, _ = run(["verify-all", f"--catalog={path}", f"--out={out_path}"], capsys)
    assert code == 1
    assert "FAIL" in out and "dB06" in out and "violated: closed" in out
    summ = json.loads(out_path.read_text().splitlines()[-1])
    assert "dB06:order_axioms" in summ["failed"]


def test_malformed_entry_reported_with_id(tmp_path, capsys):
    entries = raw_entries()
    entries[2] = dict(entries[2], expected_d_B=5)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(entries))
    code, out, _ = run(["verify-all", f"--catalog={path}"], capsys)
    assert code == 1 and "dB06-nonmaximal" in out


def test_unreadable_catalog(tmp_path, capsys):
    code, _, err = run(["verify-all", f"--catalog={tmp_path / 'nope.json'}"], capsys)
    assert code == 2 and "cannot read" in err


def test_env_catalog(tmp_path, monkeypatch, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(raw_entries()[:1]))
    monkeypatch.setenv("QUATKS_CATALOG", str(path))
    code, out, _ = run(["verify-all"], capsys)
    assert code == 0 and "dB06" not in out and "M2Z" in out


def test_bad_config(capsys):
    assert run(["verify-all", "--N=1"], capsys)[0] == 2
    assert run(["verify-all", "--samples=0"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quatks", "algebra", "--a=-1", "--b=7"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "d_B = 14" in proc.stdout
