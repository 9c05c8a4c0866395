import json
import math

import pytest

from lightsout_grover.cli import EXIT_CAPACITY, EXIT_USAGE, EXIT_VALIDATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def build(tmp_path, capsys, name, *extra):
    path = tmp_path / f"{name}.json"
    assert run(capsys, "build", name, "--out", str(path), *extra)[0] == 0
    return path


def test_build_metadata(tmp_path, capsys):
    grid = json.loads(build(tmp_path, capsys, "grid2x2").read_text())
    assert grid["metadata"]["marked"] == ["11"]
    assert grid["circuit"]["num_qubits"] == 9
    code, out, _ = run(capsys, "build", "mobius6")
    assert code == 0
    assert json.loads(out)["metadata"]["ideal_total"] == pytest.approx(0.84375, abs=1e-9)
    sat = json.loads(build(tmp_path, capsys, "sat").read_text())
    assert sat["metadata"]["marked"] == ["01"]


def test_build_custom_instance(tmp_path, capsys):
    inst = tmp_path / "ring.json"
    inst.write_text(json.dumps({"num_lamps": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 0]],
                                "reflexive": True, "initial": "11100"}))
    code, out, _ = run(capsys, "build", str(inst))
    assert code == 0
    meta = json.loads(out)["metadata"]
    assert meta["oracle"] == "lookup"
    assert meta["marked"] == ["001"]
    code, out, _ = run(capsys, "verify", str(inst), "--all")
    assert code == 0 and json.loads(out)["ok"]


def test_build_custom_grid_uses_structured_oracle(tmp_path, capsys):
    inst = tmp_path / "grid.json"
    inst.write_text(json.dumps({"num_lamps": 4, "edges": [[0, 1], [0, 2], [1, 3], [2, 3]],
                                "reflexive": True, "initial": "1110"}))
    meta = json.loads(run(capsys, "build", str(inst))[1])["metadata"]
    assert meta["oracle"] == "structured"
    assert meta["marked"] == ["00"]


def test_build_errors(tmp_path, capsys):
    assert run(capsys, "build", str(tmp_path / "missing.json"))[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "build", str(bad))[0] == EXIT_VALIDATION
    assert run(capsys, "build", "grid2x2", "--initial", "10")[0] == EXIT_VALIDATION
    assert run(capsys, "build", "grid2x2", "--initial", "1x11")[0] == EXIT_USAGE
    off = tmp_path / "off.json"
    off.write_text(json.dumps({"num_lamps": 3, "edges": [[0, 1], [1, 2]], "initial": "000"}))
    assert run(capsys, "build", str(off))[0] == EXIT_VALIDATION


def test_run_noiseless(tmp_path, capsys):
    grid = build(tmp_path, capsys, "grid2x2")
    code, out, _ = run(capsys, "run", str(grid))
    data = json.loads(out)
    assert code == 0
    assert data["distribution"]["counts"] == {"11": 4000}
    assert data["success"]["p_hat"] == 1.0
    sanity = build(tmp_path, capsys, "sanity2q")
    data = json.loads(run(capsys, "run", str(sanity), "--shots", "1000")[1])
    assert data["distribution"]["counts"] == {"10": 1000}


def test_run_readout_scrambled(tmp_path, capsys):
    sanity = build(tmp_path, capsys, "sanity2q")
    noise = tmp_path / "noise.json"
    noise.write_text(json.dumps({"p1": 0, "p2": 0, "p_ro": 0.5}))
    counts = json.loads(run(capsys, "run", str(sanity), "--shots", "1000",
                            "--noise", str(noise))[1])["distribution"]["counts"]
    sigma = math.sqrt(1000 * 0.25 * 0.75)
    assert all(abs(counts.get(k, 0) - 250) < 5 * sigma for k in ("00", "01", "10", "11"))


def test_run_reproducible(tmp_path, capsys):
    sat = build(tmp_path, capsys, "sat")
    a = run(capsys, "run", str(sat), "--p2", "0.05", "--seed", "3", "--shots", "500")[1]
    b = run(capsys, "run", str(sat), "--p2", "0.05", "--seed", "3", "--shots", "500")[1]
    assert a == b


def test_transpile(tmp_path, capsys):
    sat = build(tmp_path, capsys, "sat")
    code, out, _ = run(capsys, "transpile", str(sat), "--target", "LINE_5", "--level", "2")
    assert code == 0
    data = json.loads(out)
    assert {"qubits_used", "two_qubit_ops", "depth", "size"} <= set(data["report"])
    assert data["metadata"]["marked"] == ["01"]
    again = run(capsys, "transpile", str(sat), "--target", "LINE_5", "--level", "2")[1]
    assert again == out
    # transpiled output feeds straight back into run
    compiled = tmp_path / "compiled.json"
    compiled.write_text(out)
    result = json.loads(run(capsys, "run", str(compiled), "--shots", "100")[1])
    assert result["success"]["p_hat"] == 1.0


def test_transpile_errors(tmp_path, capsys):
    sat = build(tmp_path, capsys, "sat")
    with pytest.raises(SystemExit) as info:
        main(["transpile", str(sat), "--level", "4"])
    assert info.value.code == EXIT_USAGE
    grid = build(tmp_path, capsys, "grid2x2")
    assert run(capsys, "transpile", str(grid), "--target", "LINE_5")[0] == EXIT_CAPACITY
    assert run(capsys, "transpile", str(grid), "--target", "NOPE")[0] == EXIT_USAGE


def test_transpile_custom_target(tmp_path, capsys):
    target = tmp_path / "tri.json"
    target.write_text(json.dumps({"name": "TRI", "num_qubits": 3, "edges": [[0, 1], [1, 2]],
                                  "native_1q": ["prx"], "native_2q": "cz",
                                  "edge_weights": {"0-1": 1.0, "1-2": 2.0}}))
    sanity = build(tmp_path, capsys, "sanity2q")
    code, out, _ = run(capsys, "transpile", str(sanity), "--target", str(target))
    assert code == 0
    assert json.loads(out)["report"]["target"] == "TRI"


def test_solve_and_verify(capsys):
    code, out, _ = run(capsys, "solve", "grid2x2")
    data = json.loads(out)
    assert code == 0 and data["single_click"] == [3]
    assert data["solutions"][0] == "0001"
    exhaustive = json.loads(run(capsys, "solve", "grid2x2", "--method", "exhaustive")[1])
    assert exhaustive["solutions"] == data["solutions"]
    code, out, _ = run(capsys, "verify", "mobius6", "--all")
    assert code == 0
    assert json.loads(out)["checked"] == 64


def test_bench_cli(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LIGHTSOUT_BENCH_DIR", str(tmp_path / "env-out"))
    code, out, _ = run(capsys, "bench", "--circuits", "sanity2q", "--targets", "LINE_5",
                       "--levels", "0", "1", "--seeds", "1", "--shots", "100", "--p2", "0.01")
    assert code == 0
    assert (tmp_path / "env-out" / "transpile.md").exists()
    summary = json.loads(out)
    assert summary["failed"] == 0
    code, _, _ = run(capsys, "bench", "--out", str(tmp_path / "again"),
                     "--from-raw", str(tmp_path / "env-out" / "runs.json"))
    assert code == 0
    assert ((tmp_path / "again" / "noise.csv").read_text()
            == (tmp_path / "env-out" / "noise.csv").read_text())
    assert run(capsys, "bench", "--circuits", "nope")[0] == EXIT_USAGE


def test_bench_partial_failure_exit(tmp_path, capsys, monkeypatch):
    import lightsout_grover.bench as bench

    def broken(*args, **kwargs):
        from lightsout_grover.errors import LightsOutError
        raise LightsOutError("simulated failure")

    monkeypatch.setattr(bench, "sample", broken)
    code, _, err = run(capsys, "bench", "--out", str(tmp_path), "--circuits", "sanity2q",
                       "--targets", "LINE_5", "--levels", "0", "--seeds", "1", "--p2", "0.01")
    assert code == 1
    assert "simulated failure" in err
