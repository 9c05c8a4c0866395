import json

import pytest

from lightsout_grover.bench import (
    BenchConfig,
    BenchmarkRun,
    benchmark,
    derive_seed,
    failures,
    load_raw,
    render_tables,
    run_bench,
    write_outputs,
)


@pytest.fixture(scope="module")
def small_raw():
    cfg = BenchConfig(circuits=("sanity2q", "sat", "grid2x2"), targets=("LINE_5", "SQUARE_20"),
                      levels=(0, 3), p2_grid=(0.0, 0.005, 0.02), seeds=2, shots=400)
    return run_bench(cfg)


def test_benchmark_names():
    circuit, spec = benchmark("grid2x2")
    assert circuit.num_qubits == 9 and spec.marked == {"11"}
    with pytest.raises(KeyError):
        benchmark("nope")


def test_derived_seeds_distinct():
    seeds = {derive_seed(0, i, j) for i in range(10) for j in range(5)}
    assert len(seeds) == 50
    assert derive_seed(3, 1, 2) == derive_seed(3, 1, 2)


def test_runs_are_consistent(small_raw):
    runs = [BenchmarkRun.from_dict(r) for r in small_raw["runs"]]
    assert runs
    for run in runs:
        assert run.consistent()
        assert BenchmarkRun.from_dict(run.to_dict()) == run


def test_too_wide_points_skipped(small_raw):
    grid_line = [r for r in small_raw["runs"]
                 if r["circuit"] == "grid2x2" and r["target"] == "LINE_5"]
    assert grid_line and all(r["status"] == "skipped" for r in grid_line)
    assert failures(small_raw) == []


def test_ideal_columns(small_raw):
    assert small_raw["ideal"]["grid2x2"]["success"] == pytest.approx(1.0)
    tables = render_tables(small_raw)
    assert "| 11 * | 1.00000 |" in tables["distribution_grid2x2.md"]
    assert "| 1.000 |" in tables["transpile.md"]


def test_mobius_ideal_column():
    raw = run_bench(BenchConfig(circuits=("mobius6",), targets=("SQUARE_20",), levels=(1,),
                                p2_grid=(0.0,), seeds=1, shots=100))
    table = render_tables(raw)["distribution_mobius6.md"]
    for key in ("001", "011", "101"):
        assert f"| {key} * | 0.28125 |" in table
    assert all(r["status"] == "skipped" for r in raw["runs"] if r["noise"])


def test_noise_column_monotone(small_raw):
    means = {}
    for r in small_raw["runs"]:
        if r["noise"] and r["status"] == "ok" and r["circuit"] == "sat":
            key = (r["target"], r["opt_level"])
            means.setdefault(key, {}).setdefault(r["noise"]["p2"], []).append(r["p_hat"])
    assert means
    for by_p2 in means.values():
        avg = [sum(v) / len(v) for _, v in sorted(by_p2.items())]
        assert all(a >= b for a, b in zip(avg, avg[1:]))


def test_tables_rederive_from_raw(small_raw, tmp_path):
    written = write_outputs(small_raw, tmp_path)
    assert written[0].name == "runs.json"
    reloaded = load_raw(tmp_path / "runs.json")
    for name, text in render_tables(reloaded).items():
        assert (tmp_path / name).read_text() == text
    assert not list(tmp_path.glob(".*"))


def test_bench_reproducible():
    cfg = BenchConfig(circuits=("sanity2q",), targets=("LINE_5",), levels=(1,),
                      p2_grid=(0.01,), seeds=2, shots=200, master_seed=4)
    assert json.dumps(run_bench(cfg)) == json.dumps(run_bench(cfg))


def test_parallel_matches_serial():
    cfg = BenchConfig(circuits=("sanity2q", "sat"), targets=("LINE_5",), levels=(0, 2),
                      p2_grid=(0.01,), seeds=1, shots=200)
    parallel = BenchConfig(**{**cfg.to_dict(), "jobs": 2})
    a, b = run_bench(cfg), run_bench(parallel)
    assert a["runs"] == b["runs"]
