"""Benchmark harness: transpile, sample and tabulate the four benchmark circuits.

Every number in a rendered table is computed from the raw run records, so
``render_tables(load_raw(path))`` reproduces the files written by
``run_bench``.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .circuit import Circuit
from .errors import CircuitTooWide, LightsOutError
from .noise import NoiseModel, sample_noisy
from .sampling import Distribution, bitstring, ideal_probabilities, sample, success_frequency
from .synthesis import (
    GRID_INITIAL,
    MOBIUS_INITIAL,
    OracleSpec,
    grover_circuit,
    oracle_grid2x2,
    oracle_mobius6,
    sanity_oracle,
    sat_oracle,
)
from .transpiler import MAX_LEVEL, TranspileReport, builtin_targets, get_target, transpile

ENV_OUT_DIR = "LIGHTSOUT_BENCH_DIR"
DEFAULT_OUT_DIR = "bench-out"
DEFAULT_P2_GRID = (0.0, 0.001, 0.005, 0.02)
REFERENCE_P2 = 0.005

BENCHMARKS: dict[str, Callable[[], OracleSpec]] = {
    "grid2x2": lambda: oracle_grid2x2(GRID_INITIAL),
    "mobius6": lambda: oracle_mobius6(MOBIUS_INITIAL),
    "sat": sat_oracle,
    "sanity2q": sanity_oracle,
}


def benchmark(name: str) -> tuple[Circuit, OracleSpec]:
    if name not in BENCHMARKS:
        raise KeyError(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}")
    spec = BENCHMARKS[name]()
    return grover_circuit(spec), spec


def derive_seed(master: int, *path: int) -> int:
    """Independent per-point seed from the master seed and a point index path."""
    return int(np.random.SeedSequence([master, *path]).generate_state(1)[0])


@dataclass(frozen=True)
class BenchmarkRun:
    circuit: str
    target: str
    opt_level: int
    shots: int
    seed: int
    noise: NoiseModel | None
    marked: tuple[str, ...]
    distribution: Distribution | None = None
    report: TranspileReport | None = None
    p_hat: float | None = None
    sigma: float | None = None
    status: str = "ok"
    message: str = ""

    def consistent(self) -> bool:
        """p̂ agrees with the stored distribution and marked set."""
        if self.distribution is None:
            return self.p_hat is None
        return self.p_hat == success_frequency(self.distribution, self.marked).p_hat

    def to_dict(self) -> dict:
        return {
            "circuit": self.circuit,
            "target": self.target,
            "opt_level": self.opt_level,
            "shots": self.shots,
            "seed": self.seed,
            "noise": None if self.noise is None else self.noise.to_dict(),
            "marked": list(self.marked),
            "distribution": None if self.distribution is None else self.distribution.to_dict(),
            "report": None if self.report is None else self.report.to_dict(),
            "p_hat": self.p_hat,
            "sigma": self.sigma,
            "status": self.status,
            "message": self.message,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchmarkRun":
        return cls(
            circuit=d["circuit"], target=d["target"], opt_level=int(d["opt_level"]),
            shots=int(d["shots"]), seed=int(d["seed"]),
            noise=None if d.get("noise") is None else NoiseModel.from_dict(d["noise"]),
            marked=tuple(d.get("marked", ())),
            distribution=None if d.get("distribution") is None
            else Distribution.from_dict(d["distribution"]),
            report=None if d.get("report") is None else TranspileReport.from_dict(d["report"]),
            p_hat=d.get("p_hat"), sigma=d.get("sigma"),
            status=d.get("status", "ok"), message=d.get("message", ""),
        )


@dataclass(frozen=True)
class BenchConfig:
    circuits: tuple[str, ...] = tuple(BENCHMARKS)
    targets: tuple[str, ...] = tuple(builtin_targets())
    levels: tuple[int, ...] = tuple(range(MAX_LEVEL + 1))
    p2_grid: tuple[float, ...] = DEFAULT_P2_GRID
    p1_ratio: float = 0.1
    p_ro: float = 0.01
    seeds: int = 5
    shots: int = 4000
    master_seed: int = 0
    max_noisy_qubits: int = 12
    jobs: int = 1

    def noise_models(self) -> list[NoiseModel]:
        return [NoiseModel(p2 * self.p1_ratio, p2, self.p_ro) for p2 in self.p2_grid]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class _Point:
    index: int
    circuit: str
    target: str
    level: int
    config: BenchConfig = field(repr=False)


def _run_point(point: _Point) -> list[BenchmarkRun]:
    cfg = point.config
    logical, spec = benchmark(point.circuit)
    marked = tuple(sorted(spec.marked))
    target = get_target(point.target)
    base = dict(circuit=point.circuit, target=point.target, opt_level=point.level,
                shots=cfg.shots, marked=marked)
    try:
        compiled, report = transpile(logical, target, point.level, seed=cfg.master_seed)
    except CircuitTooWide as exc:
        return [BenchmarkRun(seed=cfg.master_seed, noise=None, status="skipped",
                             message=str(exc), **base)]
    except LightsOutError as exc:
        return [BenchmarkRun(seed=cfg.master_seed, noise=None, status="error",
                             message=str(exc), **base)]

    def record(seed: int, noise: NoiseModel | None) -> BenchmarkRun:
        try:
            if noise is None:
                dist = sample(compiled, cfg.shots, seed)
            else:
                dist = sample_noisy(compiled, noise, cfg.shots, seed)
        except LightsOutError as exc:
            return BenchmarkRun(seed=seed, noise=noise, report=report, status="error",
                                message=str(exc), **base)
        freq = success_frequency(dist, marked)
        return BenchmarkRun(seed=seed, noise=noise, distribution=dist, report=report,
                            p_hat=freq.p_hat, sigma=freq.sigma, **base)

    runs = [record(derive_seed(cfg.master_seed, point.index, 0), None)]
    for k, noise in enumerate(cfg.noise_models()):
        for s in range(cfg.seeds):
            seed = derive_seed(cfg.master_seed, point.index, 1 + k, s)
            if report.qubits_used > cfg.max_noisy_qubits:
                runs.append(BenchmarkRun(
                    seed=seed, noise=noise, report=report, status="skipped",
                    message=f"{report.qubits_used} active qubits exceeds "
                            f"--max-noisy-qubits {cfg.max_noisy_qubits}", **base))
            else:
                runs.append(record(seed, noise))
    return runs


def run_bench(config: BenchConfig) -> dict:
    """Execute every grid point and return the raw record."""
    points = []
    for circuit in config.circuits:
        for target in config.targets:
            for level in config.levels:
                points.append(_Point(len(points), circuit, target, level, config))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_run_point, points))
    else:
        chunks = [_run_point(p) for p in points]
    ideal = {}
    for name in config.circuits:
        logical, spec = benchmark(name)
        probs = ideal_probabilities(logical)
        ideal[name] = {
            "marked": sorted(spec.marked),
            "width": len(logical.measured_qubits),
            "probabilities": probs,
            "success": sum(probs.get(m, 0.0) for m in spec.marked),
        }
    return {
        "config": config.to_dict(),
        "ideal": ideal,
        "runs": [r.to_dict() for chunk in chunks for r in chunk],
    }


def load_raw(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


# rendering -------------------------------------------------------------------

def _fmt(x: float | None, digits: int = 3) -> str:
    return "" if x is None else f"{x:.{digits}f}"


def _markdown(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _noise_key(noise: dict | None) -> tuple | None:
    return None if noise is None else (noise["p1"], noise["p2"], noise["p_ro"])


def transpile_rows(raw: dict) -> tuple[list[str], list[list[str]]]:
    header = ["circuit", "target", "level", "qub", "2q op", "depth", "size", "swaps",
              "ideal", "p̂ (noiseless)", "σ"]
    rows = []
    for r in raw["runs"]:
        if r["noise"] is not None:
            continue
        ideal = raw["ideal"][r["circuit"]]["success"]
        if r["status"] != "ok":
            rows.append([r["circuit"], r["target"], str(r["opt_level"]), "", "", "", "", "",
                         _fmt(ideal), r["status"], r["message"]])
            continue
        rep = r["report"]
        rows.append([r["circuit"], r["target"], str(r["opt_level"]), str(rep["qubits_used"]),
                     str(rep["two_qubit_ops"]), str(rep["depth"]), str(rep["size"]),
                     str(rep["swaps_inserted"]), _fmt(ideal), _fmt(r["p_hat"]),
                     _fmt(r["sigma"], 4)])
    return header, rows


def noise_rows(raw: dict) -> tuple[list[str], list[list[str]]]:
    """Seed-averaged success per (circuit, target, level, noise point)."""
    groups: dict[tuple, list[dict]] = {}
    for r in raw["runs"]:
        if r["noise"] is None:
            continue
        key = (r["circuit"], r["target"], r["opt_level"], _noise_key(r["noise"]))
        groups.setdefault(key, []).append(r)
    header = ["circuit", "target", "level", "p1", "p2", "p_ro", "seeds", "mean p̂", "mean σ",
              "status"]
    rows = []
    for (circuit, target, level, (p1, p2, p_ro)), runs in groups.items():
        ok = [r for r in runs if r["status"] == "ok"]
        if ok:
            mean = float(np.mean([r["p_hat"] for r in ok]))
            sig = float(np.mean([r["sigma"] for r in ok]))
            status = "ok" if len(ok) == len(runs) else "partial"
        else:
            mean = sig = None
            status = runs[0]["status"]
        rows.append([circuit, target, str(level), f"{p1:g}", f"{p2:g}", f"{p_ro:g}",
                     str(len(ok)), _fmt(mean), _fmt(sig, 4), status])
    return header, rows


def distribution_rows(raw: dict, circuit: str) -> tuple[list[str], list[list[str]]]:
    """Outcome frequencies: ideal, then each (target, level) at the reference noise.

    Counts are pooled over seeds; points without noisy runs fall back to
    their noiseless run.
    """
    ideal = raw["ideal"][circuit]
    width = ideal["width"]
    columns: dict[str, dict[str, int]] = {}
    totals: dict[str, int] = {}
    ref_p2 = REFERENCE_P2 if REFERENCE_P2 in raw["config"]["p2_grid"] else None
    for r in raw["runs"]:
        if r["circuit"] != circuit or r["status"] != "ok":
            continue
        noisy = r["noise"] is not None
        if noisy and (ref_p2 is None or r["noise"]["p2"] != ref_p2):
            continue
        name = f"{r['target']} L{r['opt_level']}" + (" noisy" if noisy else "")
        columns.setdefault(name, {})
        totals[name] = totals.get(name, 0) + r["distribution"]["shots"]
        for k, v in r["distribution"]["counts"].items():
            columns[name][k] = columns[name].get(k, 0) + v
    chosen = {}
    for name in columns:
        if name.endswith(" noisy"):
            chosen[name[:-6]] = name
        else:
            chosen.setdefault(name, name)
    header = ["outcome", "ideal"] + [chosen[c] for c in chosen]
    rows = []
    for v in range(2 ** width):
        key = bitstring(v, width)
        row = [key + (" *" if key in ideal["marked"] else ""),
               _fmt(ideal["probabilities"].get(key, 0.0), 5)]
        for col in chosen.values():
            row.append(_fmt(columns[col].get(key, 0) / totals[col]))
        rows.append(row)
    return header, rows


def render_tables(raw: dict) -> dict[str, str]:
    """File name → contents for every Markdown and CSV table."""
    files = {}
    tables = {"transpile": transpile_rows(raw), "noise": noise_rows(raw)}
    for circuit in raw["ideal"]:
        tables[f"distribution_{circuit}"] = distribution_rows(raw, circuit)
    for stem, (header, rows) in tables.items():
        files[f"{stem}.md"] = _markdown(header, rows)
        files[f"{stem}.csv"] = _csv(header, rows)
    return files


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_outputs(raw: dict, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "runs.json"]
    _atomic_write(written[0], json.dumps(raw, indent=1, sort_keys=True))
    # tables come from the reloaded file, never from in-memory state
    for name, text in render_tables(load_raw(written[0])).items():
        _atomic_write(out / name, text)
        written.append(out / name)
    return written


def failures(raw: dict) -> list[dict]:
    return [r for r in raw["runs"] if r["status"] == "error"]
