"""Command-line interface: ``lightsout build|run|transpile|bench|solve|verify``.

Exit codes: 0 success, 1 partial benchmark failure, 2 usage error,
3 validation error, 4 capacity error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import bench
from .circuit import Circuit, from_dict, to_dict
from .errors import CircuitTooWide, LightsOutError, ParseError, TooLarge
from .lightsout import (
    LightsOutInstance,
    build_grid,
    build_mobius,
    single_click_solutions,
    solve_exhaustive,
    solve_gf2,
)
from .noise import NoiseModel, sample_noisy
from .sampling import ideal_probabilities, sample, success_frequency
from .synthesis import (
    GRID_INITIAL,
    MOBIUS_INITIAL,
    OracleSpec,
    grover_circuit,
    oracle_grid2x2,
    oracle_mobius6,
    oracle_phase_pattern,
    phase_oracle,
    sanity_oracle,
    sat_oracle,
)
from .transpiler import MAX_LEVEL, Target, get_target, transpile

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_CAPACITY = 4

BUILTIN_CIRCUITS = ("grid2x2", "mobius6", "sat", "sanity2q")


class UsageError(Exception):
    pass


def _bits(text: str) -> tuple[int, ...]:
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"{text!r} is not a bitstring")
    return tuple(int(c) for c in text)


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _instance(name: str, initial: str | None) -> LightsOutInstance:
    init = _bits(initial) if initial else None
    if name == "grid2x2":
        return build_grid(2, 2, init or GRID_INITIAL)
    if name == "mobius6":
        return build_mobius(6, init or MOBIUS_INITIAL)
    inst = LightsOutInstance.from_dict(_read_json(name))
    return inst.with_initial(init) if init else inst


def _structured(instance: LightsOutInstance) -> str | None:
    n = instance.num_lamps
    if n == 4 and instance.adjacency == build_grid(2, 2).adjacency and instance.rule.reflexive:
        return "grid2x2"
    if n == 6 and instance.adjacency == build_mobius(6).adjacency and not instance.rule.reflexive:
        return "mobius6"
    return None


def _oracle_for(instance: LightsOutInstance) -> tuple[OracleSpec, str]:
    """Structured oracle for the two benchmark graphs, a lookup oracle otherwise."""
    n = instance.num_lamps
    shape = _structured(instance)
    if shape == "grid2x2":
        return oracle_grid2x2(instance.initial_config), "structured"
    if shape == "mobius6":
        return oracle_mobius6(instance.initial_config), "structured"
    marked = sorted(single_click_solutions(instance))
    if not marked:
        raise LightsOutError("instance has no single-click solution to search for")
    width = max(1, (n - 1).bit_length())
    return phase_oracle(width, marked), "lookup"


def _spec(name: str, initial: str | None) -> tuple[OracleSpec, str]:
    if name == "sat":
        return sat_oracle(), "structured"
    if name == "sanity2q":
        return sanity_oracle(initial or "10"), "structured"
    return _oracle_for(_instance(name, initial))


def _load_circuit(path: str) -> tuple[Circuit, dict]:
    """Accept a bare circuit, or any command output wrapping one under "circuit"."""
    data = _read_json(path)
    if isinstance(data, dict) and "circuit" in data:
        return from_dict(data["circuit"]), data.get("metadata", {})
    return from_dict(data), {}


def _target(name: str) -> Target:
    if os.path.exists(name):
        return Target.from_dict(_read_json(name))
    try:
        return get_target(name)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None


# commands ----------------------------------------------------------------------

def cmd_build(args) -> int:
    spec, kind = _spec(args.instance, args.initial)
    circuit = grover_circuit(spec, args.iterations)
    probs = ideal_probabilities(circuit)
    metadata = {
        "name": spec.name,
        "oracle": kind,
        "marked": sorted(spec.marked),
        "search_space_size": spec.search_space_size,
        "num_qubits": circuit.num_qubits,
        "ideal": probs,
        "ideal_total": sum(probs.get(m, 0.0) for m in spec.marked),
        "stats": circuit.stats().as_dict(),
    }
    _emit({"circuit": to_dict(circuit), "metadata": metadata}, args.out)
    return EXIT_OK


def _noise(args) -> NoiseModel | None:
    if args.noise:
        return NoiseModel.from_dict(_read_json(args.noise))
    if args.p1 or args.p2 or args.p_ro:
        return NoiseModel(args.p1, args.p2, args.p_ro)
    return None


def cmd_run(args) -> int:
    circuit, metadata = _load_circuit(args.circuit)
    noise = _noise(args)
    if noise is None:
        dist = sample(circuit, args.shots, args.seed)
    else:
        dist = sample_noisy(circuit, noise, args.shots, args.seed)
    payload = {"distribution": dist.to_dict(), "seed": args.seed,
               "noise": None if noise is None else noise.to_dict()}
    if metadata.get("marked"):
        freq = success_frequency(dist, metadata["marked"])
        payload["success"] = {"marked": metadata["marked"], "p_hat": freq.p_hat,
                              "sigma": freq.sigma, "worst_case_sigma": freq.worst_case}
    _emit(payload, args.out)
    return EXIT_OK


def cmd_transpile(args) -> int:
    circuit, metadata = _load_circuit(args.circuit)
    out, report = transpile(circuit, _target(args.target), args.level, seed=args.seed,
                            lookahead=args.lookahead)
    _emit({"circuit": to_dict(out), "report": report.to_dict(),
           "metadata": metadata}, args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    out_dir = args.out or os.environ.get(bench.ENV_OUT_DIR) or bench.DEFAULT_OUT_DIR
    if args.from_raw:
        raw = bench.load_raw(args.from_raw)
    else:
        cfg = bench.BenchConfig(
            circuits=tuple(args.circuits or bench.BENCHMARKS),
            targets=tuple(args.targets or bench.BenchConfig().targets),
            levels=tuple(args.levels if args.levels is not None else range(MAX_LEVEL + 1)),
            p2_grid=tuple(args.p2 if args.p2 is not None else bench.DEFAULT_P2_GRID),
            p1_ratio=args.p1_ratio, p_ro=args.p_ro, seeds=args.seeds, shots=args.shots,
            master_seed=args.seed, max_noisy_qubits=args.max_noisy_qubits, jobs=args.jobs)
        for name in cfg.circuits:
            if name not in bench.BENCHMARKS:
                raise UsageError(f"unknown circuit {name!r}")
        for name in cfg.targets:
            try:
                get_target(name)
            except KeyError as exc:
                raise UsageError(str(exc)) from None
        raw = bench.run_bench(cfg)
    written = bench.write_outputs(raw, out_dir)
    failed = bench.failures(raw)
    summary = {"out": str(out_dir), "files": [p.name for p in written],
               "runs": len(raw["runs"]), "failed": len(failed),
               "skipped": sum(1 for r in raw["runs"] if r["status"] == "skipped")}
    _emit(summary, None)
    for r in failed:
        print(f"error: {r['circuit']} on {r['target']} L{r['opt_level']}: {r['message']}",
              file=sys.stderr)
    return EXIT_PARTIAL if failed else EXIT_OK


def _bitstr(bits) -> str:
    return "".join(str(b) for b in bits)


def cmd_solve(args) -> int:
    instance = _instance(args.instance, args.initial)
    solutions = solve_gf2(instance) if args.method == "gf2" else solve_exhaustive(instance)
    ordered = sorted(solutions, key=lambda x: (sum(x), x))
    _emit({
        "num_lamps": instance.num_lamps,
        "initial": _bitstr(instance.initial_config),
        "method": args.method,
        "solutions": [_bitstr(x) for x in ordered],
        "minimum_clicks": min((sum(x) for x in ordered), default=None),
        "single_click": sorted(single_click_solutions(instance)),
    }, args.out)
    return EXIT_OK


def _verify_one(instance: LightsOutInstance) -> dict:
    if not _structured(instance) and not single_click_solutions(instance):
        # an empty lookup oracle is the identity
        return {"initial": _bitstr(instance.initial_config), "oracle": "lookup",
                "quantum": [], "classical": [], "exact": True, "ok": True}
    spec, kind = _oracle_for(instance)
    pattern = oracle_phase_pattern(spec)
    width = len(spec.layout.index_qubits)
    expected = {format(v, f"0{width}b") for v in single_click_solutions(instance)}
    quantum = {k for k in pattern.marked() if int(k, 2) < instance.num_lamps}
    return {"initial": _bitstr(instance.initial_config), "oracle": kind,
            "quantum": sorted(quantum), "classical": sorted(expected),
            "exact": pattern.is_exact(), "ok": quantum == expected and pattern.is_exact()}


def cmd_verify(args) -> int:
    instance = _instance(args.instance, args.initial)
    if args.all:
        configs = itertools.product((0, 1), repeat=instance.num_lamps)
        results = [_verify_one(instance.with_initial(c)) for c in configs]
    else:
        results = [_verify_one(instance)]
    ok = all(r["ok"] for r in results)
    _emit({"ok": ok, "checked": len(results),
           "mismatches": [r for r in results if not r["ok"]],
           "results": results if not args.all else []}, args.out)
    return EXIT_OK if ok else EXIT_VALIDATION


# parser -----------------------------------------------------------------------

def _level(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_LEVEL:
        raise argparse.ArgumentTypeError(f"level must be 0..{MAX_LEVEL}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not a probability")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lightsout", description="Grover search circuits for Lights Out puzzles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit a benchmark circuit with metadata")
    p.add_argument("instance", help=f"{', '.join(BUILTIN_CIRCUITS)} or an instance JSON file")
    p.add_argument("--initial", help="initial lamp bits (lamp 0 first); marked string for sanity2q")
    p.add_argument("--iterations", type=int, help="Grover iterations (default: optimal)")
    p.add_argument("--out", help="write here instead of stdout")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("run", help="sample a circuit")
    p.add_argument("circuit", help="circuit JSON file ('-' for stdin)")
    p.add_argument("--shots", type=_positive, default=4000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", help="noise model JSON file")
    p.add_argument("--p1", type=_probability, default=0.0)
    p.add_argument("--p2", type=_probability, default=0.0)
    p.add_argument("--p-ro", dest="p_ro", type=_probability, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("transpile", help="compile a circuit for a device")
    p.add_argument("circuit", help="circuit JSON file ('-' for stdin)")
    p.add_argument("--target", default="HERON_PATCH", help="builtin name or target JSON file")
    p.add_argument("--level", type=_level, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lookahead", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("bench", help="run the benchmark grid and render tables")
    p.add_argument("--suite", choices=["standard"], default="standard",
                   help="the four benchmark circuits (the only suite)")
    p.add_argument("--out", help=f"output directory (default: ${bench.ENV_OUT_DIR} "
                                 f"or ./{bench.DEFAULT_OUT_DIR})")
    p.add_argument("--circuits", nargs="+")
    p.add_argument("--targets", nargs="+")
    p.add_argument("--levels", nargs="+", type=_level)
    p.add_argument("--p2", nargs="+", type=_probability, help="two-qubit error grid")
    p.add_argument("--p1-ratio", dest="p1_ratio", type=float, default=0.1)
    p.add_argument("--p-ro", dest="p_ro", type=_probability, default=0.01)
    p.add_argument("--seeds", type=_positive, default=5)
    p.add_argument("--shots", type=_positive, default=4000)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--max-noisy-qubits", dest="max_noisy_qubits", type=int, default=12)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--from-raw", dest="from_raw", help="re-render tables from a runs.json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("solve", help="classical Lights Out solutions")
    p.add_argument("instance", help="grid2x2, mobius6 or an instance JSON file")
    p.add_argument("--initial")
    p.add_argument("--method", choices=["gf2", "exhaustive"], default="gf2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="compare oracle phases with the classical answer")
    p.add_argument("instance", help="grid2x2, mobius6 or an instance JSON file")
    p.add_argument("--initial")
    p.add_argument("--all", action="store_true", help="check every initial configuration")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lightsout: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TooLarge, CircuitTooWide) as exc:
        print(f"lightsout: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (LightsOutError, ValueError) as exc:
        print(f"lightsout: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
