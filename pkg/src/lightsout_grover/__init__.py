"""Grover search circuits for Lights Out puzzles, with simulation and transpilation."""
from .circuit import Circuit, CircuitStats, Gate, GateKind, gate, layers, stats
from .errors import LightsOutError
from .lightsout import (
    LightsOutInstance,
    ToggleRule,
    build_grid,
    build_mobius,
    single_click_solutions,
    solve_exhaustive,
    solve_gf2,
)
from .noise import NoiseModel, sample_noisy
from .sampling import Distribution, ideal_probabilities, sample, success_frequency
from .statevector import equivalent, simulate
from .synthesis import (
    OracleSpec,
    diffusion,
    grover_circuit,
    mcx,
    oracle_grid2x2,
    oracle_mobius6,
    phase_oracle,
    sanity_oracle,
    sat_oracle,
)
from .transpiler import Target, TranspileReport, builtin_targets, transpile

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitStats", "Distribution", "Gate", "GateKind", "LightsOutError",
    "LightsOutInstance", "NoiseModel", "OracleSpec", "Target", "ToggleRule",
    "TranspileReport", "build_grid", "build_mobius", "builtin_targets", "diffusion",
    "equivalent", "gate", "grover_circuit", "ideal_probabilities", "layers", "mcx",
    "oracle_grid2x2", "oracle_mobius6", "phase_oracle", "sample", "sample_noisy",
    "sanity_oracle", "sat_oracle", "simulate", "single_click_solutions", "solve_exhaustive",
    "solve_gf2", "stats", "success_frequency", "transpile",
]
