"""Compilation of IR circuits onto CZ-native hardware targets."""
from __future__ import annotations

from ..circuit import Circuit
from .decompose import decompose_native
from .optimize import MAX_LEVEL, optimize
from .report import TranspileReport
from .routing import DEFAULT_LOOKAHEAD, LayoutHeuristic, layout_and_route
from .targets import Target, builtin_targets, get_target

# (routing trials, layout refinement rounds) per optimization level
_ROUTING_EFFORT = {0: (1, 0), 1: (1, 1), 2: (4, 2), 3: (8, 2)}


def transpile(circuit: Circuit, target: Target, opt_level: int = 1,
              seed: int = 0, lookahead: int = DEFAULT_LOOKAHEAD) -> tuple[Circuit, TranspileReport]:
    """Decompose, place, route and optimize ``circuit`` for ``target``.

    Level 0 uses the identity layout and routes each blocked gate along a
    shortest path. Higher levels use the greedy distance layout, lookahead
    routing with seeded trials, and the matching optimization passes.
    The same inputs and seed always produce the same circuit.
    """
    if not 0 <= opt_level <= MAX_LEVEL:
        raise ValueError(f"optimization level must be 0..{MAX_LEVEL}, got {opt_level}")
    native = decompose_native(circuit, target)
    if opt_level == 0:
        routed, report = layout_and_route(native, target, LayoutHeuristic.TRIVIAL,
                                          lookahead=0, seed=seed)
    else:
        trials, rounds = _ROUTING_EFFORT[opt_level]
        routed, report = layout_and_route(native, target, LayoutHeuristic.GREEDY_DISTANCE,
                                          lookahead=lookahead, seed=seed, trials=trials,
                                          refine_rounds=rounds)
    out = optimize(routed, opt_level, target, seed)
    return out, report.with_circuit(out, opt_level)


__all__ = [
    "DEFAULT_LOOKAHEAD", "LayoutHeuristic", "MAX_LEVEL", "Target", "TranspileReport",
    "builtin_targets", "decompose_native", "get_target", "layout_and_route", "optimize",
    "transpile",
]
