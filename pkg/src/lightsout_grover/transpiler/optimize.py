"""Peephole optimization of native circuits at levels 0-3.

Level 1 cancels adjacent inverse pairs and merges neighbouring rotations.
Level 2 additionally fuses every one-qubit run into a minimal native
sequence and lets CZ and RZ slide past other diagonal gates. Level 3
repeats level 2 until nothing improves and also re-synthesizes two-qubit
blocks that admit fewer CZs.
"""
from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable

import numpy as np

from ..circuit import Circuit, Gate, GateKind
from ..unitaries import gate_matrix
from .euler import basis_family, is_zero_angle, synthesize_1q, wrap_angle
from .targets import PRX_BASIS, ZSX_BASIS, Target

MAX_LEVEL = 3
_FIXPOINT_ROUNDS = 20
_OPAQUE = frozenset({GateKind.BARRIER, GateKind.MEASURE})
_Z_LIKE = frozenset({GateKind.Z, GateKind.RZ})


def _rz_angle(g: Gate) -> float:
    return g.params[0] if g.kind is GateKind.RZ else math.pi


def _merge_1q(first: Gate, second: Gate) -> list[Gate] | None:
    """Replacement for ``second·first`` on one qubit, or None if no rule applies."""
    q = first.qubits
    a, b = first.kind, second.kind
    if a is b and a in (GateKind.X, GateKind.Z, GateKind.H):
        return []
    if {a, b} == {GateKind.SX, GateKind.SXDG}:
        return []
    if a is GateKind.SX and b is GateKind.SX:
        return [Gate(GateKind.X, q)]
    if a in _Z_LIKE and b in _Z_LIKE:
        theta = _rz_angle(first) + _rz_angle(second)
        return [] if is_zero_angle(theta) else [Gate(GateKind.RZ, q, (wrap_angle(theta),))]
    if a is GateKind.PRX and b is GateKind.PRX:
        (t1, p1), (t2, p2) = first.params, second.params
        if is_zero_angle(p1 - p2):
            theta = t1 + t2
        elif is_zero_angle(p1 - p2 - math.pi):
            theta = t1 - t2
        else:
            return None
        if is_zero_angle(theta):
            return []
        return [Gate(GateKind.PRX, q, (math.remainder(theta, 4 * math.pi), p1))]
    return None


class _Tape:
    """Gate list with holes and a per-qubit stack of live positions."""

    def __init__(self):
        self.slots: list[Gate | None] = []
        self.stacks: dict[int, list[int]] = defaultdict(list)

    def push(self, g: Gate) -> None:
        self.slots.append(g)
        for q in g.qubits:
            self.stacks[q].append(len(self.slots) - 1)

    def drop(self, idx: int) -> None:
        g = self.slots[idx]
        self.slots[idx] = None
        for q in g.qubits:
            self.stacks[q].remove(idx)

    def behind(self, q: int, skip_diagonal: bool, stop_pair: tuple[int, int] | None = None):
        """Nearest live gate on ``q``, optionally looking past diagonal gates."""
        for idx in reversed(self.stacks[q]):
            g = self.slots[idx]
            if not skip_diagonal:
                return idx
            if stop_pair is not None and g.kind is GateKind.CZ and set(g.qubits) == set(stop_pair):
                return idx
            if stop_pair is None and g.kind in _Z_LIKE:
                return idx
            if not g.kind.is_diagonal:
                return idx
        return None

    def gates(self) -> list[Gate]:
        return [g for g in self.slots if g is not None]


def cancel_pairs(gates: Iterable[Gate], commute: bool = False) -> list[Gate]:
    """One sweep of inverse-pair cancellation and rotation merging.

    With ``commute`` a CZ may cancel a matching CZ, and a Z rotation may
    merge with an earlier one, across intervening diagonal gates.
    """
    tape = _Tape()
    for g in gates:
        if g.kind in _OPAQUE:
            tape.push(g)
            continue
        if g.arity == 1:
            q = g.qubits[0]
            idx = tape.behind(q, commute and g.kind in _Z_LIKE)
            prev = tape.slots[idx] if idx is not None else None
            merged = None
            if prev is not None and prev.arity == 1 and prev.kind not in _OPAQUE:
                merged = _merge_1q(prev, g)
            if merged is None:
                tape.push(g)
            elif merged:
                tape.slots[idx] = merged[0]
            else:
                tape.drop(idx)
            continue
        if g.kind is GateKind.CZ:
            a, b = g.qubits
            ia = tape.behind(a, commute, (a, b))
            ib = tape.behind(b, commute, (a, b))
            if ia is not None and ia == ib and tape.slots[ia].kind is GateKind.CZ:
                tape.drop(ia)
                continue
        tape.push(g)
    return tape.gates()


def _product(gates: list[Gate]) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for g in gates:
        u = gate_matrix(g) @ u
    return u


def resynthesize_runs(gates: Iterable[Gate], native_1q: frozenset[GateKind]) -> list[Gate]:
    """Replace each maximal one-qubit run by a shorter native sequence when one exists."""
    slots: list[Gate | list[Gate] | None] = []
    runs: dict[int, list[int]] = defaultdict(list)

    def flush(q: int) -> None:
        idxs = runs.pop(q, [])
        if not idxs:
            return
        run = [slots[i] for i in idxs]
        u = _product(run)
        seq = synthesize_1q(u, q, native_1q)
        if len(seq) < len(run):
            for i in idxs:
                slots[i] = None
            slots[idxs[-1]] = seq

    for g in gates:
        if g.arity == 1 and g.kind not in _OPAQUE:
            slots.append(g)
            runs[g.qubits[0]].append(len(slots) - 1)
        else:
            for q in g.qubits:
                flush(q)
            slots.append(g)
    for q in list(runs):
        flush(q)
    out: list[Gate] = []
    for s in slots:
        if isinstance(s, list):
            out += s
        elif s is not None:
            out.append(s)
    return out


def _infer_basis(circuit: Circuit) -> frozenset[GateKind]:
    kinds = {g.kind for g in circuit.gates}
    return PRX_BASIS if GateKind.PRX in kinds else ZSX_BASIS


def _cost(gates: list[Gate]) -> tuple[int, int]:
    counted = [g for g in gates if g.kind not in _OPAQUE]
    return sum(1 for g in counted if g.arity == 2), len(counted)


def _settle(gates: list[Gate], commute: bool) -> list[Gate]:
    while True:
        nxt = cancel_pairs(gates, commute)
        if len(nxt) == len(gates):
            return nxt
        gates = nxt


def optimize(circuit: Circuit, level: int, target: Target | None = None,
             seed: int = 0) -> Circuit:
    """Rewrite a native circuit at optimization ``level`` (0-3).

    The one-qubit basis comes from ``target`` or, failing that, from the
    gates present. Output is equivalent up to global phase.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"optimization level must be 0..{MAX_LEVEL}, got {level}")
    if level == 0:
        return circuit
    native = target.native_1q if target is not None else _infer_basis(circuit)
    basis_family(native)
    gates = list(circuit.gates)
    if level == 1:
        gates = _settle(gates, commute=False)
    elif level == 2:
        gates = _settle(gates, commute=True)
        gates = _settle(resynthesize_runs(gates, native), commute=True)
    else:
        from .twoq import resynthesize_blocks

        best = gates = _settle(gates, commute=True)
        for _ in range(_FIXPOINT_ROUNDS):
            gates = _settle(resynthesize_runs(gates, native), commute=True)
            gates = resynthesize_blocks(gates, native, seed)
            gates = _settle(resynthesize_runs(gates, native), commute=True)
            if _cost(gates) >= _cost(best):
                break
            best = gates
        gates = best
    return Circuit(circuit.num_qubits, tuple(gates), circuit.measured_qubits)
