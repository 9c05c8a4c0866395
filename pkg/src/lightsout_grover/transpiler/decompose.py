"""Translation of IR gates into a CZ-native target's gate set."""
from __future__ import annotations

import math
from typing import Iterable

from ..circuit import Circuit, Gate, GateKind
from ..errors import UnsupportedGate
from ..unitaries import gate_matrix
from .euler import synthesize_1q
from .targets import Target

_PASSTHROUGH = frozenset({GateKind.MEASURE, GateKind.BARRIER})


def _t(q: int) -> Gate:
    return Gate(GateKind.RZ, (q,), (math.pi / 4,))


def _tdg(q: int) -> Gate:
    return Gate(GateKind.RZ, (q,), (-math.pi / 4,))


def _h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def _cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


def cx_to_cz(control: int, target: int) -> list[Gate]:
    return [_h(target), _cz(control, target), _h(target)]


def swap_to_cz(a: int, b: int) -> list[Gate]:
    return cx_to_cz(a, b) + cx_to_cz(b, a) + cx_to_cz(a, b)


def _ccz_core(a: int, b: int, c: int) -> list[Gate]:
    # six-CX Toffoli network without the target basis change
    seq = [("cx", b, c), _tdg(c), ("cx", a, c), _t(c), ("cx", b, c), _tdg(c),
           ("cx", a, c), _t(b), _t(c), ("cx", a, b), _t(a), _tdg(b), ("cx", a, b)]
    out: list[Gate] = []
    for item in seq:
        out += cx_to_cz(item[1], item[2]) if isinstance(item, tuple) else [item]
    return out


def _rccx(a: int, b: int, c: int) -> list[Gate]:
    return ([_h(c), _t(c)] + cx_to_cz(b, c) + [_tdg(c)] + cx_to_cz(a, c)
            + [_t(c)] + cx_to_cz(b, c) + [_tdg(c), _h(c)])


def expand(g: Gate) -> list[Gate]:
    """Rewrite multi-qubit gates into CZ plus arbitrary one-qubit gates.

    SWAP is left alone so the router can account for it.
    """
    k, q = g.kind, g.qubits
    if k is GateKind.CX:
        return cx_to_cz(*q)
    if k is GateKind.CCZ:
        return _ccz_core(*q)
    if k is GateKind.CCX:
        return [_h(q[2])] + _ccz_core(*q) + [_h(q[2])]
    if k is GateKind.RCCX:
        return _rccx(*q)
    if k is GateKind.RCCX_DG:
        return [x.inverse() for x in reversed(_rccx(*q))]
    return [g]


def lower_1q(gates: Iterable[Gate], native_1q: frozenset[GateKind]) -> list[Gate]:
    """Replace each non-native one-qubit gate by its own native sequence."""
    out: list[Gate] = []
    for g in gates:
        if g.arity == 1 and g.kind not in native_1q and g.kind not in _PASSTHROUGH:
            out += synthesize_1q(gate_matrix(g), g.qubits[0], native_1q)
        else:
            out.append(g)
    return out


def decompose_native(circuit: Circuit, target: Target, keep_swaps: bool = True) -> Circuit:
    """Only ``target``'s native kinds (plus SWAP, barriers and measurements) remain."""
    wide: list[Gate] = []
    for g in circuit.gates:
        if g.kind is GateKind.SWAP and not keep_swaps:
            wide += swap_to_cz(*g.qubits)
        else:
            wide += expand(g)
    gates = lower_1q(wide, target.native_1q)
    allowed = target.native_1q | {target.native_2q, GateKind.SWAP} | _PASSTHROUGH
    for g in gates:
        if g.kind not in allowed:
            raise UnsupportedGate(f"{g.kind.value} has no translation for {target.name}")
    return Circuit(circuit.num_qubits, tuple(gates), circuit.measured_qubits)
