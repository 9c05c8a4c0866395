"""Exact statevector simulation and unitary-equivalence checking.

States are held as tensors of shape ``(2,) * n + batch``; qubit ``q``
lives on axis ``n - 1 - q`` so that the flattened index is
``sum(bit_q << q)``. Trailing batch axes let one pass evolve many
trajectories or basis inputs at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, compact
from .errors import TooLarge, TooManyQubits
from .unitaries import gate_matrix

MAX_QUBITS = 24
MAX_EQUIVALENCE_QUBITS = 14


def _axis(n: int, q: int) -> int:
    return n - 1 - q


def _index(n: int, fixed: dict[int, int], lead: int = 0) -> tuple:
    idx = [slice(None)] * (n + lead)
    for q, bit in fixed.items():
        idx[lead + _axis(n, q)] = bit
    return tuple(idx)


def apply_gate(state: np.ndarray, g: Gate, n: int, lead: int = 0) -> np.ndarray:
    """Apply ``g`` to a state tensor; may work in place and returns the result.

    The qubit axes start after ``lead`` leading batch axes; any further
    axes after them are batch axes too.
    """
    kind = g.kind
    qs = g.qubits
    if kind in (GateKind.BARRIER, GateKind.MEASURE):
        return state
    if kind is GateKind.X:
        return _swap_halves(state, n, qs[0], {}, lead)
    if kind is GateKind.CX:
        return _swap_halves(state, n, qs[1], {qs[0]: 1}, lead)
    if kind is GateKind.CCX:
        return _swap_halves(state, n, qs[2], {qs[0]: 1, qs[1]: 1}, lead)
    if kind is GateKind.Z:
        state[_index(n, {qs[0]: 1}, lead)] *= -1
        return state
    if kind is GateKind.CZ:
        state[_index(n, {qs[0]: 1, qs[1]: 1}, lead)] *= -1
        return state
    if kind is GateKind.CCZ:
        state[_index(n, {qs[0]: 1, qs[1]: 1, qs[2]: 1}, lead)] *= -1
        return state
    if kind is GateKind.RZ:
        half = 0.5 * g.params[0]
        state[_index(n, {qs[0]: 0}, lead)] *= np.exp(-1j * half)
        state[_index(n, {qs[0]: 1}, lead)] *= np.exp(1j * half)
        return state
    if kind is GateKind.SWAP:
        lo = _index(n, {qs[0]: 0, qs[1]: 1}, lead)
        hi = _index(n, {qs[0]: 1, qs[1]: 0}, lead)
        a = state[lo].copy()
        state[lo] = state[hi]
        state[hi] = a
        return state
    if len(qs) == 1:
        return _apply_1q(state, gate_matrix(g), n, qs[0], lead)
    return apply_matrix(state, gate_matrix(g), qs, n, lead)


def _swap_halves(state: np.ndarray, n: int, target: int, controls: dict[int, int],
                 lead: int = 0) -> np.ndarray:
    lo = _index(n, {**controls, target: 0}, lead)
    hi = _index(n, {**controls, target: 1}, lead)
    tmp = state[lo].copy()
    state[lo] = state[hi]
    state[hi] = tmp
    return state


def _apply_1q(state: np.ndarray, u: np.ndarray, n: int, q: int, lead: int = 0) -> np.ndarray:
    # view as (before, 2, after) and let matmul broadcast the 2x2 over it
    if not state.flags.c_contiguous:
        state = np.ascontiguousarray(state)
    axis = lead + _axis(n, q)
    before = int(np.prod(state.shape[:axis], dtype=np.int64))
    out = np.matmul(u.astype(state.dtype, copy=False), state.reshape(before, 2, -1))
    return out.reshape(state.shape)


def apply_matrix(state: np.ndarray, u: np.ndarray, qubits: Sequence[int], n: int,
                 lead: int = 0) -> np.ndarray:
    """Generic k-qubit matrix application via tensor contraction."""
    k = len(qubits)
    axes = [lead + _axis(n, q) for q in qubits]
    ut = u.astype(state.dtype, copy=False).reshape((2,) * (2 * k))
    out = np.tensordot(ut, state, axes=(list(range(k, 2 * k)), axes))
    return np.ascontiguousarray(np.moveaxis(out, list(range(k)), axes))


@dataclass(frozen=True)
class Statevector:
    amplitudes: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def marginal(self, qubits: Sequence[int]) -> np.ndarray:
        """Probabilities over ``qubits``; entry index has bit k = ``qubits[k]``."""
        return marginal_probabilities(self.amplitudes, self.num_qubits, qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def marginal_probabilities(amplitudes: np.ndarray, n: int, qubits: Sequence[int]) -> np.ndarray:
    """Marginal distribution of ``qubits`` for a flat state or a batch ``(2**n, B)``."""
    batch = amplitudes.shape[1:] if amplitudes.ndim > 1 else ()
    probs = (np.abs(amplitudes) ** 2).reshape((2,) * n + batch)
    keep = [_axis(n, q) for q in qubits]
    drop = tuple(ax for ax in range(n) if ax not in keep)
    probs = probs.sum(axis=drop) if drop else probs
    # remaining axes are in increasing axis order; reorder so that the
    # highest classical bit comes first (C-order flatten = little-endian)
    remaining = sorted(keep)
    order = [remaining.index(_axis(n, q)) for q in reversed(qubits)]
    nb = len(batch)
    probs = np.transpose(probs, order + list(range(len(keep), len(keep) + nb)))
    return probs.reshape((2 ** len(qubits),) + batch)


def run_gates(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    n = circuit.num_qubits
    for g in circuit.gates:
        state = apply_gate(state, g, n)
    return state


def zero_state(n: int, batch: tuple[int, ...] = ()) -> np.ndarray:
    state = np.zeros((2,) * n + batch, dtype=complex)
    state[(0,) * n] = 1.0
    return state


def simulate(circuit: Circuit, initial: np.ndarray | None = None) -> Statevector:
    """Evolve ``|0...0>`` (or ``initial``) through the circuit; measurements are ignored."""
    n = circuit.num_qubits
    if n > MAX_QUBITS:
        raise TooManyQubits(f"{n} qubits exceeds the {MAX_QUBITS}-qubit simulator limit")
    if initial is None:
        state = zero_state(n)
    else:
        state = np.array(initial, dtype=complex).reshape((2,) * n)
    state = run_gates(circuit, state)
    return Statevector(state.reshape(-1))


def basis_outputs(circuit: Circuit, columns: Sequence[int]) -> np.ndarray:
    """Output states for computational-basis inputs; returns shape ``(2**n, len(columns))``."""
    n = circuit.num_qubits
    cols = np.asarray(columns, dtype=np.int64)
    state = np.zeros((2 ** n, len(cols)), dtype=complex)
    state[cols, np.arange(len(cols))] = 1.0
    state = run_gates(circuit, state.reshape((2,) * n + (len(cols),)))
    return state.reshape(2 ** n, len(cols))


def unitary(circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    if n > MAX_EQUIVALENCE_QUBITS:
        raise TooLarge(f"unitary of {n} qubits is too large")
    return basis_outputs(circuit.without_measurements(), range(2 ** n))


@dataclass(frozen=True)
class Equivalence:
    equal: bool
    deviation: float

    def __bool__(self):
        return self.equal


def _spread(index: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Place bit i of each entry of ``index`` at bit ``positions[i]``."""
    out = np.zeros_like(index)
    for i, p in enumerate(positions):
        out |= ((index >> i) & 1) << p
    return out


def equivalent(
    c1: Circuit,
    c2: Circuit,
    tolerance: float = 1e-9,
    initial_layout: Sequence[int] | None = None,
    final_layout: Sequence[int] | None = None,
    chunk: int = 256,
) -> Equivalence:
    """Compare ``c1`` (logical) with ``c2`` on every computational-basis input.

    ``c2`` may be a routed circuit on more qubits: logical qubit ``i`` starts
    on qubit ``initial_layout[i]`` of ``c2`` and ends on ``final_layout[i]``;
    every other qubit of ``c2`` must start and end in ``|0>``. Agreement is
    up to one global phase shared by all inputs. The deviation is the
    largest L1 distance between corresponding output columns.
    """
    c1 = c1.without_measurements()
    c2 = c2.without_measurements()
    n = c1.num_qubits
    init = list(range(n)) if initial_layout is None else list(initial_layout)
    final = list(init) if final_layout is None else list(final_layout)
    if len(init) != n or len(final) != n:
        raise ValueError("layouts must map every logical qubit")
    wide, keep = compact(c2)
    keep_set = set(keep) | set(init) | set(final)
    if len(keep_set) != len(keep):
        keep = sorted(keep_set)
        index = {q: i for i, q in enumerate(keep)}
        wide = Circuit(len(keep), tuple(
            g.remap(index) for g in c2.gates if g.kind is not GateKind.BARRIER))
    else:
        index = {q: i for i, q in enumerate(keep)}
    m = len(keep)
    if max(n, m) > MAX_EQUIVALENCE_QUBITS:
        raise TooLarge(f"equivalence check over {max(n, m)} qubits exceeds "
                       f"{MAX_EQUIVALENCE_QUBITS}")
    init_pos = [index[p] for p in init]
    final_pos = [index[p] for p in final]
    out_map = _spread(np.arange(2 ** n), final_pos)

    phase = None
    worst = 0.0
    for start in range(0, 2 ** n, chunk):
        cols = np.arange(start, min(start + chunk, 2 ** n))
        ref = basis_outputs(c1, cols)
        got = basis_outputs(wide, _spread(cols, init_pos))
        expected = np.zeros_like(got)
        expected[out_map] = ref
        if phase is None:
            overlap = np.vdot(got, expected)
            phase = overlap / abs(overlap) if abs(overlap) > 1e-12 else 1.0
        diff = np.abs(expected - phase * got).sum(axis=0)
        worst = max(worst, float(diff.max()))
    return Equivalence(worst <= tolerance, worst)
