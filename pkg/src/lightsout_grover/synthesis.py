"""Builders for the Lights Out Grover circuits and the diagnostic baselines.

Index registers are little-endian: index value ``v`` sets qubit
``index_qubits[k]`` to bit ``k`` of ``v``, and its bitstring prints with
the highest bit first (``format(v, "0kb")``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, gate, inverse
from .errors import BadConfigLength, InsufficientAncillas, InvalidCounts
from .lightsout import LightsOutInstance, build_grid, build_mobius, single_click_solutions
from .statevector import apply_gate, simulate


class MCXStyle(str, Enum):
    TOFFOLI_CHAIN = "toffoli_chain"
    RCCX_CHAIN = "rccx_chain"


@dataclass(frozen=True)
class GroverLayout:
    index_qubits: tuple[int, ...]
    lamp_qubits: tuple[int, ...] = ()
    flag_qubit: int | None = None
    ancilla_qubits: tuple[int, ...] = ()
    validity_qubit: int | None = None
    extra_qubits: tuple[int, ...] = ()

    def __post_init__(self):
        seen = self.all_qubits()
        if len(seen) != len(set(seen)):
            raise ValueError("layout registers overlap")

    def all_qubits(self) -> list[int]:
        out = list(self.index_qubits) + list(self.lamp_qubits) + list(self.ancilla_qubits)
        out += list(self.extra_qubits)
        out += [q for q in (self.flag_qubit, self.validity_qubit) if q is not None]
        return out

    @property
    def num_qubits(self) -> int:
        return max(self.all_qubits()) + 1


@dataclass(frozen=True)
class OracleSpec:
    """A phase oracle together with the register state it expects.

    ``prep`` prepares the work registers (initial lamp configuration, a
    ``|->`` kickback qubit, ...) before the first oracle call.
    """
    name: str
    search_space_size: int
    marked: frozenset[str]
    oracle: Circuit
    layout: GroverLayout
    prep: tuple[Gate, ...] = ()
    diffusion_ancillas: tuple[int, ...] = field(default=())

    def __post_init__(self):
        width = len(self.layout.index_qubits)
        valid = {format(v, f"0{width}b") for v in range(self.search_space_size)}
        if not set(self.marked) <= valid:
            raise InvalidCounts(f"marked set {sorted(self.marked)} outside the search space")

    @property
    def num_qubits(self) -> int:
        return self.oracle.num_qubits


def _circ(n: int, gates: Iterable[Gate]) -> Circuit:
    return Circuit(n, tuple(gates))


# multi-controlled X ----------------------------------------------------------

def _and_kind(style: MCXStyle) -> GateKind:
    return GateKind.RCCX if style is MCXStyle.RCCX_CHAIN else GateKind.CCX


def _ladder(controls: Sequence[int], ancillas: Sequence[int], kind: GateKind) -> list[Gate]:
    # a1 = c1 & c2, a_i = a_{i-1} & c_{i+1}
    k = len(controls)
    out = [gate(kind, controls[0], controls[1], ancillas[0])]
    for i in range(1, k - 2):
        out.append(gate(kind, ancillas[i - 1], controls[i + 1], ancillas[i]))
    return out


def _check_mcx(controls, target, ancillas) -> None:
    k = len(controls)
    if len(ancillas) < max(0, k - 2):
        raise InsufficientAncillas(f"{k} controls need {k - 2} ancillas, got {len(ancillas)}")
    regs = list(controls) + [target] + list(ancillas[:max(0, k - 2)])
    if len(set(regs)) != len(regs):
        raise ValueError("controls, target and ancillas must be distinct")


def mcx_compute(controls: Sequence[int], target: int, ancillas: Sequence[int],
                style: MCXStyle = MCXStyle.TOFFOLI_CHAIN,
                num_qubits: int | None = None) -> Circuit:
    """Compute half of an ancilla ladder: ``target ^= AND(controls)``.

    Ancillas are left holding partial conjunctions, and with RCCX_CHAIN the
    target flip carries relative phases, so the fragment is only correct
    when its exact inverse follows later in the circuit. A k-control ladder
    uses k-1 three-qubit gates.
    """
    _check_mcx(controls, target, ancillas)
    n = num_qubits or max([*controls, target, *ancillas]) + 1
    kind = _and_kind(style)
    k = len(controls)
    if k == 1:
        return _circ(n, [gate("cx", controls[0], target)])
    if k == 2:
        return _circ(n, [gate(kind, controls[0], controls[1], target)])
    gates = _ladder(controls, ancillas, kind)
    gates.append(gate(kind, ancillas[k - 3], controls[k - 1], target))
    return _circ(n, gates)


def mcx(controls: Sequence[int], target: int, ancillas: Sequence[int],
        style: MCXStyle = MCXStyle.TOFFOLI_CHAIN, num_qubits: int | None = None) -> Circuit:
    """Exact multi-controlled X with clean ancillas (restored to ``|0>``).

    The target is flipped by a true Toffoli so that no relative phase
    leaks; an RCCX ladder is undone with RCCX_DG.
    """
    _check_mcx(controls, target, ancillas)
    n = num_qubits or max([*controls, target, *ancillas]) + 1
    k = len(controls)
    if k <= 2:
        return mcx_compute(controls, target, ancillas, MCXStyle.TOFFOLI_CHAIN, n)
    ladder = _circ(n, _ladder(controls, ancillas, _and_kind(style)))
    flip = gate("ccx", ancillas[k - 3], controls[k - 1], target)
    return ladder.append(flip).compose(inverse(ladder))


def multi_controlled_z(qubits: Sequence[int], ancillas: Sequence[int] = (),
                       num_qubits: int | None = None) -> Circuit:
    """Phase -1 on ``|1...1>`` of ``qubits``.

    Three qubits use an H-conjugated Toffoli rather than CCZ so that the
    circuits keep a Toffoli-only three-qubit vocabulary.
    """
    n = num_qubits or max([*qubits, *ancillas]) + 1
    k = len(qubits)
    if k == 1:
        return _circ(n, [gate("z", qubits[0])])
    if k == 2:
        return _circ(n, [gate("cz", qubits[0], qubits[1])])
    *controls, last = qubits
    h = gate("h", last)
    body = mcx(controls, last, ancillas, MCXStyle.TOFFOLI_CHAIN, n)
    return _circ(n, [h]).compose(body).append(h)


def diffusion(index_qubits: Sequence[int], ancillas: Sequence[int] = (),
              num_qubits: int | None = None) -> Circuit:
    """Reflection about the uniform superposition, up to a global phase of -1."""
    n = num_qubits or max([*index_qubits, *ancillas]) + 1
    hs = [gate("h", q) for q in index_qubits]
    xs = [gate("x", q) for q in index_qubits]
    return _circ(n, hs + xs).compose(
        multi_controlled_z(index_qubits, ancillas, n)).extend(xs + hs)


# Grover assembly -----------------------------------------------------------

def grover_iterations(search_space_size: int, num_marked: int) -> int:
    if not 1 <= num_marked < search_space_size:
        raise InvalidCounts(f"need 1 <= M < N, got N={search_space_size}, M={num_marked}")
    return max(1, math.floor(math.pi / 4 * math.sqrt(search_space_size / num_marked)))


def grover_circuit(spec: OracleSpec, iterations: int | None = None) -> Circuit:
    """Hadamards on the index register, work-register preparation, then
    ``iterations`` rounds of oracle and diffusion; only the index register
    is measured."""
    if iterations is None:
        m = len(spec.marked)
        iterations = grover_iterations(spec.search_space_size, m) if 0 < m < spec.search_space_size else 1
    if iterations < 0:
        raise InvalidCounts("iterations must be non-negative")
    n = spec.num_qubits
    idx = spec.layout.index_qubits
    circ = _circ(n, [gate("h", q) for q in idx] + list(spec.prep)).barrier()
    step = spec.oracle.compose(diffusion(idx, spec.diffusion_ancillas, n))
    for _ in range(iterations):
        circ = circ.compose(step)
    return circ.measure(idx)


def _anti_controlled_ccx(c0: int, c1: int, target: int, value: int) -> list[Gate]:
    """CCX firing when (c0, c1) equals the bits of ``value`` (c0 is bit 0)."""
    flips = [gate("x", q) for q, bit in ((c0, value & 1), (c1, value >> 1 & 1)) if not bit]
    return flips + [gate("ccx", c0, c1, target)] + flips


def _config(initial: Sequence[int], n: int) -> tuple[int, ...]:
    bits = tuple(int(b) for b in initial)
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise BadConfigLength(f"expected {n} lamp bits, got {initial!r}")
    return bits


def _marked_indices(instance: LightsOutInstance, width: int) -> frozenset[str]:
    return frozenset(format(v, f"0{width}b") for v in single_click_solutions(instance))


GRID_LAYOUT = GroverLayout(index_qubits=(0, 1), lamp_qubits=(2, 3, 4, 5),
                           flag_qubit=6, ancilla_qubits=(7, 8))


def oracle_grid2x2(initial_config: Sequence[int]) -> OracleSpec:
    """Phase oracle for one click on the reflexive 2x2 grid (9 qubits).

    A click on a 2x2 grid toggles every lamp except the diagonally opposite
    one, so all four lamps are toggled unconditionally and the opposite
    lamp is toggled back under control of the index register. The all-off
    test then X-conjugates the lamps into a 4-control Toffoli ladder.
    """
    init = _config(initial_config, 4)
    lay = GRID_LAYOUT
    q0, q1 = lay.index_qubits
    lamps = lay.lamp_qubits
    compute: list[Gate] = [gate("x", t) for t in lamps]
    for v in range(4):
        compute += _anti_controlled_ccx(q0, q1, lamps[3 - v], v)
    compute += [gate("x", t) for t in lamps]
    check = mcx_compute(lamps[::-1], lay.flag_qubit, lay.ancilla_qubits,
                        MCXStyle.TOFFOLI_CHAIN, 9)
    half = _circ(9, compute).compose(check)
    oracle = half.append(gate("z", lay.flag_qubit)).compose(inverse(half))
    instance = build_grid(2, 2, init)
    return OracleSpec(
        name="grid2x2",
        search_space_size=4,
        marked=_marked_indices(instance, 2),
        oracle=oracle,
        layout=lay,
        prep=tuple(gate("x", lamps[i]) for i, b in enumerate(init) if b),
    )


MOBIUS_LAYOUT = GroverLayout(index_qubits=(0, 1, 2), lamp_qubits=(3, 4, 5, 6, 7, 8),
                             flag_qubit=15, ancilla_qubits=(10, 11, 12, 13, 14),
                             validity_qubit=9)


def oracle_mobius6(initial_config: Sequence[int]) -> OracleSpec:
    """Phase oracle for one click on the non-reflexive 6-lamp Möbius ladder (16 qubits).

    Every lamp toggles exactly the three lamps of opposite parity, so the
    lowest index bit alone selects what to toggle. Indices 110 and 111 name
    no lamp and are excluded through the validity qubit.
    """
    init = _config(initial_config, 6)
    lay = MOBIUS_LAYOUT
    q0, q1, q2 = lay.index_qubits
    lamps = lay.lamp_qubits
    valid = lay.validity_qubit
    even, odd = lamps[0::2], lamps[1::2]
    compute: list[Gate] = [gate("x", valid), gate("ccx", q1, q2, valid)]
    # odd click (q0=1) toggles the even lamps
    compute += [gate("cx", q0, t) for t in even]
    # even click (q0=0) toggles the odd lamps: anti-controlled on q0
    compute += [gate("x", q0)] + [gate("cx", q0, t) for t in odd] + [gate("x", q0)]
    # all-off test: every lamp must read 0
    compute += [gate("x", t) for t in lamps]
    controls = list(lamps) + [valid]
    check = mcx_compute(controls, lay.flag_qubit, lay.ancilla_qubits, MCXStyle.RCCX_CHAIN, 16)
    half = _circ(16, compute).compose(check)
    oracle = half.append(gate("z", lay.flag_qubit)).compose(inverse(half))
    instance = build_mobius(6, init)
    return OracleSpec(
        name="mobius6",
        search_space_size=8,
        marked=_marked_indices(instance, 3),
        oracle=oracle,
        layout=lay,
        prep=tuple(gate("x", lamps[i]) for i, b in enumerate(init) if b),
    )


# the instances whose answers are stated for the benchmark circuits
GRID_INITIAL = (0, 1, 1, 1)
MOBIUS_INITIAL = (1, 0, 1, 0, 1, 0)


def sat_oracle() -> OracleSpec:
    """Oracle for (x0) AND (NOT x1): clauses into q2, q3, kickback on q4 in ``|->``."""
    n = 5
    compute = [gate("cx", 0, 2), gate("cx", 1, 3), gate("x", 3)]
    half = _circ(n, compute)
    oracle = half.append(gate("ccx", 2, 3, 4)).compose(inverse(half))
    return OracleSpec(
        name="sat",
        search_space_size=4,
        marked=frozenset({"01"}),
        oracle=oracle,
        layout=GroverLayout(index_qubits=(0, 1), flag_qubit=4, extra_qubits=(2, 3)),
        prep=(gate("x", 4), gate("h", 4)),
    )


def baseline_sat() -> Circuit:
    return grover_circuit(sat_oracle(), 1)


def sanity_oracle(marked: str = "10") -> OracleSpec:
    if marked not in {"00", "01", "10", "11"}:
        raise InvalidCounts(f"{marked!r} is not a two-bit string")
    value = int(marked, 2)
    flips = [gate("x", q) for q in (0, 1) if not value >> q & 1]
    oracle = _circ(2, flips + [gate("cz", 0, 1)] + flips)
    return OracleSpec("sanity2q", 4, frozenset({marked}), oracle,
                      GroverLayout(index_qubits=(0, 1)))


def baseline_sanity2q(marked: str = "10") -> Circuit:
    return grover_circuit(sanity_oracle(marked), 1)


def phase_oracle(num_index: int, marked: Iterable[int]) -> OracleSpec:
    """Generic oracle flipping the phase of each listed index value.

    Registers wider than three qubits borrow ``num_index - 2`` ancillas
    (shared with the diffusion operator).
    """
    marked = sorted(set(marked))
    k = num_index
    if not marked or any(not 0 <= v < 2 ** k for v in marked):
        raise InvalidCounts("marked values must lie in the search space")
    index = tuple(range(k))
    ancillas = tuple(range(k, k + max(0, k - 3)))
    n = k + len(ancillas)
    circ = _circ(n, [])
    for v in marked:
        flips = [gate("x", q) for q in index if not v >> q & 1]
        circ = circ.extend(flips).compose(
            multi_controlled_z(index, ancillas, n)).extend(flips)
    return OracleSpec(
        name=f"phase{k}",
        search_space_size=2 ** k,
        marked=frozenset(format(v, f"0{k}b") for v in marked),
        oracle=circ,
        layout=GroverLayout(index_qubits=index, ancilla_qubits=ancillas),
        diffusion_ancillas=ancillas,
    )


# oracle analysis ------------------------------------------------------------

@dataclass(frozen=True)
class PhasePattern:
    """Oracle phase per index value and the worst work-register residue."""
    phases: dict[str, complex]
    residual: float

    def marked(self, atol: float = 1e-9) -> set[str]:
        return {k for k, p in self.phases.items() if abs(p + 1) < atol}

    def is_exact(self, atol: float = 1e-9) -> bool:
        return self.residual < atol and all(
            abs(p - 1) < atol or abs(p + 1) < atol for p in self.phases.values())


def oracle_phase_pattern(spec: OracleSpec) -> PhasePattern:
    """Run the oracle on every index basis state with the work registers prepared.

    For an exact phase oracle each output equals ``±1`` times its input;
    ``residual`` is the largest norm of what is left after removing that
    component (nonzero when work registers are not restored).
    """
    n = spec.num_qubits
    idx = spec.layout.index_qubits
    width = len(idx)
    base = simulate(_circ(n, spec.prep)).amplitudes
    size = 2 ** width
    offsets = np.zeros(size, dtype=np.int64)
    for v in range(size):
        for k, q in enumerate(idx):
            if v >> k & 1:
                offsets[v] |= 1 << q
    everything = np.arange(2 ** n)
    inputs = np.stack([base[everything ^ off] for off in offsets], axis=1)
    state = inputs.reshape((2,) * n + (size,)).copy()
    for g in spec.oracle.gates:
        state = apply_gate(state, g, n)
    outputs = state.reshape(2 ** n, size)
    phases: dict[str, complex] = {}
    residual = 0.0
    for v in range(size):
        overlap = np.vdot(inputs[:, v], outputs[:, v])
        phases[format(v, f"0{width}b")] = complex(overlap)
        residual = max(residual, float(np.linalg.norm(outputs[:, v] - overlap * inputs[:, v])))
    return PhasePattern(phases, residual)
