"""Gate-level circuit IR with exact metrics and a JSON interchange format.

Circuits are immutable: every editing operation returns a new value.
Classical bit ``k`` (the ``k``-th entry of ``measured_qubits``) prints at
string position ``len - 1 - k``, so the highest bit is the leftmost
character and q0=1, q1=0 reads "01".
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    ArityMismatch,
    CircuitError,
    ContainsMeasurement,
    DuplicateQubit,
    IndexOutOfRange,
    MidCircuitMeasurement,
    ParseError,
)


class GateKind(str, Enum):
    H = "h"
    X = "x"
    Z = "z"
    SX = "sx"
    SXDG = "sxdg"
    RZ = "rz"
    PRX = "prx"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    CCX = "ccx"
    RCCX = "rccx"
    RCCX_DG = "rccx_dg"
    CCZ = "ccz"
    MEASURE = "measure"
    BARRIER = "barrier"

    @property
    def arity(self) -> int | None:
        """Number of qubits, or None for the variable-width barrier."""
        return _ARITY[self]

    @property
    def num_params(self) -> int:
        return _NUM_PARAMS.get(self, 0)

    @property
    def is_diagonal(self) -> bool:
        return self in _DIAGONAL


_ARITY = {
    GateKind.H: 1, GateKind.X: 1, GateKind.Z: 1, GateKind.SX: 1, GateKind.SXDG: 1,
    GateKind.RZ: 1, GateKind.PRX: 1, GateKind.MEASURE: 1,
    GateKind.CX: 2, GateKind.CZ: 2, GateKind.SWAP: 2,
    GateKind.CCX: 3, GateKind.RCCX: 3, GateKind.RCCX_DG: 3, GateKind.CCZ: 3,
    GateKind.BARRIER: None,
}
_NUM_PARAMS = {GateKind.RZ: 1, GateKind.PRX: 2}
_DIAGONAL = frozenset({GateKind.Z, GateKind.RZ, GateKind.CZ, GateKind.CCZ})

_SELF_INVERSE = frozenset({
    GateKind.H, GateKind.X, GateKind.Z, GateKind.CX, GateKind.CZ,
    GateKind.SWAP, GateKind.CCX, GateKind.CCZ, GateKind.BARRIER,
})
_INVERSE_KIND = {
    GateKind.SX: GateKind.SXDG, GateKind.SXDG: GateKind.SX,
    GateKind.RCCX: GateKind.RCCX_DG, GateKind.RCCX_DG: GateKind.RCCX,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        kind = GateKind(self.kind)
        qubits = tuple(int(q) for q in self.qubits)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", params)
        if kind.arity is None:
            if not qubits:
                raise ArityMismatch("barrier needs at least one qubit")
        elif len(qubits) != kind.arity:
            raise ArityMismatch(f"{kind.value} acts on {kind.arity} qubit(s), got {len(qubits)}")
        if len(set(qubits)) != len(qubits):
            raise DuplicateQubit(f"{kind.value} repeats a qubit: {qubits}")
        if any(q < 0 for q in qubits):
            raise IndexOutOfRange(f"negative qubit index in {qubits}")
        if len(params) != kind.num_params:
            raise ArityMismatch(
                f"{kind.value} takes {kind.num_params} parameter(s), got {len(params)}")

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def inverse(self) -> "Gate":
        if self.kind is GateKind.MEASURE:
            raise ContainsMeasurement("measurement has no inverse")
        if self.kind in _SELF_INVERSE:
            return self
        if self.kind in _INVERSE_KIND:
            return Gate(_INVERSE_KIND[self.kind], self.qubits)
        if self.kind is GateKind.RZ:
            return Gate(GateKind.RZ, self.qubits, (-self.params[0],))
        # PRX(theta, phi) rotates about an equatorial axis; negate the angle
        return Gate(GateKind.PRX, self.qubits, (-self.params[0], self.params[1]))

    def remap(self, mapping: Sequence[int]) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.params)

    def __repr__(self):
        args = f"({', '.join(f'{p:.6g}' for p in self.params)})" if self.params else ""
        return f"{self.kind.name}{args}@{list(self.qubits)}"


def gate(kind: GateKind | str, *qubits: int, params: Iterable[float] = ()) -> Gate:
    """Shorthand constructor: ``gate("ccx", 0, 1, 2)``."""
    return Gate(GateKind(kind), tuple(qubits), tuple(params))


@dataclass(frozen=True)
class CircuitStats:
    num_qubits: int
    two_qubit_ops: int
    depth: int
    size: int
    histogram: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "two_qubit_ops": self.two_qubit_ops,
            "depth": self.depth,
            "size": self.size,
            "histogram": dict(self.histogram),
        }


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    measured_qubits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "measured_qubits", tuple(int(q) for q in self.measured_qubits))
        if self.num_qubits < 0:
            raise CircuitError("num_qubits must be non-negative")
        _validate(self)

    # construction -------------------------------------------------------
    @classmethod
    def empty(cls, num_qubits: int) -> "Circuit":
        return cls(num_qubits)

    def append(self, g: Gate) -> "Circuit":
        return Circuit(self.num_qubits, self.gates + (g,), self.measured_qubits)

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.num_qubits, self.gates + tuple(gates), self.measured_qubits)

    def compose(self, other: "Circuit") -> "Circuit":
        """Append ``other``'s gates; measured registers are concatenated."""
        if other.num_qubits > self.num_qubits:
            raise IndexOutOfRange("composed circuit is wider than the base circuit")
        return Circuit(self.num_qubits, self.gates + other.gates,
                       self.measured_qubits + other.measured_qubits)

    def barrier(self, qubits: Iterable[int] | None = None) -> "Circuit":
        qs = tuple(range(self.num_qubits)) if qubits is None else tuple(qubits)
        return self.append(Gate(GateKind.BARRIER, qs))

    def measure(self, qubits: Iterable[int]) -> "Circuit":
        """Measure ``qubits`` at the end, assigning the next classical bits in order."""
        qs = tuple(qubits)
        return Circuit(
            self.num_qubits,
            self.gates + tuple(Gate(GateKind.MEASURE, (q,)) for q in qs),
            self.measured_qubits + qs,
        )

    def without_measurements(self) -> "Circuit":
        return Circuit(self.num_qubits,
                       tuple(g for g in self.gates if g.kind is not GateKind.MEASURE))

    # queries ------------------------------------------------------------
    @property
    def has_measurements(self) -> bool:
        return bool(self.measured_qubits) or any(
            g.kind is GateKind.MEASURE for g in self.gates)

    def active_qubits(self) -> list[int]:
        used = {q for g in self.gates if g.kind is not GateKind.BARRIER for q in g.qubits}
        used.update(self.measured_qubits)
        return sorted(used)

    def stats(self) -> CircuitStats:
        return stats(self)

    def inverse(self) -> "Circuit":
        return inverse(self)

    def to_json(self, indent: int | None = None) -> str:
        return to_json(self, indent)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


def _validate(circuit: Circuit) -> None:
    n = circuit.num_qubits
    measured: set[int] = set()
    for g in circuit.gates:
        for q in g.qubits:
            if q >= n:
                raise IndexOutOfRange(f"{g!r} touches qubit {q} but circuit has {n}")
        if g.kind is GateKind.MEASURE:
            if g.qubits[0] in measured:
                raise MidCircuitMeasurement(f"qubit {g.qubits[0]} measured twice")
            measured.add(g.qubits[0])
        elif g.kind is not GateKind.BARRIER and measured.intersection(g.qubits):
            raise MidCircuitMeasurement(f"{g!r} follows a measurement on the same qubit")
    mq = circuit.measured_qubits
    if len(set(mq)) != len(mq):
        raise DuplicateQubit(f"measured_qubits repeats an entry: {mq}")
    for q in mq:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"measured qubit {q} out of range")
    if not measured.issubset(mq):
        raise CircuitError("MEASURE gate on a qubit missing from measured_qubits")


def append(circuit: Circuit, g: Gate) -> Circuit:
    return circuit.append(g)


def layers(circuit: Circuit) -> list[list[int]]:
    """ASAP layering as lists of gate indices.

    Barriers synchronise their qubits without occupying a layer; MEASURE
    gates are left out.
    """
    level = [0] * circuit.num_qubits
    out: list[list[int]] = []
    for i, g in enumerate(circuit.gates):
        if g.kind is GateKind.MEASURE:
            continue
        top = max(level[q] for q in g.qubits)
        if g.kind is GateKind.BARRIER:
            for q in g.qubits:
                level[q] = top
            continue
        if top == len(out):
            out.append([])
        out[top].append(i)
        for q in g.qubits:
            level[q] = top + 1
    return out


def stats(circuit: Circuit) -> CircuitStats:
    counted = [g for g in circuit.gates
               if g.kind not in (GateKind.MEASURE, GateKind.BARRIER)]
    hist = Counter(g.kind.value for g in counted)
    return CircuitStats(
        num_qubits=circuit.num_qubits,
        two_qubit_ops=sum(1 for g in counted if g.arity == 2),
        depth=len(layers(circuit)),
        size=len(counted),
        histogram=dict(sorted(hist.items())),
    )


def inverse(circuit: Circuit) -> Circuit:
    if circuit.has_measurements:
        raise ContainsMeasurement("cannot invert a circuit with measurements")
    return Circuit(circuit.num_qubits, tuple(g.inverse() for g in reversed(circuit.gates)))


def compact(circuit: Circuit) -> tuple[Circuit, list[int]]:
    """Drop idle qubits. Returns the narrowed circuit and new→old qubit indices."""
    keep = circuit.active_qubits()
    index = {q: i for i, q in enumerate(keep)}
    gates = []
    for g in circuit.gates:
        if g.kind is GateKind.BARRIER:
            qs = tuple(index[q] for q in g.qubits if q in index)
            if qs:
                gates.append(Gate(GateKind.BARRIER, qs))
        else:
            gates.append(g.remap(index))
    narrowed = Circuit(len(keep), tuple(gates), tuple(index[q] for q in circuit.measured_qubits))
    return narrowed, keep


# JSON ---------------------------------------------------------------------

def to_dict(circuit: Circuit) -> dict:
    return {
        "num_qubits": circuit.num_qubits,
        "gates": [
            {"kind": g.kind.value, "qubits": list(g.qubits), "params": list(g.params)}
            for g in circuit.gates
        ],
        "measured_qubits": list(circuit.measured_qubits),
    }


def to_json(circuit: Circuit, indent: int | None = None) -> str:
    return json.dumps(to_dict(circuit), indent=indent)


def from_dict(data: object) -> Circuit:
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object", "circuit")
    for key in ("num_qubits", "gates"):
        if key not in data:
            raise ParseError("missing field", key)
    n = data["num_qubits"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError("must be a non-negative integer", "num_qubits")
    if not isinstance(data["gates"], list):
        raise ParseError("must be a list", "gates")
    gates = []
    for i, raw in enumerate(data["gates"]):
        ctx = f"gates[{i}]"
        if not isinstance(raw, dict):
            raise ParseError("expected an object", ctx)
        kind = raw.get("kind")
        try:
            kind = GateKind(kind)
        except ValueError:
            raise ParseError(f"unknown gate kind {kind!r}", f"{ctx}.kind") from None
        qubits = raw.get("qubits", [])
        params = raw.get("params", [])
        if not isinstance(qubits, list) or not all(
                isinstance(q, int) and not isinstance(q, bool) for q in qubits):
            raise ParseError("must be a list of integers", f"{ctx}.qubits")
        if not isinstance(params, list) or not all(
                isinstance(p, (int, float)) and not isinstance(p, bool) for p in params):
            raise ParseError("must be a list of numbers", f"{ctx}.params")
        try:
            gates.append(Gate(kind, tuple(qubits), tuple(params)))
        except CircuitError as exc:
            raise ParseError(str(exc), ctx) from None
    measured = data.get("measured_qubits", [])
    if not isinstance(measured, list) or not all(isinstance(q, int) for q in measured):
        raise ParseError("must be a list of integers", "measured_qubits")
    try:
        return Circuit(n, tuple(gates), tuple(measured))
    except CircuitError as exc:
        raise ParseError(str(exc), "circuit") from None


def from_json(text: str) -> Circuit:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_dict(data)
