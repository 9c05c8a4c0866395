"""Monte-Carlo Pauli-trajectory noise: depolarizing gates and readout flips."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, GateKind, compact
from .errors import NoMeasurements, ParseError, TooManyQubits
from .sampling import Distribution, sample
from .statevector import (
    MAX_QUBITS,
    _index,
    _swap_halves,
    apply_gate,
    marginal_probabilities,
    zero_state,
)

# amplitudes held per trajectory batch: 2**22 complex64 values is 32 MiB
_BATCH_BUDGET = 2 ** 22
# single precision is ample for sampling and halves memory traffic
_TRAJECTORY_DTYPE = np.complex64


@dataclass(frozen=True)
class NoiseModel:
    p1: float = 0.0
    p2: float = 0.0
    p_ro: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "p_ro"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is not a probability")

    @property
    def is_ideal(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.p_ro == 0.0

    def gate_error(self, arity: int) -> float:
        # three-qubit gates only appear before native translation; they
        # share the two-qubit rate
        return self.p1 if arity == 1 else self.p2

    def to_dict(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "p_ro": self.p_ro}

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        try:
            return cls(float(data.get("p1", 0.0)), float(data.get("p2", 0.0)),
                       float(data.get("p_ro", 0.0)))
        except (TypeError, ValueError, AttributeError) as exc:
            raise ParseError(str(exc), "noise") from None

    @classmethod
    def from_json(cls, text: str) -> "NoiseModel":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _apply_paulis(state: np.ndarray, n: int, qubits: tuple[int, ...],
                  rows: np.ndarray, codes: np.ndarray) -> None:
    """Apply Pauli string ``codes[j]`` to trajectory ``rows[j]`` (batch-first state).

    A code packs two bits per gate qubit: 1 = X, 2 = Z, 3 = Y. Y is
    applied as X·Z, which differs only by a per-trajectory global phase.
    """
    for code in np.unique(codes):
        sel = rows[codes == code]
        sub = state[sel]
        for j, q in enumerate(qubits):
            letter = (int(code) >> (2 * j)) & 3
            if letter & 2:
                sub[_index(n, {q: 1}, lead=1)] *= -1
            if letter & 1:
                _swap_halves(sub, n, q, {}, lead=1)
        state[sel] = sub


def _draw(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One outcome per column of a ``(2**w, B)`` probability matrix."""
    cdf = np.cumsum(probs, axis=0)
    draws = rng.random(probs.shape[1]) * cdf[-1]
    return np.minimum((cdf < draws).sum(axis=0), probs.shape[0] - 1)


def sample_noisy(circuit: Circuit, noise: NoiseModel, shots: int,
                 seed: int | None = None) -> Distribution:
    """Sample ``shots`` noisy executions of a measured circuit.

    Every gate is followed, with probability ``p1`` (one-qubit gates) or
    ``p2`` (multi-qubit gates), by a uniformly random non-identity Pauli on
    its qubits; each measured bit is then flipped with probability ``p_ro``.
    A noise-free model falls through to :func:`sample` with the same seed.

    Error locations are drawn up front. Trajectories share one error-free
    state until their first error and are only simulated separately after
    it; error-free trajectories are sampled from the shared state.
    """
    if noise.is_ideal:
        return sample(circuit, shots, seed)
    if not circuit.measured_qubits:
        raise NoMeasurements("circuit measures no qubits")
    narrow, _ = compact(circuit)
    n = narrow.num_qubits
    if n > MAX_QUBITS:
        raise TooManyQubits(f"{n} active qubits exceeds the simulator limit")
    gates: list[Gate] = [g for g in narrow.gates
                         if g.kind not in (GateKind.BARRIER, GateKind.MEASURE)]
    measured = narrow.measured_qubits
    width = len(measured)
    rng = np.random.default_rng(seed)
    batch = max(1, min(shots, _BATCH_BUDGET >> n))
    counts = np.zeros(2 ** width, dtype=np.int64)

    for start in range(0, shots, batch):
        b = min(batch, shots - start)
        hits, codes = [], []
        first = np.full(b, len(gates))
        for i, g in enumerate(gates):
            p = noise.gate_error(g.arity)
            hit = np.flatnonzero(rng.random(b) < p) if p > 0.0 else np.empty(0, dtype=np.int64)
            hits.append(hit)
            codes.append(rng.integers(1, 4 ** g.arity, size=hit.size))
            first[hit] = np.minimum(first[hit], i)
        order = np.argsort(first, kind="stable")
        slot = np.empty(b, dtype=np.int64)
        slot[order] = np.arange(b)
        faulty = int(np.count_nonzero(first < len(gates)))
        starts = np.searchsorted(first[order], np.arange(len(gates) + 1))

        clean = zero_state(n)
        state = np.empty((faulty,) + (2,) * n, dtype=_TRAJECTORY_DTYPE)
        live = 0
        for i, g in enumerate(gates):
            clean = apply_gate(clean, g, n)
            if live:
                state[:live] = apply_gate(state[:live], g, n, lead=1)
            fresh = int(starts[i + 1] - starts[i])
            if fresh:
                state[live:live + fresh] = clean
                live += fresh
            if hits[i].size:
                _apply_paulis(state, n, g.qubits, slot[hits[i]], codes[i])

        outcomes = np.empty(b, dtype=np.int64)
        ideal = marginal_probabilities(clean.reshape(-1), n, measured)
        ideal = np.clip(ideal, 0.0, None)
        outcomes[order[faulty:]] = rng.choice(2 ** width, size=b - faulty, p=ideal / ideal.sum())
        if faulty:
            probs = marginal_probabilities(state.reshape(faulty, -1).T, n, measured)
            probs = probs.astype(float)
            outcomes[order[:faulty]] = _draw(probs, rng)
        if noise.p_ro > 0.0:
            flips = rng.random((b, width)) < noise.p_ro
            outcomes ^= (flips * (1 << np.arange(width))).sum(axis=1)
        counts += np.bincount(outcomes, minlength=2 ** width)

    return Distribution.from_array(counts, width)
