"""Two-qubit block re-collection and CZ-count-optimal resynthesis.

The minimal number of CZs for a two-qubit unitary follows from the
spectrum of ``γ(U) = U (Y⊗Y) Uᵀ (Y⊗Y)`` with ``U`` scaled into SU(4):
``γ = ±I`` needs none, ``tr γ = 0`` with ``γ² = -I`` needs one, a real
trace needs two, and anything else three. Circuits with the minimal count
are found numerically and accepted only after an exact check.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable

import numpy as np
from scipy.optimize import least_squares

from ..circuit import Gate, GateKind
from ..unitaries import Y, equal_up_to_phase, gate_matrix, ry, rz
from .euler import synthesize_1q

_YY = np.kron(Y, Y)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_I2 = np.eye(2, dtype=complex)
_ATTEMPTS = 24
_ATOL = 1e-10


def min_cz_count(u: np.ndarray, atol: float = 1e-9) -> int:
    v = u / complex(np.linalg.det(u)) ** 0.25
    gamma = v @ _YY @ v.T @ _YY
    tr = np.trace(gamma)
    if abs(abs(tr.real) - 4) < atol and abs(tr.imag) < atol:
        return 0
    if abs(tr) < atol and np.allclose(gamma @ gamma, -np.eye(4), atol=atol):
        return 1
    if abs(tr.imag) < atol:
        return 2
    return 3


def kron_factor(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(a, b)`` with ``u ≈ a ⊗ b`` for a product unitary."""
    m = u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    left, s, right = np.linalg.svd(m)
    a = np.sqrt(s[0]) * left[:, 0].reshape(2, 2)
    b = np.sqrt(s[0]) * right[0, :].reshape(2, 2)
    return a, b


def _u3(p: np.ndarray) -> np.ndarray:
    return rz(p[0]) @ ry(p[1]) @ rz(p[2])


def _template(x: np.ndarray, k: int) -> np.ndarray:
    out = np.kron(_u3(x[0:3]), _u3(x[3:6]))
    for j in range(1, k + 1):
        p = x[6 * j:6 * j + 6]
        out = np.kron(_u3(p[0:3]), _u3(p[3:6])) @ _CZ @ out
    return out


def _local_layers(u: np.ndarray, k: int, rng: np.random.Generator) -> list[tuple] | None:
    """Local factors ``[(a0, b0), ..., (ak, bk)]`` with ``u ∝ Lk·CZ···CZ·L0``."""
    if k == 0:
        a, b = kron_factor(u)
        return [(a, b)] if np.allclose(np.kron(a, b), u, atol=_ATOL) else None
    n = 6 * (k + 1)

    def residual(x):
        diff = _template(x[:n], k) - np.exp(1j * x[n]) * u
        return np.concatenate([diff.real.ravel(), diff.imag.ravel()])

    for _ in range(_ATTEMPTS):
        x0 = rng.uniform(-np.pi, np.pi, n + 1)
        fit = least_squares(residual, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.max(np.abs(fit.fun)) < 1e-11:
            x = fit.x
            return [(_u3(x[6 * j:6 * j + 3]), _u3(x[6 * j + 3:6 * j + 6])) for j in range(k + 1)]
    return None


def synthesize_2q(u: np.ndarray, a: int, b: int, native_1q, k: int,
                  rng: np.random.Generator) -> list[Gate] | None:
    """Native gates realizing ``u`` on ``(a, b)`` (``a`` most significant) with ``k`` CZs."""
    layers = _local_layers(u, k, rng)
    if layers is None:
        return None
    out: list[Gate] = []
    for j, (ua, ub) in enumerate(layers):
        if j:
            out.append(Gate(GateKind.CZ, (a, b)))
        out += synthesize_1q(ua, a, native_1q)
        out += synthesize_1q(ub, b, native_1q)
    return out


def block_unitary(gates: Iterable[Gate], a: int, b: int) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    for g in gates:
        if g.arity == 2:
            m = gate_matrix(g) if g.qubits == (a, b) else _swap_conj(gate_matrix(g))
        elif g.qubits[0] == a:
            m = np.kron(gate_matrix(g), _I2)
        else:
            m = np.kron(_I2, gate_matrix(g))
        u = m @ u
    return u


def _swap_conj(m: np.ndarray) -> np.ndarray:
    p = np.eye(4)[[0, 2, 1, 3]]
    return p @ m @ p


def collect_blocks(gates: list[Gate]) -> list[tuple[tuple[int, int], list[int]]]:
    """Maximal runs of CZ plus one-qubit gates confined to one qubit pair.

    One-qubit gates directly before a block's first CZ are absorbed too.
    Each block is contiguous on both of its qubits' timelines.
    """
    blocks: list[tuple[tuple[int, int], list[int]]] = []
    open_block: dict[int, int] = {}
    pending: dict[int, list[int]] = defaultdict(list)

    def close(q: int) -> None:
        bid = open_block.get(q)
        if bid is None:
            return
        for r in blocks[bid][0]:
            open_block.pop(r, None)

    for i, g in enumerate(gates):
        if g.kind in (GateKind.BARRIER, GateKind.MEASURE):
            for q in g.qubits:
                close(q)
                pending.pop(q, None)
            continue
        if g.arity == 1:
            q = g.qubits[0]
            if q in open_block:
                blocks[open_block[q]][1].append(i)
            else:
                pending[q].append(i)
            continue
        if g.kind is GateKind.CZ:
            a, b = g.qubits
            bid = open_block.get(a)
            if bid is not None and bid == open_block.get(b):
                blocks[bid][1].append(i)
                continue
            close(a)
            close(b)
            members = sorted(pending.pop(a, []) + pending.pop(b, [])) + [i]
            blocks.append(((a, b), members))
            open_block[a] = open_block[b] = len(blocks) - 1
            continue
        for q in g.qubits:
            close(q)
            pending.pop(q, None)
    return blocks


def resynthesize_blocks(gates: Iterable[Gate], native_1q, seed: int = 0) -> list[Gate]:
    """Rewrite blocks whose unitary needs fewer CZs than they contain."""
    gates = list(gates)
    rng = np.random.default_rng(seed)
    slots: list[Gate | list[Gate] | None] = list(gates)
    for (a, b), members in collect_blocks(gates):
        block = [gates[i] for i in members]
        count = sum(1 for g in block if g.kind is GateKind.CZ)
        if count < 2:
            continue
        u = block_unitary(block, a, b)
        k = min_cz_count(u)
        if k >= count:
            continue
        new = synthesize_2q(u, a, b, native_1q, k, rng)
        if new is None or not equal_up_to_phase(block_unitary(new, a, b), u, atol=_ATOL):
            continue
        for i in members:
            slots[i] = None
        slots[members[-1]] = new
    out: list[Gate] = []
    for s in slots:
        if isinstance(s, list):
            out += s
        elif s is not None:
            out.append(s)
    return out
