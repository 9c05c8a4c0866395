"""Concrete matrices for every unitary gate kind.

Convention: for a gate on qubits ``(q0, q1, ...)`` the first listed qubit
is the most significant bit of the matrix index, so ``CX`` on
``(control, target)`` is the textbook matrix.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .circuit import Gate, GateKind
from .errors import UnsupportedGate

I2 = np.eye(2, dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
T = np.diag([1, np.exp(1j * np.pi / 4)])
PAULIS = (I2, X, Y, Z)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def prx(theta: float, phi: float) -> np.ndarray:
    """Rotation by ``theta`` about the equatorial axis at azimuth ``phi``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([
        [c, -1j * np.exp(-1j * phi) * s],
        [-1j * np.exp(1j * phi) * s, c],
    ])


def controlled(u: np.ndarray, num_controls: int = 1) -> np.ndarray:
    dim = u.shape[0] << num_controls
    out = np.eye(dim, dtype=complex)
    out[-u.shape[0]:, -u.shape[0]:] = u
    return out


def embed(u: np.ndarray, targets: tuple[int, ...], n: int) -> np.ndarray:
    """Full ``2**n`` matrix of ``u`` acting on ``targets`` (little-endian basis)."""
    k = len(targets)
    full = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for col in range(2 ** n):
        sub = 0
        for t in targets:
            sub = (sub << 1) | ((col >> t) & 1)
        for row_sub in range(2 ** k):
            amp = u[row_sub, sub]
            if amp == 0:
                continue
            row = col
            for j, t in enumerate(targets):
                bit = (row_sub >> (k - 1 - j)) & 1
                row = (row & ~(1 << t)) | (bit << t)
            full[row, col] += amp
    return full


def _sequence(n: int, ops) -> np.ndarray:
    out = np.eye(2 ** n, dtype=complex)
    for u, qs in ops:
        out = embed(u, qs, n) @ out
    return out


@lru_cache(maxsize=None)
def _rccx() -> np.ndarray:
    # Margolus construction: H, T, CX(b,c), T†, CX(a,c), T, CX(b,c), T†, H on
    # target c. Qubit order (a, b, c) -> little-endian positions (2, 1, 0).
    a, b, c = 2, 1, 0
    cx = controlled(X)
    tdg = T.conj().T
    return _sequence(3, [
        (H, (c,)), (T, (c,)), (cx, (b, c)), (tdg, (c,)), (cx, (a, c)),
        (T, (c,)), (cx, (b, c)), (tdg, (c,)), (H, (c,)),
    ])


_FIXED = {
    GateKind.H: H,
    GateKind.X: X,
    GateKind.Z: Z,
    GateKind.SX: SX,
    GateKind.SXDG: SX.conj().T,
    GateKind.CX: controlled(X),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    GateKind.CCX: controlled(X, 2),
    GateKind.CCZ: np.diag([1] * 7 + [-1]).astype(complex),
}


def rccx_matrix() -> np.ndarray:
    return _rccx().copy()


def gate_matrix(g: Gate) -> np.ndarray:
    kind = g.kind
    if kind in _FIXED:
        return _FIXED[kind]
    if kind is GateKind.RZ:
        return rz(g.params[0])
    if kind is GateKind.PRX:
        return prx(*g.params)
    if kind is GateKind.RCCX:
        return _rccx()
    if kind is GateKind.RCCX_DG:
        return _rccx().conj().T
    raise UnsupportedGate(f"{kind.value} has no unitary matrix")


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-9) -> bool:
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < atol:
        return bool(np.allclose(a, b, atol=atol))
    phase = a[idx] / b[idx]
    if not np.isclose(abs(phase), 1.0, atol=atol):
        return False
    return bool(np.allclose(a, phase * b, atol=atol))
