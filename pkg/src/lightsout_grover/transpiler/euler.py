"""Single-qubit unitaries as short native sequences.

Two families are covered: ``{RZ, SX, X}`` (ZSX) and ``{PRX}``. Every
candidate sequence is checked against the target matrix, and the shortest
one that matches wins.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from ..circuit import Gate, GateKind
from ..errors import UnsupportedGate
from ..unitaries import equal_up_to_phase, gate_matrix, prx

_ATOL = 1e-10


def wrap_angle(theta: float) -> float:
    """Map onto (-pi, pi]."""
    t = math.remainder(theta, 2 * math.pi)
    if abs(t) < 1e-14:
        return 0.0
    return math.pi if math.isclose(t, -math.pi, abs_tol=1e-12) else t


def is_zero_angle(theta: float, period: float = 2 * math.pi) -> bool:
    return abs(math.remainder(theta, period)) < 1e-12


def to_su2(u: np.ndarray) -> np.ndarray:
    return u / np.sqrt(np.linalg.det(u))


def zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """``(phi, theta, lam)`` with ``u ∝ RZ(phi)·RY(theta)·RZ(lam)``."""
    v = to_su2(u)
    theta = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    total = 2 * np.angle(v[1, 1]) if abs(v[1, 1]) > 1e-12 else 0.0
    diff = 2 * np.angle(v[1, 0]) if abs(v[1, 0]) > 1e-12 else 0.0
    return float((total + diff) / 2), theta, float((total - diff) / 2)


def sequence_matrix(gates: Iterable[Gate]) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    for g in gates:
        out = gate_matrix(g) @ out
    return out


def _rz_gates(q: int, theta: float) -> list[Gate]:
    theta = wrap_angle(theta)
    return [] if is_zero_angle(theta) else [Gate(GateKind.RZ, (q,), (theta,))]


def _zsx_candidates(u: np.ndarray, q: int):
    phi, theta, lam = zyz_angles(u)
    sx = Gate(GateKind.SX, (q,))
    x = Gate(GateKind.X, (q,))
    yield []
    yield _rz_gates(q, phi + lam)
    yield [x]
    yield [sx]
    yield _rz_gates(q, phi - lam + math.pi) + [x]
    yield [x] + _rz_gates(q, phi - lam + math.pi)
    yield _rz_gates(q, lam - math.pi / 2) + [sx] + _rz_gates(q, phi + math.pi / 2)
    yield (_rz_gates(q, lam + math.pi) + [sx] + _rz_gates(q, math.pi - theta)
           + [sx] + _rz_gates(q, phi))
    yield (_rz_gates(q, lam) + [sx] + _rz_gates(q, theta + math.pi)
           + [sx] + _rz_gates(q, phi + math.pi))


def _prx_gate(q: int, theta: float, phi: float) -> list[Gate]:
    theta = math.remainder(theta, 4 * math.pi)
    if is_zero_angle(theta, 4 * math.pi) or is_zero_angle(theta - 2 * math.pi, 4 * math.pi):
        return []
    if theta < 0:
        theta, phi = -theta, phi + math.pi
    return [Gate(GateKind.PRX, (q,), (theta, wrap_angle(phi)))]


def _equatorial(v: np.ndarray) -> tuple[float, float] | None:
    """``(theta, phi)`` if ``v`` is a PRX rotation up to sign."""
    for w in (v, -v):
        if abs(w[0, 0].imag) < 1e-12 and abs(w[1, 1] - w[0, 0]) < 1e-12:
            s = abs(w[1, 0])
            theta = 2 * math.atan2(s, w[0, 0].real)
            phi = float(np.angle(1j * w[1, 0])) if s > 1e-12 else 0.0
            return theta, phi
    return None


def _prx_candidates(u: np.ndarray, q: int):
    v = to_su2(u)
    yield []
    single = _equatorial(v)
    if single is not None:
        yield _prx_gate(q, *single)
    # two rotations: pick the first axis so that v·R1⁻¹ is equatorial
    a, b = v[0, 0], v[1, 0]
    if abs(b) > 1e-12:
        psi = float(np.angle(b))
        theta1 = 2 * math.atan2(a.imag, abs(b))
    else:
        psi, theta1 = 0.0, math.pi
    rest = _equatorial(to_su2(v @ prx(-theta1, psi)))
    if rest is not None:
        yield _prx_gate(q, theta1, psi) + _prx_gate(q, *rest)
    phi, theta, lam = zyz_angles(u)
    yield ([Gate(GateKind.PRX, (q,), (math.pi, 0.0)),
            Gate(GateKind.PRX, (q,), (math.pi, wrap_angle((phi + lam) / 2)))]
           + _prx_gate(q, theta, phi + math.pi / 2))


def basis_family(native_1q: Iterable[GateKind]) -> str:
    native = set(native_1q)
    if {GateKind.RZ, GateKind.SX, GateKind.X} <= native:
        return "zsx"
    if GateKind.PRX in native:
        return "prx"
    if {GateKind.RZ, GateKind.SX} <= native:
        return "zsx"
    raise UnsupportedGate(f"no one-qubit synthesis for basis {sorted(k.value for k in native)}")


def synthesize_1q(u: np.ndarray, qubit: int, native_1q: Iterable[GateKind]) -> list[Gate]:
    """Shortest verified native sequence for the 2x2 unitary ``u``."""
    native = set(native_1q)
    family = basis_family(native)
    candidates = _zsx_candidates(u, qubit) if family == "zsx" else _prx_candidates(u, qubit)
    for seq in candidates:
        if any(g.kind not in native for g in seq):
            continue
        if equal_up_to_phase(sequence_matrix(seq), u, atol=_ATOL):
            return seq
    raise UnsupportedGate("one-qubit synthesis failed to converge")  # pragma: no cover
