"""Shot sampling and shot-statistics for measured circuits."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .circuit import Circuit, compact
from .errors import EmptyDistribution, NoMeasurements, ParseError
from .statevector import simulate


def bitstring(index: int, width: int) -> str:
    return format(index, f"0{width}b") if width else ""


@dataclass(frozen=True)
class Distribution:
    counts: dict[str, int] = field(default_factory=dict)
    shots: int = 0

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to shots")
        widths = {len(k) for k in self.counts}
        if len(widths) > 1:
            raise ValueError("bitstrings of mixed width")

    @classmethod
    def from_array(cls, counts: np.ndarray, width: int) -> "Distribution":
        """Build from a length ``2**width`` count vector (index = little-endian bits)."""
        return cls({bitstring(i, width): int(c) for i, c in enumerate(counts) if c},
                   int(np.sum(counts)))

    def frequency(self, key: str) -> float:
        return self.counts.get(key, 0) / self.shots if self.shots else 0.0

    def to_dict(self) -> dict:
        return {"shots": self.shots, "counts": dict(sorted(self.counts.items()))}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Distribution":
        try:
            counts = {str(k): int(v) for k, v in data["counts"].items()}
            return cls(counts, int(data["shots"]))
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise ParseError(str(exc), "distribution") from None


def measured_marginal(circuit: Circuit) -> np.ndarray:
    if not circuit.measured_qubits:
        raise NoMeasurements("circuit measures no qubits")
    narrow, _ = compact(circuit)
    return simulate(narrow).marginal(narrow.measured_qubits)


def ideal_probabilities(circuit: Circuit, cutoff: float = 1e-12) -> dict[str, float]:
    width = len(circuit.measured_qubits)
    probs = measured_marginal(circuit)
    return {bitstring(i, width): float(p) for i, p in enumerate(probs) if p > cutoff}


def sample(circuit: Circuit, shots: int, seed: int | None = None) -> Distribution:
    """Multinomial draw of ``shots`` outcomes from the measured-register marginal."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    probs = measured_marginal(circuit)
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return Distribution.from_array(counts, len(circuit.measured_qubits))


@dataclass(frozen=True)
class SuccessFrequency:
    p_hat: float
    sigma: float
    worst_case: float
    shots: int

    def __str__(self):
        return f"{self.p_hat:.3f} ± {self.sigma:.4f}"


def worst_case_sigma(shots: int) -> float:
    """Largest possible one-sigma error of a frequency from ``shots`` samples."""
    return 1.0 / (2.0 * math.sqrt(shots))


def success_frequency(dist: Distribution, marked: Iterable[str]) -> SuccessFrequency:
    n = dist.shots
    if n < 1:
        raise EmptyDistribution("distribution has no shots")
    hits = sum(dist.counts.get(m, 0) for m in set(marked))
    p = hits / n
    return SuccessFrequency(p, math.sqrt(p * (1.0 - p) / n), worst_case_sigma(n), n)
