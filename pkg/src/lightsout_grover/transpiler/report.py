"""Post-transpile statistics."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Sequence

from ..circuit import Circuit
from ..errors import ParseError


@dataclass(frozen=True)
class TranspileReport:
    """Metrics of an emitted circuit plus where each logical qubit went.

    ``final_permutation[i]`` is the logical qubit whose initial position
    holds logical ``i`` at the end, or ``None`` when ``i`` finished on a
    physical qubit outside the initial layout.
    """
    qubits_used: int
    two_qubit_ops: int
    depth: int
    size: int
    initial_layout: tuple[int, ...]
    final_layout: tuple[int, ...]
    final_permutation: tuple[int | None, ...]
    swaps_inserted: int = 0
    target: str = ""
    opt_level: int | None = None

    @classmethod
    def from_circuit(cls, circuit: Circuit, initial_layout: Sequence[int],
                     final_layout: Sequence[int], swaps_inserted: int = 0,
                     target: str = "", opt_level: int | None = None) -> "TranspileReport":
        s = circuit.stats()
        where = {p: i for i, p in enumerate(initial_layout)}
        return cls(
            qubits_used=len(circuit.active_qubits()),
            two_qubit_ops=s.two_qubit_ops,
            depth=s.depth,
            size=s.size,
            initial_layout=tuple(initial_layout),
            final_layout=tuple(final_layout),
            final_permutation=tuple(where.get(p) for p in final_layout),
            swaps_inserted=swaps_inserted,
            target=target,
            opt_level=opt_level,
        )

    def with_circuit(self, circuit: Circuit, opt_level: int | None = None) -> "TranspileReport":
        """Recompute metrics for a rewritten circuit with the same layouts."""
        return TranspileReport.from_circuit(
            circuit, self.initial_layout, self.final_layout, self.swaps_inserted,
            self.target, self.opt_level if opt_level is None else opt_level)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("initial_layout", "final_layout", "final_permutation"):
            out[key] = list(out[key])
        return out

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "TranspileReport":
        try:
            return cls(
                qubits_used=int(data["qubits_used"]),
                two_qubit_ops=int(data["two_qubit_ops"]),
                depth=int(data["depth"]),
                size=int(data["size"]),
                initial_layout=tuple(int(q) for q in data["initial_layout"]),
                final_layout=tuple(int(q) for q in data["final_layout"]),
                final_permutation=tuple(None if q is None else int(q)
                                        for q in data["final_permutation"]),
                swaps_inserted=int(data.get("swaps_inserted", 0)),
                target=str(data.get("target", "")),
                opt_level=data.get("opt_level"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(str(exc), "report") from None
