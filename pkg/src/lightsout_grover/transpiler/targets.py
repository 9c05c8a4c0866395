"""Compilation targets: coupling graphs plus native gate sets."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from ..circuit import GateKind
from ..errors import ParseError

ZSX_BASIS = frozenset({GateKind.RZ, GateKind.SX, GateKind.X})
PRX_BASIS = frozenset({GateKind.PRX})


@dataclass(frozen=True)
class Target:
    name: str
    num_qubits: int
    edges: tuple[tuple[int, int], ...]
    native_1q: frozenset[GateKind] = ZSX_BASIS
    native_2q: GateKind = GateKind.CZ
    edge_weights: dict[tuple[int, int], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        edges = tuple(sorted({(min(a, b), max(a, b)) for a, b in self.edges}))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "native_1q", frozenset(GateKind(k) for k in self.native_1q))
        object.__setattr__(self, "native_2q", GateKind(self.native_2q))
        for a, b in edges:
            if a == b or not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ValueError(f"edge ({a}, {b}) is not between two distinct device qubits")
        if self.native_2q is not GateKind.CZ:
            raise ValueError("only CZ-native targets are supported")
        if not (GateKind.PRX in self.native_1q or {GateKind.RZ, GateKind.SX} <= self.native_1q):
            raise ValueError("native_1q must contain PRX, or RZ and SX")
        if self.edge_weights is not None:
            weights = {(min(a, b), max(a, b)): float(w) for (a, b), w in self.edge_weights.items()}
            object.__setattr__(self, "edge_weights", weights)
        if self.num_qubits > 1 and not self.is_connected(range(self.num_qubits)):
            raise ValueError(f"coupling graph of {self.name} is disconnected")

    @property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edge_set

    def neighbors(self, q: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == q} | {a for a, b in self.edges if b == q})

    def degree(self, q: int) -> int:
        return len(self.neighbors(q))

    def weight(self, a: int, b: int) -> float:
        if self.edge_weights is None:
            return 1.0
        return self.edge_weights.get((min(a, b), max(a, b)), 1.0)

    def _adjacency(self, nodes: Iterable[int] | None = None) -> csr_matrix:
        keep = set(range(self.num_qubits)) if nodes is None else set(nodes)
        rows, cols, vals = [], [], []
        for a, b in self.edges:
            if a in keep and b in keep:
                w = self.weight(a, b)
                rows += [a, b]
                cols += [b, a]
                vals += [w, w]
        return csr_matrix((vals, (rows, cols)), shape=(self.num_qubits, self.num_qubits))

    def is_connected(self, nodes: Iterable[int]) -> bool:
        nodes = sorted(set(nodes))
        if len(nodes) <= 1:
            return True
        _, labels = connected_components(self._adjacency(nodes), directed=False)
        return len({labels[q] for q in nodes}) == 1

    def distances(self, nodes: Iterable[int] | None = None) -> np.ndarray:
        """All-pairs shortest-path lengths (edge weights respected), optionally
        restricted to the subgraph induced by ``nodes``."""
        return shortest_path(self._adjacency(nodes), directed=False)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "num_qubits": self.num_qubits,
            "edges": [list(e) for e in self.edges],
            "native_1q": sorted(k.value for k in self.native_1q),
            "native_2q": self.native_2q.value,
        }
        if self.edge_weights:
            out["edge_weights"] = {f"{a}-{b}": w for (a, b), w in sorted(self.edge_weights.items())}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Target":
        try:
            weights = None
            if data.get("edge_weights"):
                weights = {}
                for key, w in data["edge_weights"].items():
                    a, b = (int(x) for x in str(key).split("-"))
                    weights[(a, b)] = float(w)
            return cls(
                name=str(data["name"]),
                num_qubits=int(data["num_qubits"]),
                edges=tuple((int(a), int(b)) for a, b in data["edges"]),
                native_1q=frozenset(GateKind(k) for k in data.get("native_1q", ["rz", "sx", "x"])),
                native_2q=GateKind(data.get("native_2q", "cz")),
                edge_weights=weights,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(str(exc), "target") from None

    @classmethod
    def from_json(cls, text: str) -> "Target":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


# 27-qubit heavy-hex patch (two full hexagonal cells plus the tails of the
# neighbouring ones); every qubit has degree <= 3
_HEAVY_HEX_27 = (
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10),
    (8, 9), (8, 11), (10, 12), (11, 14), (12, 13), (12, 15), (13, 14), (14, 16),
    (15, 18), (16, 19), (17, 18), (18, 21), (19, 20), (19, 22), (21, 23), (22, 25),
    (23, 24), (24, 25), (25, 26),
)


def grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return edges


def square_lattice(name: str, rows: int, cols: int) -> Target:
    return Target(name, rows * cols, tuple(grid_edges(rows, cols)), PRX_BASIS)


def star(name: str, num_qubits: int) -> Target:
    """Qubit 0 is the hub; two-qubit gates only run through it."""
    return Target(name, num_qubits, tuple((0, q) for q in range(1, num_qubits)), PRX_BASIS)


def line(num_qubits: int, name: str | None = None) -> Target:
    return Target(name or f"LINE_{num_qubits}", num_qubits,
                  tuple((q, q + 1) for q in range(num_qubits - 1)), ZSX_BASIS)


def heavy_hex_patch() -> Target:
    return Target("HERON_PATCH", 27, _HEAVY_HEX_27, ZSX_BASIS)


def builtin_targets() -> dict[str, Target]:
    targets = [
        heavy_hex_patch(),
        square_lattice("SQUARE_20", 4, 5),
        square_lattice("SQUARE_54", 6, 9),
        star("STAR_24", 24),
        line(5),
    ]
    return {t.name: t for t in targets}


def get_target(name: str) -> Target:
    table = builtin_targets()
    if name in table:
        return table[name]
    if name.upper().startswith("LINE_"):
        return line(int(name.split("_", 1)[1]))
    raise KeyError(f"unknown target {name!r}; builtin: {', '.join(table)}")
