"""Classical Lights Out on graphs: instances, click semantics and solvers.

Bit vectors are tuples of 0/1 indexed by lamp. A click toggles the
neighbours of the clicked lamp, and the lamp itself when the rule is
reflexive.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InstanceError, LengthMismatch, OddOrTooSmall, ParseError, TooLarge, ZeroDimension

Bits = tuple[int, ...]

MAX_GF2_LAMPS = 24


@dataclass(frozen=True)
class ToggleRule:
    reflexive: bool


REFLEXIVE = ToggleRule(True)
NON_REFLEXIVE = ToggleRule(False)


def _bits(values: Iterable[int], n: int | None = None) -> Bits:
    out = tuple(int(v) & 1 for v in values)
    if n is not None and len(out) != n:
        raise LengthMismatch(f"expected {n} bits, got {len(out)}")
    return out


def bits_from_set(on: Iterable[int], n: int) -> Bits:
    on = set(on)
    return tuple(1 if i in on else 0 for i in range(n))


@dataclass(frozen=True)
class LightsOutInstance:
    num_lamps: int
    adjacency: tuple[frozenset[int], ...]
    rule: ToggleRule
    initial_config: Bits

    def __post_init__(self):
        n = self.num_lamps
        adj = tuple(frozenset(int(v) for v in nb) for nb in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "initial_config", _bits(self.initial_config, n))
        if len(adj) != n:
            raise InstanceError("adjacency must list every lamp")
        for a, nb in enumerate(adj):
            if a in nb:
                raise InstanceError(f"lamp {a} has a self-loop; use a reflexive rule")
            for b in nb:
                if not 0 <= b < n or a not in adj[b]:
                    raise InstanceError(f"edge {a}-{b} is not symmetric")

    def neighbors(self, lamp: int) -> frozenset[int]:
        return self.adjacency[lamp]

    def effect_set(self, lamp: int) -> frozenset[int]:
        """Lamps toggled by clicking ``lamp``."""
        nb = self.adjacency[lamp]
        return nb | {lamp} if self.rule.reflexive else nb

    def effect_matrix(self) -> np.ndarray:
        """GF(2) matrix whose column ``a`` is the effect vector of lamp ``a``."""
        a = np.zeros((self.num_lamps, self.num_lamps), dtype=np.uint8)
        for lamp in range(self.num_lamps):
            for t in self.effect_set(lamp):
                a[t, lamp] = 1
        return a

    def with_initial(self, config: Sequence[int]) -> "LightsOutInstance":
        return LightsOutInstance(self.num_lamps, self.adjacency, self.rule, tuple(config))

    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, nb in enumerate(self.adjacency) for b in nb if a < b)

    def to_dict(self) -> dict:
        return {
            "num_lamps": self.num_lamps,
            "edges": [list(e) for e in self.edges()],
            "reflexive": self.rule.reflexive,
            "initial": "".join(str(b) for b in self.initial_config),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "LightsOutInstance":
        try:
            n = int(data["num_lamps"])
            adj = [set() for _ in range(n)]
            for a, b in data.get("edges", []):
                adj[a].add(b)
                adj[b].add(a)
            initial = data.get("initial", "0" * n)
            if not isinstance(initial, str) or set(initial) - {"0", "1"}:
                raise ParseError("must be a bitstring", "initial")
            return cls(n, tuple(frozenset(s) for s in adj),
                       ToggleRule(bool(data.get("reflexive", True))),
                       tuple(int(c) for c in initial))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), "instance") from None

    @classmethod
    def from_json(cls, text: str) -> "LightsOutInstance":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def build_grid(rows: int, cols: int, initial: Sequence[int] | None = None) -> LightsOutInstance:
    """Reflexive grid; lamp ``r * cols + c`` sits at row ``r``, column ``c``."""
    if rows < 1 or cols < 1:
        raise ZeroDimension(f"grid {rows}x{cols} has no lamps")
    n = rows * cols
    adj = []
    for r in range(rows):
        for c in range(cols):
            nb = set()
            if r > 0:
                nb.add((r - 1) * cols + c)
            if r < rows - 1:
                nb.add((r + 1) * cols + c)
            if c > 0:
                nb.add(r * cols + c - 1)
            if c < cols - 1:
                nb.add(r * cols + c + 1)
            adj.append(frozenset(nb))
    return LightsOutInstance(n, tuple(adj), REFLEXIVE,
                             tuple(initial) if initial is not None else (0,) * n)


def build_mobius(n: int, initial: Sequence[int] | None = None) -> LightsOutInstance:
    """Non-reflexive Möbius ladder: lamp ``a`` touches ``a±1`` and ``a+n/2`` (mod n)."""
    if n < 6 or n % 2:
        raise OddOrTooSmall(f"Möbius ladder needs an even n >= 6, got {n}")
    adj = tuple(frozenset({(a + 1) % n, (a - 1) % n, (a + n // 2) % n}) for a in range(n))
    return LightsOutInstance(n, adj, NON_REFLEXIVE,
                             tuple(initial) if initial is not None else (0,) * n)


def apply_clicks(instance: LightsOutInstance, clicks: Sequence[int]) -> Bits:
    clicks = _bits(clicks)
    if len(clicks) != instance.num_lamps:
        raise LengthMismatch(f"{len(clicks)} clicks for {instance.num_lamps} lamps")
    state = list(instance.initial_config)
    for lamp, pressed in enumerate(clicks):
        if pressed:
            for t in instance.effect_set(lamp):
                state[t] ^= 1
    return tuple(state)


def single_click_solutions(instance: LightsOutInstance) -> set[int]:
    """Lamps whose lone click switches every lamp off (exhaustive trial)."""
    n = instance.num_lamps
    return {a for a in range(n)
            if not any(apply_clicks(instance, bits_from_set({a}, n)))}


def _rref_gf2(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
    m = np.concatenate([a % 2, (b % 2).reshape(-1, 1)], axis=1).astype(np.uint8)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        hits = np.flatnonzero(m[r:, c])
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        for other in np.flatnonzero(m[:, c]):
            if other != r:
                m[other] ^= m[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:, :cols], m[:, cols], pivots


def solve_gf2(instance: LightsOutInstance) -> set[Bits]:
    """Every click vector ``x`` with ``A x = initial`` over GF(2).

    Gaussian elimination gives one particular solution; the null space of
    ``A`` is spanned from the free columns and added to it.
    """
    n = instance.num_lamps
    if n > MAX_GF2_LAMPS:
        raise TooLarge(f"{n} lamps exceeds the {MAX_GF2_LAMPS}-lamp enumeration limit")
    a = instance.effect_matrix()
    b = np.array(instance.initial_config, dtype=np.uint8)
    red, rhs, pivots = _rref_gf2(a, b)
    rank = len(pivots)
    if rhs[rank:].any():
        return set()
    particular = np.zeros(n, dtype=np.uint8)
    for row, c in enumerate(pivots):
        particular[c] = rhs[row]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for row, c in enumerate(pivots):
            v[c] = red[row, f]
        basis.append(v)
    out = set()
    for choice in itertools.product((0, 1), repeat=len(basis)):
        x = particular.copy()
        for use, v in zip(choice, basis):
            if use:
                x ^= v
        out.add(tuple(int(v) for v in x))
    return out


def solve_exhaustive(instance: LightsOutInstance) -> set[Bits]:
    n = instance.num_lamps
    if n > MAX_GF2_LAMPS:
        raise TooLarge(f"{n} lamps is too many for brute force")
    return {x for x in itertools.product((0, 1), repeat=n)
            if not any(apply_clicks(instance, x))}
