"""Initial layout and SWAP routing on a coupling graph."""
from __future__ import annotations

import itertools
from collections import Counter, deque
from enum import Enum
from typing import Sequence

import numpy as np

from ..circuit import Circuit, Gate, GateKind
from ..errors import CircuitTooWide, UnsupportedGate
from .decompose import lower_1q, swap_to_cz
from .report import TranspileReport
from .targets import Target

DEFAULT_LOOKAHEAD = 20
_DECAY_STEP = 0.001
_EXTENDED_WEIGHT = 0.5


class LayoutHeuristic(str, Enum):
    TRIVIAL = "trivial"
    GREEDY_DISTANCE = "greedy_distance"


def interaction_weights(circuit: Circuit) -> Counter:
    """Count of multi-qubit gates per unordered logical pair."""
    w: Counter = Counter()
    for g in circuit.gates:
        if g.kind in (GateKind.BARRIER, GateKind.MEASURE) or g.arity < 2:
            continue
        for a, b in itertools.combinations(sorted(g.qubits), 2):
            w[(a, b)] += 1
    return w


def _grow_region(target: Target, root: int, size: int, dist: np.ndarray) -> list[int] | None:
    region = [root]
    inside = {root}
    while len(region) < size:
        frontier = {nb for q in region for nb in target.neighbors(q)} - inside
        if not frontier:
            return None
        best = min(frontier, key=lambda c: (
            -sum(1 for nb in target.neighbors(c) if nb in inside), dist[root, c], c))
        region.append(best)
        inside.add(best)
    return region


def _place(n: int, weights: Counter, region: list[int], dist: np.ndarray) -> list[int]:
    total = Counter()
    for (a, b), w in weights.items():
        total[a] += w
        total[b] += w
    layout: dict[int, int] = {}
    free = list(region)
    pending = sorted(range(n), key=lambda q: (-total[q], q))
    while pending:
        if layout:
            def pull(q):
                return sum(w for (a, b), w in weights.items()
                           if (a == q and b in layout) or (b == q and a in layout))
            logical = max(pending, key=lambda q: (pull(q), total[q], -q))
        else:
            logical = pending[0]
        pending.remove(logical)
        if not layout:
            degree = {p: sum(1 for r in region if dist[p, r] == 1) for p in free}
            phys = min(free, key=lambda p: (-degree[p], p))
        else:
            def cost(p):
                c = 0.0
                for (a, b), w in weights.items():
                    other = b if a == logical else a if b == logical else None
                    if other is not None and other in layout:
                        c += w * dist[p, layout[other]]
                return c
            phys = min(free, key=lambda p: (cost(p), p))
        layout[logical] = phys
        free.remove(phys)
    return [layout[q] for q in range(n)]


def greedy_layout(circuit: Circuit, target: Target) -> list[int]:
    """Choose a connected patch of the device and place busy pairs close together.

    Every qubit seeds one candidate patch grown by adjacency; logical qubits
    are placed heaviest-first next to their already placed partners. The
    patch with the lowest weighted interaction distance wins.
    """
    n = circuit.num_qubits
    weights = interaction_weights(circuit)
    full = target.distances()
    best, best_cost = None, None
    for root in range(target.num_qubits):
        region = _grow_region(target, root, n, full)
        if region is None:
            continue
        dist = target.distances(region)
        layout = _place(n, weights, region, dist)
        cost = sum(w * dist[layout[a], layout[b]] for (a, b), w in weights.items())
        if best_cost is None or cost < best_cost - 1e-9:
            best, best_cost = layout, cost
    if best is None:  # pragma: no cover - connected targets always admit a patch
        return list(range(n))
    return best


def choose_layout(circuit: Circuit, target: Target, heuristic: LayoutHeuristic) -> list[int]:
    if circuit.num_qubits > target.num_qubits:
        raise CircuitTooWide(
            f"circuit needs {circuit.num_qubits} qubits, {target.name} has {target.num_qubits}")
    if LayoutHeuristic(heuristic) is LayoutHeuristic.TRIVIAL:
        return list(range(circuit.num_qubits))
    return greedy_layout(circuit, target)


def _shortest_path(target: Target, region: set[int], src: int, dst: int) -> list[int]:
    prev = {src: None}
    todo = deque([src])
    while todo:
        q = todo.popleft()
        if q == dst:
            break
        for nb in target.neighbors(q):
            if nb in region and nb not in prev:
                prev[nb] = q
                todo.append(nb)
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def route(circuit: Circuit, target: Target, layout: Sequence[int],
          lookahead: int = DEFAULT_LOOKAHEAD, seed: int = 0) -> tuple[Circuit, list[int], int]:
    """Insert SWAPs so every two-qubit gate lands on a coupling edge.

    Returns the physical circuit (SWAPs kept as SWAP gates), the final
    logical-to-physical layout and the number of SWAPs inserted. With
    ``lookahead=0`` each blocked gate is simply walked along a shortest
    path; otherwise candidate SWAPs are scored by the distance of the
    blocked gates plus the next ``lookahead`` two-qubit gates. Routing
    stays inside the initially occupied qubits when they form a connected
    patch, otherwise it may use the whole device. Measurements move to
    the end, on the final positions of the measured qubits.
    """
    for g in circuit.gates:
        if g.kind not in (GateKind.BARRIER,) and g.arity > 2:
            raise UnsupportedGate(f"route {g.kind.value} only after decomposition")
    rng = np.random.default_rng(seed)
    gates = [g for g in circuit.gates if g.kind is not GateKind.MEASURE]
    l2p = list(layout)
    p2l = {p: i for i, p in enumerate(l2p)}
    region = set(l2p) if target.is_connected(l2p) else set(range(target.num_qubits))
    dist = target.distances(region)
    region_edges = [(a, b) for a, b in target.edges if a in region and b in region]

    # dependency graph over the gate list
    succ: list[set[int]] = [set() for _ in gates]
    last: dict[int, int] = {}
    for i, g in enumerate(gates):
        for q in g.qubits:
            if q in last:
                succ[last[q]].add(i)
            last[q] = i
    indeg = [0] * len(gates)
    for s in succ:
        for j in s:
            indeg[j] += 1

    front = sorted(i for i in range(len(gates)) if indeg[i] == 0)
    done = [False] * len(gates)
    cursor = 0
    out: list[Gate] = []
    decay = {p: 1.0 for p in region}
    swaps = 0
    stalled = 0

    def executable(g: Gate) -> bool:
        if g.arity != 2 or g.kind is GateKind.BARRIER:
            return True
        a, b = (l2p[q] for q in g.qubits)
        return target.has_edge(a, b)

    def apply_swap(p: int, q: int) -> None:
        nonlocal swaps
        la, lb = p2l.get(p), p2l.get(q)
        if la is not None:
            l2p[la] = q
        if lb is not None:
            l2p[lb] = p
        p2l.pop(p, None)
        p2l.pop(q, None)
        if la is not None:
            p2l[q] = la
        if lb is not None:
            p2l[p] = lb
        out.append(Gate(GateKind.SWAP, (p, q)))
        swaps += 1

    while front:
        progressed = True
        while progressed:
            progressed = False
            keep = []
            for i in front:
                g = gates[i]
                if executable(g):
                    out.append(g.remap(l2p))
                    done[i] = True
                    progressed = True
                    for s in sorted(succ[i]):
                        indeg[s] -= 1
                        if indeg[s] == 0:
                            keep.append(s)
                else:
                    keep.append(i)
            front = sorted(keep)
        if not front:
            break
        if stalled == 0:
            for p in decay:
                decay[p] = 1.0

        blocked = [gates[i].qubits for i in front]
        while cursor < len(gates) and done[cursor]:
            cursor += 1
        extended = []
        in_front = set(front)
        for j in range(cursor, len(gates)):
            if len(extended) >= lookahead:
                break
            g = gates[j]
            if not done[j] and j not in in_front and g.arity == 2 and g.kind is not GateKind.BARRIER:
                extended.append(g.qubits)

        if lookahead <= 0 or stalled > 2 * len(region) + 10:
            # no lookahead (or a livelock): walk the first blocked pair together
            a, b = (l2p[q] for q in blocked[0])
            path = _shortest_path(target, region, a, b)
            for k in range(len(path) - 2):
                apply_swap(path[k], path[k + 1])
            stalled = 0
            continue

        touched = {l2p[q] for pair in blocked for q in pair}
        candidates = [e for e in region_edges if e[0] in touched or e[1] in touched]
        best_score, best = None, []
        for p, q in candidates:
            def pos(lq):
                x = l2p[lq]
                return q if x == p else p if x == q else x
            score = sum(dist[pos(a), pos(b)] for a, b in blocked) / len(blocked)
            if extended:
                score += _EXTENDED_WEIGHT * sum(dist[pos(a), pos(b)]
                                                for a, b in extended) / len(extended)
            score *= max(decay[p], decay[q])
            if best_score is None or score < best_score - 1e-9:
                best_score, best = score, [(p, q)]
            elif abs(score - best_score) <= 1e-9:
                best.append((p, q))
        p, q = best[int(rng.integers(len(best)))] if len(best) > 1 else best[0]
        apply_swap(p, q)
        decay[p] += _DECAY_STEP
        decay[q] += _DECAY_STEP
        stalled += 1

    measured = tuple(l2p[q] for q in circuit.measured_qubits)
    out += [Gate(GateKind.MEASURE, (p,)) for p in measured]
    return Circuit(target.num_qubits, tuple(out), measured), l2p, swaps


def lower_swaps(circuit: Circuit, target: Target) -> Circuit:
    gates: list[Gate] = []
    for g in circuit.gates:
        gates += swap_to_cz(*g.qubits) if g.kind is GateKind.SWAP else [g]
    return Circuit(circuit.num_qubits, tuple(lower_1q(gates, target.native_1q)),
                   circuit.measured_qubits)


def _reversed(circuit: Circuit) -> Circuit:
    return Circuit(circuit.num_qubits, tuple(reversed(circuit.without_measurements().gates)))


def refine_layout(circuit: Circuit, target: Target, layout: Sequence[int],
                  rounds: int, lookahead: int, seed: int) -> list[int]:
    """Forward/backward routing passes; each pass starts where the last ended."""
    back = _reversed(circuit)
    layout = list(layout)
    for _ in range(rounds):
        _, end, _ = route(circuit, target, layout, lookahead, seed)
        _, layout, _ = route(back, target, end, lookahead, seed)
    return layout


def layout_and_route(circuit: Circuit, target: Target,
                     heuristic: LayoutHeuristic = LayoutHeuristic.GREEDY_DISTANCE,
                     lookahead: int = DEFAULT_LOOKAHEAD,
                     seed: int = 0, trials: int = 1,
                     refine_rounds: int = 0) -> tuple[Circuit, TranspileReport]:
    """Place and route ``circuit``; inserted SWAPs come out as native gates.

    With ``trials > 1`` routing is repeated with seeds ``seed .. seed +
    trials - 1`` (each optionally preceded by ``refine_rounds`` of layout
    refinement) and the run with the fewest SWAPs is kept.
    """
    layout = choose_layout(circuit, target, heuristic)
    best = None
    for k in range(max(1, trials)):
        start = layout
        if refine_rounds:
            start = refine_layout(circuit, target, layout, refine_rounds, lookahead, seed + k)
        routed, final, swaps = route(circuit, target, start, lookahead, seed + k)
        if best is None or swaps < best[3]:
            best = (start, routed, final, swaps)
    layout, routed, final, swaps = best
    emitted = lower_swaps(routed, target)
    return emitted, TranspileReport.from_circuit(emitted, layout, final, swaps, target.name)
