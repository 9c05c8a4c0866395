import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightsout_grover.circuit import (
    Circuit,
    Gate,
    GateKind,
    append,
    from_json,
    gate,
    inverse,
    layers,
    stats,
    to_json,
)
from lightsout_grover.errors import (
    ArityMismatch,
    ContainsMeasurement,
    DuplicateQubit,
    IndexOutOfRange,
    MidCircuitMeasurement,
    ParseError,
)
from lightsout_grover.statevector import basis_outputs, equivalent, unitary

UNITARY_KINDS = [k for k in GateKind if k not in (GateKind.MEASURE, GateKind.BARRIER)]


def test_append_single_gate():
    c = append(Circuit.empty(2), gate("h", 0))
    assert c.stats().size == 1


def test_duplicate_qubit_rejected():
    with pytest.raises(ArityMismatch):
        append(Circuit.empty(2), gate("cx", 0, 0))
    with pytest.raises(DuplicateQubit):
        gate("cx", 1, 1)


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        append(Circuit.empty(2), gate("x", 2))


def test_arity_and_params_checked():
    with pytest.raises(ArityMismatch):
        gate("ccx", 0, 1)
    with pytest.raises(ArityMismatch):
        gate("rz", 0)
    with pytest.raises(ArityMismatch):
        gate("h", 0, params=[0.1])


def test_no_gate_after_measurement():
    with pytest.raises(MidCircuitMeasurement):
        Circuit(1).measure([0]).append(gate("x", 0))


def test_stats_empty():
    s = stats(Circuit.empty(3))
    assert (s.depth, s.size, s.two_qubit_ops) == (0, 0, 0)


def test_stats_hand_layering():
    c = Circuit(2, (gate("h", 0), gate("x", 1), gate("cx", 0, 1)))
    s = stats(c)
    assert (s.depth, s.size, s.two_qubit_ops) == (2, 3, 1)


def test_barrier_and_measure_not_counted():
    c = Circuit(2, (gate("h", 0),)).barrier().append(gate("x", 1)).measure([0, 1])
    s = stats(c)
    assert s.size == 2
    assert s.depth == 2
    assert sum(s.histogram.values()) == s.size


def test_swap_counts_as_one_two_qubit_op():
    assert stats(Circuit(2, (gate("swap", 0, 1),))).two_qubit_ops == 1


def test_inverse_examples():
    assert inverse(Circuit(1, (gate("h", 0),))).gates == (gate("h", 0),)
    c = Circuit(2, (gate("rz", 0, params=[0.3]), gate("cx", 0, 1)))
    assert inverse(c).gates == (gate("cx", 0, 1), gate("rz", 0, params=[-0.3]))


def test_inverse_rejects_measurement():
    with pytest.raises(ContainsMeasurement):
        inverse(Circuit(1).measure([0]))


def test_rccx_inverse_cancels():
    block = Circuit(3, (gate("rccx", 0, 1, 2),))
    both = block.compose(inverse(block))
    assert inverse(block).gates[0].kind is GateKind.RCCX_DG
    np.testing.assert_allclose(basis_outputs(both, range(8)), np.eye(8), atol=1e-12)


def test_rccx_equals_ccx_as_permutation():
    u = unitary(Circuit(3, (gate("rccx", 0, 1, 2),)))
    v = unitary(Circuit(3, (gate("ccx", 0, 1, 2),)))
    np.testing.assert_allclose(np.abs(u), np.abs(v), atol=1e-12)


def test_sat_round_trip(sat_circuit):
    assert from_json(to_json(sat_circuit)) == sat_circuit


def test_mobius_round_trip_keeps_stats(mobius_circuit):
    again = from_json(to_json(mobius_circuit))
    assert again.stats() == mobius_circuit.stats()
    assert again.stats().histogram["ccx"] == 3


@pytest.mark.parametrize("text, field", [
    ('{"num_qubits": 1, "gates": [{"kind": "foo", "qubits": [0]}]}', "gates[0].kind"),
    ('{"num_qubits": 1, "gates": [{"kind": "cx", "qubits": [0]}]}', "gates[0]"),
    ('{"gates": []}', "num_qubits"),
    ('{"num_qubits": 1, "gates": [}', "line 1"),
])
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(ParseError) as info:
        from_json(text)
    assert field in str(info.value)


def test_json_schema_shape(sanity_circuit):
    data = json.loads(to_json(sanity_circuit))
    assert set(data) == {"num_qubits", "gates", "measured_qubits"}
    assert all(g["kind"] == g["kind"].lower() for g in data["gates"])


@st.composite
def circuits(draw, max_qubits=5, max_gates=25, measured=True):
    n = draw(st.integers(3, max_qubits))
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        kind = draw(st.sampled_from(UNITARY_KINDS + [GateKind.BARRIER]))
        arity = kind.arity or draw(st.integers(1, n))
        qubits = draw(st.permutations(range(n)))[:arity]
        params = draw(st.lists(st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False),
                               min_size=kind.num_params, max_size=kind.num_params))
        gates.append(Gate(kind, tuple(qubits), tuple(params)))
    c = Circuit(n, tuple(gates))
    if measured:
        c = c.measure(draw(st.permutations(range(n)))[:draw(st.integers(0, n))])
    return c


@settings(max_examples=1000, deadline=None)
@given(circuits())
def test_json_round_trip_fuzz(c):
    assert from_json(to_json(c)) == c


@settings(max_examples=200, deadline=None)
@given(circuits())
def test_layers_respect_per_qubit_order(c):
    order = [i for layer in layers(c) for i in layer]
    for layer in layers(c):
        used = [q for i in layer for q in c.gates[i].qubits]
        assert len(used) == len(set(used))
    for q in range(c.num_qubits):
        expected = [i for i, g in enumerate(c.gates)
                    if q in g.qubits and g.kind not in (GateKind.BARRIER, GateKind.MEASURE)]
        assert [i for i in order if q in c.gates[i].qubits] == expected


@settings(max_examples=100, deadline=None)
@given(circuits(measured=False, max_gates=12))
def test_inverse_preserves_stats_and_undoes(c):
    inv = inverse(c)
    assert stats(inv).size == stats(c).size
    assert stats(inv).depth == stats(c).depth
    assert equivalent(c.compose(inv), Circuit(c.num_qubits)).equal
