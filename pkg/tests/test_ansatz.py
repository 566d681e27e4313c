"""Circuit-family construction tests: parameter counts, entangler
patterns, and layer structure for all four families."""

import pytest

from qsphere import sim
from qsphere.ansatz import FAMILIES, AnsatzSpec, build_ansatz, param_count
from qsphere.errors import ConfigurationError


def cnot_pairs_by_layer(circuit: sim.Circuit, q: int, depth: int):
    """Split the gate list into layers (q rotations then the entanglers)."""
    layers = []
    i = 0
    for _ in range(depth):
        rotations = circuit.gates[i : i + q]
        assert all(g.kind == sim.RY and g.trainable for g in rotations)
        assert [g.target for g in rotations] == list(range(q))
        i += q
        pairs = []
        while i < len(circuit.gates) and circuit.gates[i].kind == sim.CNOT:
            g = circuit.gates[i]
            pairs.append((g.control, g.target))
            i += 1
        layers.append(pairs)
    assert i == len(circuit.gates)
    return layers


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("q,depth", [(2, 1), (3, 2), (4, 4), (5, 3)])
def test_param_count_is_qubits_times_depth(family, q, depth):
    spec = AnsatzSpec(family, q, depth)
    assert param_count(spec) == q * depth
    assert build_ansatz(spec).num_params == q * depth


def test_brickwall_alternates_even_and_odd_pairs():
    layers = cnot_pairs_by_layer(build_ansatz(AnsatzSpec("DC", 4, 4)), 4, 4)
    assert layers[0] == [(0, 1), (2, 3)]
    assert layers[1] == [(1, 2)]
    assert layers[2] == [(0, 1), (2, 3)]
    assert layers[3] == [(1, 2)]


def test_chain_family_entangles_all_adjacent_pairs():
    layers = cnot_pairs_by_layer(build_ansatz(AnsatzSpec("RAC", 4, 2)), 4, 2)
    assert layers == [[(0, 1), (1, 2), (2, 3)]] * 2


def test_pair_family_uses_disjoint_pairs_only():
    layers = cnot_pairs_by_layer(build_ansatz(AnsatzSpec("BC", 5, 2)), 5, 2)
    assert layers == [[(0, 1), (2, 3)]] * 2
    for pairs in layers:
        touched = [idx for pair in pairs for idx in pair]
        assert len(touched) == len(set(touched))


def test_ring_family_closes_the_chain():
    layers = cnot_pairs_by_layer(build_ansatz(AnsatzSpec("LC", 4, 1)), 4, 1)
    assert layers == [[(0, 1), (1, 2), (2, 3), (3, 0)]]


@pytest.mark.parametrize("family", FAMILIES)
def test_all_families_cover_every_qubit_with_rotations(family):
    q, depth = 5, 3
    circuit = build_ansatz(AnsatzSpec(family, q, depth))
    per_qubit = [0] * q
    for g in circuit.gates:
        if g.trainable:
            per_qubit[g.target] += 1
    assert per_qubit == [depth] * q


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        AnsatzSpec("XX", 4, 4)
    with pytest.raises(ConfigurationError):
        AnsatzSpec("DC", 1, 4)
    with pytest.raises(ConfigurationError):
        AnsatzSpec("DC", 4, 0)


def test_two_qubit_ring_equals_chain_plus_closure():
    layers = cnot_pairs_by_layer(build_ansatz(AnsatzSpec("LC", 2, 1)), 2, 1)
    assert layers == [[(0, 1), (1, 0)]]
