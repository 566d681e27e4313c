"""The four parameterized circuit families used in the ablation studies.

Every family stacks D layers of one trainable RY per qubit followed by a
family-specific CNOT pattern:

  DC  -- brickwall: even layers entangle pairs (0,1),(2,3),...; odd layers
         (1,2),(3,4),...  (alternating adjacent pairs).
  RAC -- linear chain CNOT(i -> i+1) in every layer.
  LC  -- linear chain plus a ring-closing CNOT(q-1 -> 0) in every layer;
         the closure is non-adjacent for q > 2.
  BC  -- disjoint pairs (0,1),(2,3),... in every layer.

Parameter layout is layer-major then qubit-major, so P = q * D for all
families.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sim
from .errors import ConfigurationError

FAMILIES = ("DC", "RAC", "BC", "LC")


@dataclass(frozen=True)
class AnsatzSpec:
    family: str
    num_qubits: int
    depth: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(
                f"unknown ansatz family {self.family!r}; choose from {FAMILIES}"
            )
        if self.num_qubits < 2:
            raise ConfigurationError("ansatz needs at least 2 qubits")
        if self.depth < 1:
            raise ConfigurationError("ansatz depth must be >= 1")


def param_count(spec: AnsatzSpec) -> int:
    return spec.num_qubits * spec.depth


def _entangler_pairs(family: str, layer: int, q: int) -> list[tuple[int, int]]:
    if family == "DC":
        start = layer % 2
        return [(i, i + 1) for i in range(start, q - 1, 2)]
    if family == "RAC":
        return [(i, i + 1) for i in range(q - 1)]
    if family == "BC":
        return [(i, i + 1) for i in range(0, q - 1, 2)]
    if family == "LC":
        return [(i, i + 1) for i in range(q - 1)] + [(q - 1, 0)]
    raise ConfigurationError(f"unknown family {family!r}")


def build_ansatz(spec: AnsatzSpec) -> sim.Circuit:
    circuit = sim.Circuit(spec.num_qubits)
    for layer in range(spec.depth):
        for qubit in range(spec.num_qubits):
            circuit.add(sim.Gate(sim.RY, target=qubit, params=(0.0,), trainable=True))
        for control, target in _entangler_pairs(spec.family, layer, spec.num_qubits):
            circuit.add(sim.Gate(sim.CNOT, target=target, control=control))
    return circuit
