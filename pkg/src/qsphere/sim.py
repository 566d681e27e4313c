"""Dense statevector and density-matrix simulation of few-qubit circuits.

Qubit index convention: qubit 0 is the MOST significant bit of the basis
index, so on two qubits the basis order is |00>, |01>, |10>, |11> and a
gate on qubit 0 acts on the leading bit.  Global phase is never
normalized away.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, ConfigurationError

MAX_STATEVECTOR_QUBITS = 14
MAX_DENSITY_QUBITS = 8

RX = "RX"
RY = "RY"
RZ = "RZ"
CNOT = "CNOT"
GENERAL_1Q = "GENERAL_1Q"

PAULI_ROTATIONS = (RX, RY, RZ)


@dataclass(frozen=True)
class Gate:
    """A single circuit element.

    params: RX/RY/RZ take one angle, GENERAL_1Q takes (alpha, beta, gamma),
    CNOT takes none.  ``trainable`` marks gates whose angle is bound at
    run time from the parameter vector.
    """

    kind: str
    target: int
    control: int | None = None
    params: tuple[float, ...] = ()
    trainable: bool = False

    def matrix(self, params: tuple[float, ...] | None = None) -> np.ndarray:
        p = self.params if params is None else tuple(params)
        if self.kind == RY:
            (theta,) = p
            c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == RX:
            (theta,) = p
            c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if self.kind == RZ:
            (theta,) = p
            return np.array(
                [[np.exp(-1j * theta / 2.0), 0.0], [0.0, np.exp(1j * theta / 2.0)]],
                dtype=complex,
            )
        if self.kind == GENERAL_1Q:
            return general_1q_matrix(*p)
        raise ConfigurationError(f"gate kind {self.kind!r} has no 2x2 matrix")


def general_1q_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """General parametric single-qubit unitary from three angles."""
    c, s = np.cos(gamma / 2.0), np.sin(gamma / 2.0)
    return np.array(
        [
            [np.exp(1j * (alpha + beta)) * c, -np.exp(1j * (alpha - beta)) * s],
            [np.exp(-1j * (alpha - beta)) * s, np.exp(-1j * (alpha + beta)) * c],
        ],
        dtype=complex,
    )


@dataclass
class Circuit:
    """Ordered gate list over a fixed register width."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check_gate(g)

    def _check_gate(self, gate: Gate) -> None:
        if not 0 <= gate.target < self.num_qubits:
            raise ConfigurationError(
                f"gate target {gate.target} out of range for {self.num_qubits} qubits"
            )
        if gate.control is not None:
            if not 0 <= gate.control < self.num_qubits:
                raise ConfigurationError(
                    f"gate control {gate.control} out of range for {self.num_qubits} qubits"
                )
            if gate.control == gate.target:
                raise ConfigurationError("control and target must differ")

    def add(self, gate: Gate) -> None:
        self._check_gate(gate)
        self.gates.append(gate)

    @property
    def trainable_index_map(self) -> list[int]:
        return [i for i, g in enumerate(self.gates) if g.trainable]

    @property
    def num_params(self) -> int:
        return len(self.trainable_index_map)


@dataclass
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def copy(self) -> "Statevector":
        return Statevector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass
class DensityMatrix:
    num_qubits: int
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.num_qubits, self.entries.copy())


@dataclass(frozen=True)
class NoiseSpec:
    """Global depolarizing channel applied once after every gate."""

    depolarization_rate: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.depolarization_rate <= 1.0:
            raise ConfigurationError(
                f"depolarization rate must lie in [0, 1], got {self.depolarization_rate}"
            )


def new_zero_state(num_qubits: int) -> Statevector:
    if not 1 <= num_qubits <= MAX_STATEVECTOR_QUBITS:
        raise ConfigurationError(
            f"qubit count must lie in [1, {MAX_STATEVECTOR_QUBITS}], got {num_qubits}"
        )
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return Statevector(num_qubits, amps)


def statevector_from_amplitudes(num_qubits: int, amplitudes: np.ndarray) -> Statevector:
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (2**num_qubits,):
        raise ConfigurationError(
            f"expected {2**num_qubits} amplitudes, got shape {amplitudes.shape}"
        )
    return Statevector(num_qubits, amplitudes.copy())


# ---------------------------------------------------------------------------
# batched kernels: `amps` may carry arbitrary leading batch axes, the last
# axis is the 2**q statevector.


def _apply_1q_batched(amps: np.ndarray, mat: np.ndarray, target: int, num_qubits: int) -> np.ndarray:
    left = 2**target
    right = 2 ** (num_qubits - target - 1)
    lead = amps.shape[:-1]
    a = amps.reshape((-1, left, 2, right))
    a = np.einsum("ij,aljr->alir", mat, a)
    return a.reshape(lead + (2**num_qubits,))


def _apply_cnot_batched(amps: np.ndarray, control: int, target: int, num_qubits: int) -> np.ndarray:
    lead = amps.shape[:-1]
    nlead = len(lead)
    a = amps.reshape(lead + (2,) * num_qubits).copy()
    sl = [slice(None)] * a.ndim
    sl[nlead + control] = 1
    t_axis = nlead + target
    if target > control:
        t_axis -= 1  # the control axis is consumed by the integer index
    a[tuple(sl)] = np.flip(a[tuple(sl)], axis=t_axis)
    return a.reshape(lead + (2**num_qubits,))


def apply_gate_batched(
    amps: np.ndarray,
    gate: Gate,
    num_qubits: int,
    params: tuple[float, ...] | None = None,
) -> np.ndarray:
    """Apply one gate to a batch of statevectors (last axis = amplitudes)."""
    if not 0 <= gate.target < num_qubits:
        raise ConfigurationError(f"gate target {gate.target} out of range")
    if gate.kind == CNOT:
        if gate.control is None:
            raise ConfigurationError("CNOT requires a control qubit")
        if not 0 <= gate.control < num_qubits or gate.control == gate.target:
            raise ConfigurationError("invalid CNOT control index")
        return _apply_cnot_batched(amps, gate.control, gate.target, num_qubits)
    return _apply_1q_batched(amps, gate.matrix(params), gate.target, num_qubits)


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    amps = apply_gate_batched(state.amplitudes, gate, state.num_qubits)
    return Statevector(state.num_qubits, amps)


def bind_params(circuit: Circuit, params: np.ndarray) -> list[tuple[float, ...] | None]:
    """Per-gate parameter tuples with trainable slots bound from `params`."""
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.num_params,):
        raise ConfigurationError(
            f"expected {circuit.num_params} parameters, got shape {params.shape}"
        )
    bound: list[tuple[float, ...] | None] = [None] * len(circuit.gates)
    for k, pos in enumerate(circuit.trainable_index_map):
        bound[pos] = (float(params[k]),)
    return bound


def run_circuit_batched(circuit: Circuit, amps: np.ndarray, params: np.ndarray) -> np.ndarray:
    bound = bind_params(circuit, params)
    for gate, p in zip(circuit.gates, bound):
        amps = apply_gate_batched(amps, gate, circuit.num_qubits, p)
    return amps


def run_circuit(circuit: Circuit, state: Statevector, params: np.ndarray) -> Statevector:
    if state.num_qubits != circuit.num_qubits:
        raise ConfigurationError("statevector width does not match circuit")
    amps = run_circuit_batched(circuit, state.amplitudes, params)
    return Statevector(circuit.num_qubits, amps)


def _z_signs(num_qubits: int, qubit: int) -> np.ndarray:
    if not 0 <= qubit < num_qubits:
        raise ConfigurationError(f"qubit {qubit} out of range")
    idx = np.arange(2**num_qubits)
    bits = (idx >> (num_qubits - 1 - qubit)) & 1
    return 1.0 - 2.0 * bits


def expval_pauli_z(state: Statevector, qubit: int) -> float:
    probs = np.abs(state.amplitudes) ** 2
    return float(np.dot(probs, _z_signs(state.num_qubits, qubit)))


def expval_pauli_z_batched(amps: np.ndarray, num_qubits: int) -> np.ndarray:
    """Per-qubit <Z> for a batch: amps (..., 2**q) -> (..., q)."""
    probs = np.abs(amps) ** 2
    signs = np.stack([_z_signs(num_qubits, j) for j in range(num_qubits)], axis=-1)
    return probs @ signs


# ---------------------------------------------------------------------------
# density-matrix path


def density_from_statevector(state: Statevector) -> DensityMatrix:
    if state.num_qubits > MAX_DENSITY_QUBITS:
        raise CapabilityError(
            f"density-matrix path limited to {MAX_DENSITY_QUBITS} qubits"
        )
    v = state.amplitudes
    return DensityMatrix(state.num_qubits, np.outer(v, v.conj()))


def _conjugate_gate(rho: np.ndarray, gate: Gate, num_qubits: int, params) -> np.ndarray:
    # U rho U^dag via two column-wise applications: col(M) = U M, and
    # rho' = col(col(rho)^dag)^dag.
    def col_apply(m: np.ndarray) -> np.ndarray:
        return apply_gate_batched(m.T, gate, num_qubits, params).T

    half = col_apply(rho)
    return col_apply(half.conj().T).conj().T


def run_circuit_noisy(
    circuit: Circuit,
    rho: DensityMatrix,
    params: np.ndarray,
    noise: NoiseSpec,
) -> DensityMatrix:
    """Gate-by-gate evolution with a global depolarizing channel after each gate."""
    if circuit.num_qubits > MAX_DENSITY_QUBITS:
        raise CapabilityError(
            f"density-matrix path limited to {MAX_DENSITY_QUBITS} qubits"
        )
    if rho.num_qubits != circuit.num_qubits:
        raise ConfigurationError("density matrix width does not match circuit")
    p = noise.depolarization_rate
    dim = rho.dim
    maximally_mixed = np.eye(dim, dtype=complex) / dim
    m = rho.entries.copy()
    bound = bind_params(circuit, params)
    for gate, gp in zip(circuit.gates, bound):
        m = _conjugate_gate(m, gate, circuit.num_qubits, gp)
        if p > 0.0:
            m = (1.0 - p) * m + p * maximally_mixed
    return DensityMatrix(circuit.num_qubits, m)


def expval_observable(rho: DensityMatrix, observable: np.ndarray) -> float:
    val = np.trace(observable @ rho.entries)
    return float(val.real)


def pauli_z_matrix(num_qubits: int, qubit: int) -> np.ndarray:
    return np.diag(_z_signs(num_qubits, qubit)).astype(complex)


def sample_shots(state: Statevector, shots: int, seed: int) -> dict[int, int]:
    """Seeded basis-state measurement histogram (nonzero counts only)."""
    if shots < 1:
        raise ConfigurationError("shots must be >= 1")
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {int(i): int(c) for i, c in enumerate(counts) if c > 0}
