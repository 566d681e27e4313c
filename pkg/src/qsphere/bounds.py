"""Numeric evaluators for covering-number expressivity bounds and an
empirical gradient-variance probe for vanishing-gradient behaviour.

All covering-number bounds are computed and returned in natural-log space;
the raw values overflow floating point even for small circuits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ansatz as ansatz_mod
from . import encoding, gradients, sim
from .errors import ConfigurationError, DataError


@dataclass(frozen=True)
class QuantumBoundInputs:
    num_qubits: int
    num_params: int
    gate_locality: int
    norm_observable: float
    norm_center: float
    epsilon: float
    noise_rate: float | None = None
    noisy_gate_count: int | None = None

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 0.1:
            raise ConfigurationError(
                f"epsilon must lie in (0, 0.1], got {self.epsilon}"
            )
        if self.num_params < 1:
            raise ConfigurationError("parameter count must be >= 1")
        if self.norm_observable < 0 or self.norm_center < 0:
            raise ConfigurationError("norms must be >= 0")


@dataclass(frozen=True)
class ClassicalBoundInputs:
    layer_dims: tuple[tuple[int, int], ...]  # (input n_j, output m_j) per layer
    weight_inf_norms: tuple[float, ...]
    data_norm: float
    epsilon: float

    def __post_init__(self):
        if len(self.layer_dims) < 1:
            raise ConfigurationError("at least one layer required")
        if len(self.weight_inf_norms) != len(self.layer_dims):
            raise ConfigurationError("one weight norm per layer required")
        if any(n < 1 or m < 1 for n, m in self.layer_dims):
            raise ConfigurationError("layer dims must be >= 1")
        if any(w <= 0 for w in self.weight_inf_norms):
            raise ConfigurationError("weight norms must be > 0")


def quantum_bound_log(inputs: QuantumBoundInputs) -> float:
    """ln of the covering-number upper bound:
    q^{2m} P * ln(7 P (2||O|| + 2||c||) ||O|| / eps)."""
    prefactor = inputs.num_qubits ** (2 * inputs.gate_locality) * inputs.num_params
    inner = (
        7.0
        * inputs.num_params
        * (2.0 * inputs.norm_observable + 2.0 * inputs.norm_center)
        * inputs.norm_observable
        / inputs.epsilon
    )
    return prefactor * math.log(inner)


def quantum_bound_lower_log(inputs: QuantumBoundInputs) -> float:
    """ln of the lower bound on the supremum: q^{2m} P * ln(7 P ||O|| / eps)."""
    prefactor = inputs.num_qubits ** (2 * inputs.gate_locality) * inputs.num_params
    inner = 7.0 * inputs.num_params * inputs.norm_observable / inputs.epsilon
    return prefactor * math.log(inner)


def noisy_bound_log(inputs: QuantumBoundInputs) -> float:
    """ln of the noisy upper bound: N_g ln(1 - p) + noiseless bound."""
    p = inputs.noise_rate
    n_g = inputs.noisy_gate_count
    if p is None or n_g is None:
        raise ConfigurationError("noise_rate and noisy_gate_count are required")
    if not 0.0 <= p <= 1.0 or n_g < 0:
        raise ConfigurationError("noise rate in [0, 1] and gate count >= 0 required")
    if p == 1.0:
        return -math.inf
    return n_g * math.log(1.0 - p) + quantum_bound_log(inputs)


def layer_dim_product(layer_dims: tuple[tuple[int, int], ...]) -> int:
    """Exact product of m_j * n_j over the layers (integer arithmetic)."""
    prod = 1
    for n_j, m_j in layer_dims:
        prod *= n_j * m_j
    return prod


def classical_bound_log(inputs: ClassicalBoundInputs) -> float:
    """ln of the classical covering-number bound:
    [t^2 (ln 2 + 2 ln max(m_j n_j)) / eps^2] * prod_j m_j n_j ||W_j||_inf^2
    * (sum_i (sqrt(m_i)/sqrt(n_i))^{2/3})^3."""
    max_mn = max(n * m for n, m in inputs.layer_dims)
    lead = (
        inputs.data_norm**2
        * (math.log(2.0) + 2.0 * math.log(max_mn))
        / inputs.epsilon**2
    )
    log_total = math.log(lead)
    for (n_j, m_j), w in zip(inputs.layer_dims, inputs.weight_inf_norms):
        log_total += math.log(n_j * m_j) + 2.0 * math.log(w)
    ratio_sum = sum(
        (math.sqrt(m_j) / math.sqrt(n_j)) ** (2.0 / 3.0)
        for n_j, m_j in inputs.layer_dims
    )
    log_total += 3.0 * math.log(ratio_sum)
    return log_total


# ---------------------------------------------------------------------------
# empirical gradient-variance probe


@dataclass
class BpProbePoint:
    num_qubits: int
    num_params: int
    mean_abs_grad: float
    abs_mean_grad: float
    grad_variance: float
    sample_count: int


@dataclass
class BpProbeReport:
    family: str
    depth: int
    observable_qubit: int
    seed: int
    rotation_axes: str = "random"
    points: list[BpProbePoint] = field(default_factory=list)

    @property
    def log_variance_slope(self) -> float:
        """Least-squares slope of ln(variance) versus qubit count."""
        qs = np.array([p.num_qubits for p in self.points], dtype=float)
        logvar = np.log([p.grad_variance for p in self.points])
        slope, _ = np.polyfit(qs, logvar, 1)
        return float(slope)


def _randomize_axes(circuit: sim.Circuit, rng: np.random.Generator) -> sim.Circuit:
    """Replace each trainable rotation's axis with one drawn uniformly from
    {X, Y, Z}, keeping everything else about the circuit fixed."""
    kinds = rng.choice(list(sim.PAULI_ROTATIONS), size=circuit.num_params)
    trainable_pos = set(circuit.trainable_index_map)
    gates, k = [], 0
    for i, g in enumerate(circuit.gates):
        if i in trainable_pos:
            gates.append(
                sim.Gate(str(kinds[k]), g.target, g.control, g.params, trainable=True)
            )
            k += 1
        else:
            gates.append(g)
    return sim.Circuit(circuit.num_qubits, gates)


def bp_probe(
    family: str = "DC",
    q_range: tuple[int, ...] = (2, 3, 4, 5, 6),
    depth: int = 4,
    observable_qubit: int = 0,
    samples: int = 500,
    seed: int = 0,
    batch_size: int = 16,
    param_index: int = 0,
    rotation_axes: str = "random",
) -> BpProbeReport:
    """Sample the hypersphere-loss gradient at uniform random angles.

    For each qubit count, draw `samples` parameter vectors uniformly from
    [0, 2*pi)^P, and measure the parameter-shift gradient of
    L = mean_i (E(theta; x_i) - center)^2 with respect to one fixed
    parameter, where E is the Z-expectation on the observable qubit and the
    scalar `center` comes from a fixed reference batch evaluated at zero
    angles.  Reports per-q mean |grad|, |mean grad|, and variance across
    the samples.

    rotation_axes="random" (default) additionally redraws each trainable
    rotation's axis uniformly from {X, Y, Z} per sample, which makes the
    sampled family approximate a 2-design; rotation_axes="fixed" keeps the
    circuit's Y rotations.
    """
    if samples < 100:
        raise DataError("at least 100 samples per point are required")
    if rotation_axes not in ("random", "fixed"):
        raise ConfigurationError(
            f"rotation_axes must be 'random' or 'fixed', got {rotation_axes!r}"
        )
    report = BpProbeReport(family, depth, observable_qubit, seed, rotation_axes)
    for q in q_range:
        spec = ansatz_mod.AnsatzSpec(family, q, depth)
        base_circuit = ansatz_mod.build_ansatz(spec)
        p = ansatz_mod.param_count(spec)
        k = param_index % p
        rng = np.random.default_rng(seed + 1000 * q)
        # fixed reference batch of normalized random feature vectors
        feats = np.abs(rng.normal(size=(batch_size, 2**q))) + 1e-3
        states = encoding.amplitude_encode_batch(feats, q)

        def expvals(circuit: sim.Circuit, theta: np.ndarray) -> np.ndarray:
            out = sim.run_circuit_batched(circuit, states, theta)
            return sim.expval_pauli_z_batched(out, q)[:, observable_qubit]

        center = float(np.mean(expvals(base_circuit, np.zeros(p))))
        grads = np.empty(samples)
        for s in range(samples):
            if rotation_axes == "random":
                circuit = _randomize_axes(base_circuit, rng)
            else:
                circuit = base_circuit
            theta = rng.uniform(0.0, 2.0 * np.pi, size=p)
            e = expvals(circuit, theta)
            shifted = theta.copy()
            shifted[k] = theta[k] + gradients.SHIFT
            plus = expvals(circuit, shifted)
            shifted[k] = theta[k] - gradients.SHIFT
            minus = expvals(circuit, shifted)
            de = (plus - minus) / 2.0
            grads[s] = float(np.mean(2.0 * (e - center) * de))
        report.points.append(
            BpProbePoint(
                num_qubits=q,
                num_params=p,
                mean_abs_grad=float(np.mean(np.abs(grads))),
                abs_mean_grad=float(abs(np.mean(grads))),
                grad_variance=float(np.var(grads)),
                sample_count=samples,
            )
        )
    return report
