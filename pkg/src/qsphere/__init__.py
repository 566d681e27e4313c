"""One-class anomaly detection with variational quantum circuits."""

from .ansatz import AnsatzSpec, build_ansatz, param_count
from .baseline import DeepSphereBaseline, MlpSpec, mlp_forward
from .bounds import (
    BpProbePoint,
    BpProbeReport,
    ClassicalBoundInputs,
    QuantumBoundInputs,
    bp_probe,
    classical_bound_log,
    layer_dim_product,
    noisy_bound_log,
    quantum_bound_log,
    quantum_bound_lower_log,
)
from .detector import (
    Hypersphere,
    QuantumSphereDetector,
    anomaly_score,
    classify,
    compute_center,
    compute_radius,
    loss_simplified,
    loss_soft_boundary,
)
from .encoding import amplitude_encode, pool_image, qubits_required, rotation_encode
from .metrics import auc
from .sim import (
    Circuit,
    DensityMatrix,
    Gate,
    NoiseSpec,
    Statevector,
    apply_gate,
    expval_pauli_z,
    new_zero_state,
    run_circuit,
    run_circuit_noisy,
    sample_shots,
)

__all__ = [
    "AnsatzSpec",
    "BpProbePoint",
    "BpProbeReport",
    "Circuit",
    "ClassicalBoundInputs",
    "DeepSphereBaseline",
    "DensityMatrix",
    "Gate",
    "Hypersphere",
    "MlpSpec",
    "NoiseSpec",
    "QuantumBoundInputs",
    "QuantumSphereDetector",
    "Statevector",
    "amplitude_encode",
    "anomaly_score",
    "apply_gate",
    "auc",
    "bp_probe",
    "build_ansatz",
    "classical_bound_log",
    "classify",
    "layer_dim_product",
    "compute_center",
    "compute_radius",
    "expval_pauli_z",
    "loss_simplified",
    "loss_soft_boundary",
    "mlp_forward",
    "new_zero_state",
    "noisy_bound_log",
    "param_count",
    "pool_image",
    "quantum_bound_log",
    "quantum_bound_lower_log",
    "qubits_required",
    "rotation_encode",
    "run_circuit",
    "run_circuit_noisy",
    "sample_shots",
]

__version__ = "0.1.0"
