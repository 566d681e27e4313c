"""Covering-number bound evaluator tests: closed-form anchor values,
ordering and monotonicity properties, and the gradient-probe mechanics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsphere.bounds import (
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
from qsphere.errors import ConfigurationError, DataError

COMPARISON_LAYER_DIMS = ((16, 256), (256, 128), (128, 64), (64, 32), (32, 10))


def anchor_inputs(eps, **overrides):
    kwargs = dict(
        num_qubits=4, num_params=16, gate_locality=2,
        norm_observable=1.0, norm_center=1.0, epsilon=eps,
    )
    kwargs.update(overrides)
    return QuantumBoundInputs(**kwargs)


# -- closed-form anchors ----------------------------------------------------


@pytest.mark.parametrize("eps", [0.1, 0.01, 0.001])
def test_upper_bound_anchor_value(eps):
    # q^{2m} P = 4^4 * 16 = 4096 and the log argument collapses to 448/eps
    expected = 4096.0 * math.log(448.0 / eps)
    got = quantum_bound_log(anchor_inputs(eps))
    assert abs(got - expected) / expected < 1e-12


@pytest.mark.parametrize("eps", [0.1, 0.01, 0.001])
def test_lower_bound_anchor_value(eps):
    expected = 4096.0 * math.log(112.0 / eps)  # 7 * 16 * 1 / eps
    got = quantum_bound_lower_log(anchor_inputs(eps))
    assert abs(got - expected) / expected < 1e-12


def test_layer_dim_product_exact():
    assert layer_dim_product(((2, 3), (3, 4))) == 6 * 12
    # the five-layer comparison network product, computed exactly
    assert layer_dim_product(COMPARISON_LAYER_DIMS) == (
        16 * 256 * 256 * 128 * 128 * 64 * 64 * 32 * 32 * 10
    )


def test_layer_dim_product_near_published_magnitude():
    product = layer_dim_product(COMPARISON_LAYER_DIMS)
    assert abs(product - 7.1e17) / 7.1e17 < 0.05


# -- ordering and monotonicity ---------------------------------------------


@given(
    st.integers(2, 8),
    st.integers(1, 64),
    st.integers(1, 3),
    st.floats(0.5, 4.0),
    st.floats(0.0, 2.0),
    st.floats(0.001, 0.099),
)
@settings(max_examples=80, deadline=None)
def test_lower_bound_never_exceeds_upper(q, p, m, norm_o, norm_c, eps):
    inputs = QuantumBoundInputs(q, p, m, norm_o, norm_c, eps)
    assert quantum_bound_lower_log(inputs) <= quantum_bound_log(inputs) + 1e-9


@given(st.floats(0.001, 0.5), st.integers(1, 100))
@settings(max_examples=60, deadline=None)
def test_noise_only_shrinks_the_bound(p_noise, n_gates):
    inputs = anchor_inputs(0.01, noise_rate=p_noise, noisy_gate_count=n_gates)
    assert noisy_bound_log(inputs) <= quantum_bound_log(inputs)


def test_noisy_bound_reduces_to_noiseless_at_zero_noise():
    inputs = anchor_inputs(0.01, noise_rate=0.0, noisy_gate_count=30)
    assert noisy_bound_log(inputs) == pytest.approx(quantum_bound_log(inputs))


def test_full_noise_collapses_bound():
    inputs = anchor_inputs(0.01, noise_rate=1.0, noisy_gate_count=5)
    assert noisy_bound_log(inputs) == -math.inf


def test_bounds_grow_as_epsilon_shrinks():
    values = [quantum_bound_log(anchor_inputs(eps)) for eps in (0.09, 0.01, 0.001)]
    assert values[0] < values[1] < values[2]


def test_bound_grows_with_circuit_size():
    small = quantum_bound_log(anchor_inputs(0.01))
    bigger_q = quantum_bound_log(anchor_inputs(0.01, num_qubits=6))
    more_params = quantum_bound_log(anchor_inputs(0.01, num_params=32))
    assert small < bigger_q
    assert small < more_params


def test_classical_bound_monotone_in_epsilon_and_norms():
    def value(eps, w):
        return classical_bound_log(
            ClassicalBoundInputs(COMPARISON_LAYER_DIMS, (w,) * 5, 1.0, eps)
        )

    assert value(0.001, 1.0) > value(0.01, 1.0)
    assert value(0.01, 2.0) > value(0.01, 1.0)


def test_classical_bound_includes_dimension_product_term():
    # doubling one layer's dims raises the log bound by at least ln(4)
    base = classical_bound_log(
        ClassicalBoundInputs(((8, 8), (8, 4)), (1.0, 1.0), 1.0, 0.01)
    )
    wider = classical_bound_log(
        ClassicalBoundInputs(((8, 16), (16, 4)), (1.0, 1.0), 1.0, 0.01)
    )
    assert wider > base + math.log(2.0)


# -- input validation -------------------------------------------------------


def test_epsilon_domain_is_enforced():
    anchor_inputs(0.1)  # boundary value used by the anchor evaluation
    for eps in (0.0, 0.11, 0.5, -0.01):
        with pytest.raises(ConfigurationError):
            anchor_inputs(eps)


def test_quantum_inputs_validation():
    with pytest.raises(ConfigurationError):
        anchor_inputs(0.01, num_params=0)
    with pytest.raises(ConfigurationError):
        anchor_inputs(0.01, norm_observable=-1.0)


def test_noisy_bound_requires_noise_fields():
    with pytest.raises(ConfigurationError):
        noisy_bound_log(anchor_inputs(0.01))
    with pytest.raises(ConfigurationError):
        noisy_bound_log(anchor_inputs(0.01, noise_rate=2.0, noisy_gate_count=5))


def test_classical_inputs_validation():
    with pytest.raises(ConfigurationError):
        ClassicalBoundInputs((), (), 1.0, 0.01)
    with pytest.raises(ConfigurationError):
        ClassicalBoundInputs(((4, 4),), (1.0, 1.0), 1.0, 0.01)
    with pytest.raises(ConfigurationError):
        ClassicalBoundInputs(((4, 0),), (1.0,), 1.0, 0.01)
    with pytest.raises(ConfigurationError):
        ClassicalBoundInputs(((4, 4),), (0.0,), 1.0, 0.01)


# -- gradient probe mechanics ----------------------------------------------


def test_probe_report_structure_and_determinism():
    kwargs = dict(q_range=(2, 3), depth=2, samples=100, seed=4)
    a = bp_probe(**kwargs)
    b = bp_probe(**kwargs)
    assert [p.num_qubits for p in a.points] == [2, 3]
    assert [p.num_params for p in a.points] == [4, 6]
    for pa, pb in zip(a.points, b.points):
        assert pa.mean_abs_grad == pb.mean_abs_grad
        assert pa.abs_mean_grad == pb.abs_mean_grad
        assert pa.grad_variance == pb.grad_variance
        assert pa.sample_count == 100
        assert pa.abs_mean_grad <= pa.mean_abs_grad + 1e-15
        assert pa.grad_variance >= 0.0


def test_probe_fixed_axes_mode_runs():
    report = bp_probe(q_range=(2, 3), depth=2, samples=100, seed=1,
                      rotation_axes="fixed")
    assert report.rotation_axes == "fixed"
    assert all(p.grad_variance > 0 for p in report.points)


def test_probe_validation():
    with pytest.raises(DataError):
        bp_probe(q_range=(2,), samples=50)
    with pytest.raises(ConfigurationError):
        bp_probe(q_range=(2,), samples=100, rotation_axes="diagonal")


def test_log_variance_slope_computation():
    report = BpProbeReport("DC", 4, 0, 0)
    from qsphere.bounds import BpProbePoint

    # variances decaying exactly as e^{-2q} give slope -2
    for q in (2, 3, 4):
        report.points.append(
            BpProbePoint(q, 4 * q, 0.1, 0.05, math.exp(-2.0 * q), 100)
        )
    assert report.log_variance_slope == pytest.approx(-2.0, abs=1e-9)
