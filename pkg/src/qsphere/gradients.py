"""Gradients of circuit expectation values: parameter-shift rule and a
finite-difference oracle."""

from __future__ import annotations

import warnings
from typing import Callable

import numpy as np

from . import sim
from .errors import CapabilityError

SHIFT = np.pi / 2.0


def param_shift_grad(eval_fn: Callable[[np.ndarray], float], theta: np.ndarray) -> np.ndarray:
    """Exact gradient for Pauli-rotation-parameterized expectations: two
    shifted evaluations per parameter at +- pi/2."""
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for k in range(theta.size):
        shifted = theta.copy()
        shifted[k] = theta[k] + SHIFT
        plus = eval_fn(shifted)
        shifted[k] = theta[k] - SHIFT
        minus = eval_fn(shifted)
        grad[k] = (plus - minus) / 2.0
    return grad


def finite_diff_grad(
    eval_fn: Callable[[np.ndarray], float],
    theta: np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    """Central finite differences, the validation oracle for param_shift_grad."""
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for k in range(theta.size):
        shifted = theta.copy()
        shifted[k] = theta[k] + h
        plus = eval_fn(shifted)
        shifted[k] = theta[k] - h
        minus = eval_fn(shifted)
        grad[k] = (plus - minus) / (2.0 * h)
    return grad


def circuit_grad(
    circuit: sim.Circuit,
    eval_fn: Callable[[np.ndarray], float],
    theta: np.ndarray,
) -> np.ndarray:
    """Dispatch on the trainable gate set: parameter shift is exact only for
    single-angle Pauli rotations; anything else falls back to finite
    differences."""
    trainable_kinds = {circuit.gates[i].kind for i in circuit.trainable_index_map}
    if trainable_kinds <= set(sim.PAULI_ROTATIONS):
        return param_shift_grad(eval_fn, theta)
    warnings.warn(
        "circuit has non-rotation trainable gates; falling back to finite differences",
        stacklevel=2,
    )
    return finite_diff_grad(eval_fn, theta)


def require_shift_rule(circuit: sim.Circuit) -> None:
    trainable_kinds = {circuit.gates[i].kind for i in circuit.trainable_index_map}
    if not trainable_kinds <= set(sim.PAULI_ROTATIONS):
        raise CapabilityError(
            "parameter-shift rule requires Pauli-rotation trainable gates"
        )
