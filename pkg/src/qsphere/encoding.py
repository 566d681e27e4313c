"""Classical-to-quantum input preparation: pooling, amplitude and rotation encoding."""

from __future__ import annotations

import math

import numpy as np

from . import sim
from .errors import DataError

AMPLITUDE = "amplitude"
ROTATION = "rotation"

_ZERO_NORM_TOL = 1e-12


def qubits_required(classical_dim: int) -> int:
    """Smallest register that fits `classical_dim` amplitudes (at least 1 qubit)."""
    if classical_dim < 1:
        raise DataError(f"classical dimension must be >= 1, got {classical_dim}")
    return max(1, math.ceil(math.log2(classical_dim)))


def _avg_pool(image: np.ndarray, cells: int) -> np.ndarray:
    side = image.shape[0]
    k = side // cells
    blocks = image.reshape(cells, k, cells, k)
    return blocks.mean(axis=(1, 3))


def pool_image(image: np.ndarray, target_dim: int = 16) -> np.ndarray:
    """Average-pool a 28x28 image with non-overlapping 7x7 kernels, row-major flatten."""
    image = np.asarray(image, dtype=float)
    if image.shape != (28, 28):
        raise DataError(f"expected a 28x28 image, got shape {image.shape}")
    if target_dim != 16:
        raise DataError(f"only target_dim=16 is supported, got {target_dim}")
    return _avg_pool(image, 4).reshape(-1)


def pool_images(images: np.ndarray) -> np.ndarray:
    """Vectorized pool_image over a stack of 28x28 images -> (n, 16)."""
    images = np.asarray(images, dtype=float)
    if images.ndim != 3 or images.shape[1:] != (28, 28):
        raise DataError(f"expected (n, 28, 28) images, got shape {images.shape}")
    n = images.shape[0]
    blocks = images.reshape(n, 4, 7, 4, 7)
    return blocks.mean(axis=(2, 4)).reshape(n, 16)


def amplitude_encode_batch(x: np.ndarray, num_qubits: int) -> np.ndarray:
    """Zero-pad rows of x to 2**q and normalize: returns (n, 2**q) complex amplitudes."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    dim = 2**num_qubits
    if x.shape[1] > dim:
        raise DataError(
            f"feature dimension {x.shape[1]} exceeds 2**{num_qubits} amplitudes"
        )
    if not np.all(np.isfinite(x)):
        raise DataError("feature vectors must be finite")
    padded = np.zeros((x.shape[0], dim))
    padded[:, : x.shape[1]] = x
    norms = np.linalg.norm(padded, axis=1)
    if np.any(norms <= _ZERO_NORM_TOL):
        raise DataError("cannot normalize zero vector")
    return (padded / norms[:, None]).astype(complex)


def amplitude_encode(x: np.ndarray, num_qubits: int) -> sim.Statevector:
    amps = amplitude_encode_batch(np.asarray(x, dtype=float)[None, :], num_qubits)[0]
    return sim.Statevector(num_qubits, amps)


def rotation_encode_batch(x: np.ndarray, num_qubits: int) -> np.ndarray:
    """Statevectors produced by the rotation prefix on |0...0>, one row per sample.

    The prefix is a product of single-qubit RY(pi * x_j) rotations, so the
    encoded state is the Kronecker product of per-qubit (cos, sin) pairs.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != num_qubits:
        raise DataError(
            f"rotation encoding needs exactly {num_qubits} features, got {x.shape[1]}"
        )
    half = np.pi * x / 2.0
    amps = np.ones((x.shape[0], 1), dtype=complex)
    for j in range(num_qubits):
        qubit = np.stack([np.cos(half[:, j]), np.sin(half[:, j])], axis=1)
        amps = (amps[:, :, None] * qubit[:, None, :]).reshape(x.shape[0], -1)
    return amps


def rotation_encode(x: np.ndarray, num_qubits: int) -> list[sim.Gate]:
    """Non-trainable prefix of RY(pi * x_j) gates, one per qubit, for |0...0> input."""
    x = np.asarray(x, dtype=float)
    if x.shape != (num_qubits,):
        raise DataError(
            f"rotation encoding needs exactly {num_qubits} features, got shape {x.shape}"
        )
    return [
        sim.Gate(sim.RY, target=j, params=(float(np.pi * x[j]),), trainable=False)
        for j in range(num_qubits)
    ]
