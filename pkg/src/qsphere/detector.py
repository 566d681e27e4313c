"""One-class anomaly detection with a variational quantum circuit.

The detector maps each input to the per-qubit Pauli-Z expectation values
of an ansatz-transformed encoded state, then trains the circuit so these
embeddings cluster inside a minimal hypersphere.  Points whose squared
distance to the centre exceeds the learned radius score as anomalies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, OutlierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import ansatz as ansatz_mod
from . import encoding, gradients, optim, sim
from .errors import ConfigurationError, DataError, TrainingError
from .metrics import auc

OBJECTIVE_SIMPLIFIED = "simplified"
OBJECTIVE_SOFT_BOUNDARY = "soft_boundary"

_RADIUS_UPDATE_EVERY = 5  # epochs, soft-boundary variant only


@dataclass
class Hypersphere:
    center: np.ndarray
    radius: float = 0.0
    threshold: float = 0.0

    def __post_init__(self):
        if self.radius < 0:
            raise ConfigurationError("radius must be >= 0")
        if self.threshold < 0:
            raise ConfigurationError("threshold must be >= 0")


def compute_center(embeddings: np.ndarray) -> np.ndarray:
    embeddings = np.atleast_2d(np.asarray(embeddings, dtype=float))
    if embeddings.size == 0:
        raise DataError("cannot compute centre of an empty embedding set")
    return embeddings.mean(axis=0)


def compute_radius(embeddings: np.ndarray, center: np.ndarray) -> float:
    embeddings = np.atleast_2d(np.asarray(embeddings, dtype=float))
    if embeddings.size == 0:
        raise DataError("cannot compute radius of an empty embedding set")
    return float(np.linalg.norm(embeddings - center, axis=1).mean())


def loss_simplified(dist_sq: np.ndarray, theta: np.ndarray, alpha: float) -> float:
    return float(np.mean(dist_sq) + 0.5 * alpha * np.sum(np.asarray(theta) ** 2))


def loss_soft_boundary(
    dist_sq: np.ndarray,
    theta: np.ndarray,
    alpha: float,
    nu: float,
    radius: float,
) -> float:
    if not 0.0 < nu <= 1.0:
        raise ConfigurationError(f"nu must lie in (0, 1], got {nu}")
    hinge = np.maximum(0.0, np.asarray(dist_sq) - radius**2)
    return float(
        radius**2
        + np.mean(hinge) / nu
        + 0.5 * alpha * np.sum(np.asarray(theta) ** 2)
    )


def anomaly_score(embedding: np.ndarray, sphere: Hypersphere) -> float:
    d2 = float(np.sum((np.asarray(embedding, dtype=float) - sphere.center) ** 2))
    return d2 - sphere.radius**2


def classify(score: float, threshold: float) -> str:
    if threshold < 0:
        raise ConfigurationError("threshold must be >= 0")
    return "ANOMALOUS" if score >= threshold else "NORMAL"


class QuantumSphereDetector(BaseEstimator, OutlierMixin):
    """Sklearn-style one-class detector backed by a statevector simulator.

    Parameters mirror the experiment protocol: `num_qubits`/`family`/`depth`
    fix the ansatz (P = num_qubits * depth trainable angles), `encoding_mode`
    selects amplitude or rotation input encoding, and the hypersphere
    objective is either the simplified mean-squared-distance form or the
    soft-boundary form with trade-off `nu`.
    """

    def __init__(
        self,
        num_qubits: int = 4,
        family: str = "DC",
        depth: int = 4,
        encoding_mode: str = encoding.AMPLITUDE,
        objective: str = OBJECTIVE_SIMPLIFIED,
        optimizer: str = "adam",
        lr: float = 1e-2,
        epochs: int = 300,
        pretrain_epochs: int | None = None,
        pretrain_lr: float | None = None,
        batch_size: int = 50,
        alpha: float = 1e-4,
        nu: float = 0.1,
        threshold: float = 0.0,
        center_mode: str = "frozen",
        shots: int = 0,
        seed: int = 0,
    ):
        self.num_qubits = num_qubits
        self.family = family
        self.depth = depth
        self.encoding_mode = encoding_mode
        self.objective = objective
        self.optimizer = optimizer
        self.lr = lr
        self.epochs = epochs
        self.pretrain_epochs = pretrain_epochs
        self.pretrain_lr = pretrain_lr
        self.batch_size = batch_size
        self.alpha = alpha
        self.nu = nu
        self.threshold = threshold
        self.center_mode = center_mode
        self.shots = shots
        self.seed = seed

    # -- circuit plumbing ---------------------------------------------------

    def _spec(self) -> ansatz_mod.AnsatzSpec:
        return ansatz_mod.AnsatzSpec(self.family, self.num_qubits, self.depth)

    def _validate(self) -> None:
        if self.alpha <= 0:
            raise ConfigurationError(f"alpha must be > 0, got {self.alpha}")
        if not 0.0 < self.nu <= 1.0:
            raise ConfigurationError(f"nu must lie in (0, 1], got {self.nu}")
        if self.objective not in (OBJECTIVE_SIMPLIFIED, OBJECTIVE_SOFT_BOUNDARY):
            raise ConfigurationError(f"unknown objective {self.objective!r}")
        if self.encoding_mode not in (encoding.AMPLITUDE, encoding.ROTATION):
            raise ConfigurationError(f"unknown encoding {self.encoding_mode!r}")
        if self.optimizer not in ("adam", "spsa"):
            raise ConfigurationError(f"unknown optimizer {self.optimizer!r}")
        if self.center_mode not in ("frozen", "rolling"):
            raise ConfigurationError(f"unknown center mode {self.center_mode!r}")

    def _encode(self, X: np.ndarray) -> np.ndarray:
        if self.encoding_mode == encoding.AMPLITUDE:
            return encoding.amplitude_encode_batch(X, self.num_qubits)
        return encoding.rotation_encode_batch(X, self.num_qubits)

    def _embed_states(self, states: np.ndarray, theta: np.ndarray) -> np.ndarray:
        out = sim.run_circuit_batched(self.circuit_, states, theta)
        return sim.expval_pauli_z_batched(out, self.num_qubits)

    def _embed_states_sampled(
        self, states: np.ndarray, theta: np.ndarray, rng: np.random.Generator
    ) -> np.ndarray:
        out = sim.run_circuit_batched(self.circuit_, states, theta)
        probs = np.abs(out) ** 2
        probs /= probs.sum(axis=1, keepdims=True)
        signs = np.stack(
            [sim._z_signs(self.num_qubits, j) for j in range(self.num_qubits)], axis=-1
        )
        emb = np.empty((states.shape[0], self.num_qubits))
        for i in range(states.shape[0]):
            counts = rng.multinomial(self.shots, probs[i])
            emb[i] = (counts @ signs) / self.shots
        return emb

    # -- gradient machinery -------------------------------------------------

    def _embedding_jacobian(self, states: np.ndarray, theta: np.ndarray) -> np.ndarray:
        """Parameter-shift Jacobian d<Z_j>/d theta_k, shape (P, n, q)."""
        p = theta.size
        jac = np.empty((p, states.shape[0], self.num_qubits))
        for k in range(p):
            shifted = theta.copy()
            shifted[k] = theta[k] + gradients.SHIFT
            plus = self._embed_states(states, shifted)
            shifted[k] = theta[k] - gradients.SHIFT
            minus = self._embed_states(states, shifted)
            jac[k] = (plus - minus) / 2.0
        return jac

    def _objective_value(
        self, states: np.ndarray, theta: np.ndarray, center: np.ndarray, radius: float
    ) -> float:
        emb = self._embed_states(states, theta)
        dist_sq = np.sum((emb - center) ** 2, axis=1)
        if self.objective == OBJECTIVE_SOFT_BOUNDARY:
            return loss_soft_boundary(dist_sq, theta, self.alpha, self.nu, radius)
        return loss_simplified(dist_sq, theta, self.alpha)

    def _objective_grad(
        self, states: np.ndarray, theta: np.ndarray, center: np.ndarray, radius: float
    ) -> tuple[float, np.ndarray]:
        emb = self._embed_states(states, theta)
        diffs = emb - center
        dist_sq = np.sum(diffs**2, axis=1)
        n = states.shape[0]
        jac = self._embedding_jacobian(states, theta)
        if self.objective == OBJECTIVE_SOFT_BOUNDARY:
            active = dist_sq - radius**2 > 0.0
            weights = active.astype(float) / (self.nu * n)
            value = loss_soft_boundary(dist_sq, theta, self.alpha, self.nu, radius)
        else:
            weights = np.full(n, 1.0 / n)
            value = loss_simplified(dist_sq, theta, self.alpha)
        # d/d theta_k of sum_i w_i ||phi_i - c||^2 = sum_i w_i 2 (phi_i - c) . dphi_i
        grad = 2.0 * np.einsum("i,ij,kij->k", weights, diffs, jac)
        grad += self.alpha * theta
        return value, grad

    # -- pre-training -------------------------------------------------------

    def _pretrain(
        self,
        states: np.ndarray,
        X: np.ndarray,
        theta: np.ndarray,
        rng: np.random.Generator,
        epochs: int,
        lr: float,
    ) -> tuple[np.ndarray, list[float]]:
        """Encoder-decoder warm-up: a linear decoder reconstructs the input
        from the embedding; reconstruction MSE drives both decoder weights
        (analytic gradient) and circuit angles (parameter-shift chain rule)."""
        n, d_c = X.shape
        q = self.num_qubits
        w = rng.normal(scale=0.1, size=(q, d_c))
        b = np.zeros(d_c)
        opt = optim.Adam(lr=lr)
        history: list[float] = []
        for _ in range(epochs):
            emb = self._embed_states(states, theta)
            recon = emb @ w + b
            resid = recon - X
            loss = float(np.mean(np.sum(resid**2, axis=1)))
            history.append(loss)
            d_emb = (2.0 / n) * resid @ w.T
            jac = self._embedding_jacobian(states, theta)
            g_theta = np.einsum("ij,kij->k", d_emb, jac)
            g_w = (2.0 / n) * emb.T @ resid
            g_b = (2.0 / n) * resid.sum(axis=0)
            packed = np.concatenate([theta, w.ravel(), b])
            grad = np.concatenate([g_theta, g_w.ravel(), g_b])
            packed = opt.step(packed, grad)
            theta = packed[: theta.size]
            w = packed[theta.size : theta.size + w.size].reshape(q, d_c)
            b = packed[theta.size + w.size :]
        return theta, history

    # -- estimator API ------------------------------------------------------

    def fit(self, X, y=None):
        self._validate()
        X = check_array(X, dtype=float)
        spec = self._spec()
        self.circuit_ = ansatz_mod.build_ansatz(spec)
        rng = np.random.default_rng(self.seed)
        theta = rng.uniform(-np.pi, np.pi, size=ansatz_mod.param_count(spec))
        states = self._encode(X)

        pre_epochs = self.epochs if self.pretrain_epochs is None else self.pretrain_epochs
        pre_lr = self.lr if self.pretrain_lr is None else self.pretrain_lr
        if pre_epochs > 0:
            theta, self.pretrain_loss_history_ = self._pretrain(
                states, X, theta, rng, pre_epochs, pre_lr
            )
        else:
            self.pretrain_loss_history_ = []

        center = compute_center(self._embed_states(states, theta))
        radius = compute_radius(self._embed_states(states, theta), center)

        if self.optimizer == "adam":
            opt: optim.Adam | optim.Spsa = optim.Adam(lr=self.lr)
        else:
            opt = optim.Spsa(seed=self.seed + 1)

        n = X.shape[0]
        batch = min(self.batch_size, n)
        self.loss_history_ = []
        for epoch in range(self.epochs):
            order = rng.permutation(n)
            epoch_loss = 0.0
            nbatches = 0
            for start in range(0, n, batch):
                idx = order[start : start + batch]
                mb = states[idx]
                if self.optimizer == "adam":
                    value, grad = self._objective_grad(mb, theta, center, radius)
                    theta = opt.step(theta, grad)
                else:
                    value = self._objective_value(mb, theta, center, radius)
                    theta = opt.step(
                        theta,
                        lambda t: self._objective_value(mb, t, center, radius),
                    )
                epoch_loss += value
                nbatches += 1
            epoch_loss /= nbatches
            if not np.isfinite(epoch_loss):
                raise TrainingError(f"loss diverged at epoch {epoch}")
            self.loss_history_.append(epoch_loss)
            if self.center_mode == "rolling":
                center = compute_center(self._embed_states(states, theta))
            if (
                self.objective == OBJECTIVE_SOFT_BOUNDARY
                and (epoch + 1) % _RADIUS_UPDATE_EVERY == 0
            ):
                emb = self._embed_states(states, theta)
                dists = np.linalg.norm(emb - center, axis=1)
                radius = float(np.quantile(dists, 1.0 - self.nu))

        self.theta_ = theta
        final_emb = self._embed_states(states, theta)
        self.sphere_ = Hypersphere(
            center=center,
            radius=compute_radius(final_emb, center),
            threshold=self.threshold,
        )
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        """Per-qubit Pauli-Z embeddings of the inputs."""
        check_is_fitted(self, "theta_")
        X = check_array(X, dtype=float)
        states = self._encode(X)
        if self.shots > 0:
            rng = np.random.default_rng(self.seed + 2)
            return self._embed_states_sampled(states, self.theta_, rng)
        return self._embed_states(states, self.theta_)

    def score_samples(self, X) -> np.ndarray:
        """Anomaly scores: squared distance to the centre minus radius^2.
        Higher means more anomalous."""
        emb = self.transform(X)
        d2 = np.sum((emb - self.sphere_.center) ** 2, axis=1)
        return d2 - self.sphere_.radius**2

    def decision_function(self, X) -> np.ndarray:
        # sklearn convention: positive = inlier
        return self.threshold - self.score_samples(X)

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) > 0, 1, -1)

    def test_auc(self, X_normal, X_anomalous) -> float:
        return auc(self.score_samples(X_normal), self.score_samples(X_anomalous))
