"""Minimal classical hypersphere baseline: a small rectifier MLP trained
with the same one-class objective, used for parameter-budget comparisons."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, OutlierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import optim
from .detector import Hypersphere, compute_center, compute_radius
from .errors import ConfigurationError, TrainingError
from .metrics import auc


@dataclass(frozen=True)
class MlpSpec:
    layer_dims: tuple[int, ...]
    use_bias: bool = False

    def __post_init__(self):
        if len(self.layer_dims) < 2:
            raise ConfigurationError("an MLP needs at least input and output dims")
        if any(d < 1 for d in self.layer_dims):
            raise ConfigurationError("all layer dims must be >= 1")

    @property
    def num_layers(self) -> int:
        return len(self.layer_dims) - 1

    def parameter_budget(self) -> int:
        dims = self.layer_dims
        total = sum(dims[i] * dims[i + 1] for i in range(self.num_layers))
        if self.use_bias:
            total += sum(dims[1:])
        return total


def init_weights(spec: MlpSpec, rng: np.random.Generator) -> list[np.ndarray]:
    weights = []
    for i in range(spec.num_layers):
        fan_in, fan_out = spec.layer_dims[i], spec.layer_dims[i + 1]
        weights.append(rng.normal(scale=1.0 / np.sqrt(fan_in), size=(fan_in, fan_out)))
        if spec.use_bias:
            weights.append(np.zeros(fan_out))
    return weights


def mlp_forward(spec: MlpSpec, weights: list[np.ndarray], x: np.ndarray) -> np.ndarray:
    """Affine layers with a rectifier after every layer (Lipschitz <= 1)."""
    acts, _ = _forward_with_cache(spec, weights, np.atleast_2d(np.asarray(x, dtype=float)))
    out = acts[-1]
    return out[0] if np.asarray(x).ndim == 1 else out


def _unpack(spec: MlpSpec, weights: list[np.ndarray]):
    step = 2 if spec.use_bias else 1
    for i in range(spec.num_layers):
        w = weights[step * i]
        expected = (spec.layer_dims[i], spec.layer_dims[i + 1])
        if w.shape != expected:
            raise ConfigurationError(f"layer {i} weight shape {w.shape} != {expected}")
        b = weights[step * i + 1] if spec.use_bias else None
        yield w, b


def _forward_with_cache(spec: MlpSpec, weights: list[np.ndarray], x: np.ndarray):
    pre = []
    acts = [x]
    h = x
    for w, b in _unpack(spec, weights):
        z = h @ w
        if b is not None:
            z = z + b
        pre.append(z)
        h = np.maximum(z, 0.0)
        acts.append(h)
    return acts, pre


def mlp_backward(
    spec: MlpSpec,
    weights: list[np.ndarray],
    x: np.ndarray,
    d_out: np.ndarray,
) -> list[np.ndarray]:
    """Gradients of sum_i <d_out_i, phi(x_i)> w.r.t. every weight array."""
    acts, pre = _forward_with_cache(spec, weights, x)
    grads: list[np.ndarray] = []
    delta = d_out
    layer_params = list(_unpack(spec, weights))
    for i in reversed(range(spec.num_layers)):
        w, b = layer_params[i]
        delta = delta * (pre[i] > 0.0)
        g_w = acts[i].T @ delta
        if b is not None:
            grads.append(delta.sum(axis=0))
        grads.append(g_w)
        delta = delta @ w.T
    grads.reverse()
    return grads


class DeepSphereBaseline(BaseEstimator, OutlierMixin):
    """Classical counterpart of the quantum detector: same hypersphere
    objective and scoring, with a bias-free rectifier MLP as the embedding."""

    def __init__(
        self,
        hidden_dims: tuple[int, ...] = (),
        output_dim: int = 4,
        use_bias: bool = False,
        lr: float = 1e-2,
        epochs: int = 300,
        batch_size: int = 50,
        alpha: float = 1e-4,
        threshold: float = 0.0,
        seed: int = 0,
    ):
        self.hidden_dims = hidden_dims
        self.output_dim = output_dim
        self.use_bias = use_bias
        self.lr = lr
        self.epochs = epochs
        self.batch_size = batch_size
        self.alpha = alpha
        self.threshold = threshold
        self.seed = seed

    def _spec(self, input_dim: int) -> MlpSpec:
        dims = (input_dim, *tuple(self.hidden_dims), self.output_dim)
        return MlpSpec(dims, use_bias=self.use_bias)

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        spec = self._spec(X.shape[1])
        rng = np.random.default_rng(self.seed)
        weights = init_weights(spec, rng)
        # centre frozen from the initial forward pass over the train set
        center = compute_center(_forward_with_cache(spec, weights, X)[0][-1])
        opt = optim.Adam(lr=self.lr)
        shapes = [w.shape for w in weights]
        n = X.shape[0]
        batch = min(self.batch_size, n)
        self.loss_history_ = []
        for epoch in range(self.epochs):
            order = rng.permutation(n)
            epoch_loss = 0.0
            nbatches = 0
            for start in range(0, n, batch):
                idx = order[start : start + batch]
                xb = X[idx]
                emb = _forward_with_cache(spec, weights, xb)[0][-1]
                diffs = emb - center
                loss = float(np.mean(np.sum(diffs**2, axis=1)))
                loss += 0.5 * self.alpha * sum(float(np.sum(w**2)) for w in weights)
                d_out = 2.0 * diffs / xb.shape[0]
                grads = mlp_backward(spec, weights, xb, d_out)
                grads = [g + self.alpha * w for g, w in zip(grads, weights)]
                flat = opt.step(
                    np.concatenate([w.ravel() for w in weights]),
                    np.concatenate([g.ravel() for g in grads]),
                )
                weights = _split_flat(flat, shapes)
                epoch_loss += loss
                nbatches += 1
            epoch_loss /= nbatches
            if not np.isfinite(epoch_loss):
                raise TrainingError(f"loss diverged at epoch {epoch}")
            self.loss_history_.append(epoch_loss)
        self.spec_ = spec
        self.weights_ = weights
        emb = _forward_with_cache(spec, weights, X)[0][-1]
        self.sphere_ = Hypersphere(
            center=center,
            radius=compute_radius(emb, center),
            threshold=self.threshold,
        )
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "weights_")
        X = check_array(X, dtype=float)
        return _forward_with_cache(self.spec_, self.weights_, X)[0][-1]

    def score_samples(self, X) -> np.ndarray:
        emb = self.transform(X)
        d2 = np.sum((emb - self.sphere_.center) ** 2, axis=1)
        return d2 - self.sphere_.radius**2

    def decision_function(self, X) -> np.ndarray:
        return self.threshold - self.score_samples(X)

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) > 0, 1, -1)

    def parameter_budget(self, input_dim: int) -> int:
        return self._spec(input_dim).parameter_budget()

    def test_auc(self, X_normal, X_anomalous) -> float:
        return auc(self.score_samples(X_normal), self.score_samples(X_anomalous))


def _split_flat(flat: np.ndarray, shapes: list[tuple[int, ...]]) -> list[np.ndarray]:
    out = []
    pos = 0
    for shape in shapes:
        size = int(np.prod(shape))
        out.append(flat[pos : pos + size].reshape(shape))
        pos += size
    return out
