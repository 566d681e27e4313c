"""Adam and SPSA optimizers with fully deterministic trajectories."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import OptimizerError


class Adam:
    """Standard Adam with bias correction."""

    def __init__(self, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m: np.ndarray | None = None
        self.v: np.ndarray | None = None

    def step(self, theta: np.ndarray, grad: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        grad = np.asarray(grad, dtype=float)
        if grad.shape != theta.shape:
            raise OptimizerError("gradient shape does not match parameters")
        if not np.all(np.isfinite(grad)):
            raise OptimizerError("non-finite gradient entries")
        if self.m is None:
            self.m = np.zeros_like(theta)
            self.v = np.zeros_like(theta)
        self.step_count += 1
        t = self.step_count
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad**2
        m_hat = self.m / (1.0 - self.beta1**t)
        v_hat = self.v / (1.0 - self.beta2**t)
        return theta - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class Spsa:
    """Simultaneous perturbation stochastic approximation with the standard
    decaying gain schedule a_k = a / (A + k + 1)^alpha, c_k = c / (k + 1)^gamma."""

    def __init__(self, a: float = 0.1, c: float = 0.1, big_a: float = 10.0,
                 alpha: float = 0.602, gamma: float = 0.101, seed: int = 0):
        self.a = a
        self.c = c
        self.big_a = big_a
        self.alpha = alpha
        self.gamma = gamma
        self.step_count = 0
        self.rng = np.random.default_rng(seed)

    def gain_a(self, k: int) -> float:
        return self.a / (self.big_a + k + 1.0) ** self.alpha

    def gain_c(self, k: int) -> float:
        return self.c / (k + 1.0) ** self.gamma

    def step(self, theta: np.ndarray, loss_fn: Callable[[np.ndarray], float]) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = self.step_count
        ck = self.gain_c(k)
        ak = self.gain_a(k)
        delta = self.rng.integers(0, 2, size=theta.shape) * 2.0 - 1.0
        plus = loss_fn(theta + ck * delta)
        minus = loss_fn(theta - ck * delta)
        ghat = (plus - minus) / (2.0 * ck * delta)
        if not np.all(np.isfinite(ghat)):
            raise OptimizerError("non-finite SPSA gradient estimate")
        self.step_count += 1
        return theta - ak * ghat
