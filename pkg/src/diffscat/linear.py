"""One-vs-rest linear SVM trained by stochastic subgradient descent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLabelsError, DimensionMismatchError

__all__ = ["LinearModel", "train_linear"]


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray  # (classes, features)
    bias: np.ndarray
    mean: np.ndarray
    scale: np.ndarray

    def standardize(self, features):
        features = np.asarray(features, dtype=float)
        if features.ndim != 2 or features.shape[1] != self.mean.size:
            raise DimensionMismatchError(
                f"model expects {self.mean.size} features, got shape {features.shape}")
        return (features - self.mean) * self.scale

    def decision_function(self, features):
        return self.standardize(features) @ self.weights.T + self.bias

    def predict(self, features):
        return np.argmax(self.decision_function(features), axis=1)

    def accuracy(self, features, labels):
        return float(np.mean(self.predict(features) == np.asarray(labels)))


def train_linear(features, labels, reg=1e-4, epochs=30, rng=None, eta0=0.1):
    """Fit a one-vs-rest linear SVM: hinge loss plus ``reg/2 ||w||^2`` per class.

    Columns are standardized first (constant columns map to 0); the bias is
    not regularized. Optimization is stochastic subgradient descent with steps
    ``eta0 / (1 + reg * eta0 * t)``, preconditioned by the inverse second-moment
    matrix of the (bias-augmented) standardized features, and the iterates of
    the second half of the epochs are averaged. The preconditioner leaves the
    objective unchanged; it only fixes the slow convergence caused by strongly
    correlated feature columns.

    Labels must be ``0..c-1`` with every class present.
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels)
    if x.ndim != 2 or x.shape[0] != y.size:
        raise DimensionMismatchError("features must be (samples, dims) matching labels")
    if y.size == 0:
        raise DegenerateLabelsError("no training examples")
    classes = int(y.max()) + 1
    counts = np.bincount(y, minlength=classes)
    if classes < 2 or np.any(counts == 0):
        raise DegenerateLabelsError(f"class counts {counts.tolist()}: need >= 2 classes, none empty")
    epochs = int(epochs)
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    rng = np.random.default_rng(rng)

    mean = x.mean(axis=0)
    std = x.std(axis=0)
    scale = np.where(std > 0, 1.0 / np.where(std > 0, std, 1.0), 0.0)
    z = np.hstack([(x - mean) * scale, np.ones((y.size, 1))])
    dim = z.shape[1]
    precond = np.linalg.inv(z.T @ z / y.size + reg * np.eye(dim))
    penalty = np.full(dim, reg)
    penalty[-1] = 0.0

    targets = np.where(y[:, None] == np.arange(classes)[None, :], 1.0, -1.0)
    theta = np.zeros((classes, dim))
    avg = np.zeros_like(theta)
    n_avg = 0
    step = 0
    for epoch in range(epochs):
        for i in rng.permutation(y.size):
            lr = eta0 / (1.0 + reg * eta0 * step)
            step += 1
            active = targets[i] * (theta @ z[i]) < 1.0
            grad = theta * penalty
            grad[active] -= targets[i, active, None] * z[i]
            theta -= lr * grad @ precond
            if 2 * epoch >= epochs - 1:
                avg += theta
                n_avg += 1
    theta = avg / n_avg
    return LinearModel(theta[:, :-1].copy(), theta[:, -1].copy(), mean, scale)
