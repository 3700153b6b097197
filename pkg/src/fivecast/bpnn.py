"""Feed-forward network trained by backpropagation and mini-batch SGD.

Hidden layers squash through the logistic sigmoid; the output layer is
identity so the network can regress outside (0, 1).  Per-sample cost is
half the squared error, so the output delta is simply ``a - y`` and each
earlier delta is the next layer's delta pulled back through the weights
and gated by the sigmoid slope.

Training shuffles the sample order every epoch with a seeded generator,
walks the batches, and subtracts the batch-mean gradient scaled by the
learning rate.  The epoch update for the usual one-hidden-layer shape is
a single-source kernel that numba compiles when acceleration is on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .errors import DivergenceError, DomainError, ShapeError


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(over="ignore"):  # saturation is well-defined
        return 1.0 / (1.0 + np.exp(-z))


def hidden_size_rule(n_outputs: int, n_inputs: int) -> int:
    """Empirical hidden-layer width for a one-hidden-layer regressor."""
    if n_outputs < 1 or n_inputs < 1:
        raise DomainError("layer widths must be positive")
    l, n = float(n_outputs), float(n_inputs)
    value = math.sqrt(0.43 * l * n + 0.12 * l * l + 2.54 * n + 0.77 * l + 0.35) + 0.51
    return int(math.floor(value))


@dataclass(frozen=True)
class SgdConfig:
    eta: float = 0.01
    batch_size: int = 16
    epochs: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.eta >= 0.0:
            raise DomainError(f"eta must be >= 0, got {self.eta}")
        if self.batch_size < 1:
            raise DomainError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 0:
            raise DomainError(f"epochs must be >= 0, got {self.epochs}")


@dataclass
class BpNetwork:
    """Weights and biases, one pair per non-input layer.

    ``weights[l]`` has shape (size of layer l+1, size of layer l) and acts
    on activations from the left.  Mutated in place by :func:`train`.
    """

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2:
            raise DomainError("need at least an input and an output layer")
        if any(s < 1 for s in sizes):
            raise DomainError(f"layer sizes must be positive, got {sizes}")
        object.__setattr__(self, "layer_sizes", sizes)
        expected = list(zip(sizes[1:], sizes[:-1]))
        shapes = [w.shape for w in self.weights]
        if shapes != expected:
            raise ShapeError(f"weight shapes {shapes} do not match layers {sizes}")
        if [b.shape for b in self.biases] != [(s,) for s in sizes[1:]]:
            raise ShapeError("bias shapes do not match layers")


def new_network(layer_sizes, seed: int = 0) -> BpNetwork:
    """Fresh network: weights uniform on (-0.5, 0.5) from the seeded
    generator, biases zero."""
    sizes = tuple(int(s) for s in layer_sizes)
    rng = np.random.default_rng(seed)
    weights = [rng.uniform(-0.5, 0.5, (nxt, cur)) for cur, nxt in zip(sizes, sizes[1:])]
    biases = [np.zeros(nxt) for nxt in sizes[1:]]
    return BpNetwork(sizes, weights, biases)


def _check_input(net: BpNetwork, x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != net.layer_sizes[0]:
        raise ShapeError(
            f"input must be a vector of length {net.layer_sizes[0]}, got shape {arr.shape}"
        )
    return arr


def forward(net: BpNetwork, x) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """All activations and pre-activation sums for one input.

    Returns (activations, pre_activations); activations[0] is the input
    itself and pre_activations[l] feeds activations[l + 1].
    """
    a = _check_input(net, x)
    activations = [a]
    pre = []
    last = len(net.weights) - 1
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = w @ a + b
        pre.append(z)
        a = z if l == last else sigmoid(z)
        activations.append(a)
    return activations, pre


def predict(net: BpNetwork, x) -> float:
    """Output activation for one input; scalar when the output layer has
    one unit, else a vector."""
    activations, _ = forward(net, x)
    out = activations[-1]
    return float(out[0]) if out.shape[0] == 1 else out


def _forward_batch(net: BpNetwork, inputs) -> np.ndarray:
    arr = np.asarray(inputs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != net.layer_sizes[0]:
        raise ShapeError(f"inputs must be (n, {net.layer_sizes[0]}), got {arr.shape}")
    a = arr
    last = len(net.weights) - 1
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        a = z if l == last else sigmoid(z)
    return a


def predict_batch(net: BpNetwork, inputs) -> np.ndarray:
    """Vectorized forward pass over rows of inputs (one-unit output)."""
    out = _forward_batch(net, inputs)
    if out.shape[1] != 1:
        raise ShapeError("predict_batch expects a single output unit")
    return out[:, 0]


def backprop(net: BpNetwork, x, y) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Exact cost gradient for one sample under half squared error.

    Returns (weight_grads, bias_grads) with the same shapes as the
    network's parameters.
    """
    target = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if target.shape[0] != net.layer_sizes[-1]:
        raise ShapeError(
            f"target must have length {net.layer_sizes[-1]}, got {target.shape[0]}"
        )
    activations, pre = forward(net, x)
    delta = activations[-1] - target  # identity output layer
    grad_w = [np.empty(0)] * len(net.weights)
    grad_b = [np.empty(0)] * len(net.biases)
    for l in range(len(net.weights) - 1, -1, -1):
        grad_w[l] = np.outer(delta, activations[l])
        grad_b[l] = delta.copy()
        if l > 0:
            s = sigmoid(pre[l - 1])
            delta = (net.weights[l].T @ delta) * s * (1.0 - s)
    return grad_w, grad_b


def training_cost(net: BpNetwork, inputs, targets) -> float:
    """Mean half squared error over the sample block."""
    out = _forward_batch(net, inputs)
    t = np.asarray(targets, dtype=np.float64)
    if t.ndim == 1:
        t = t[:, None]
    if t.shape != out.shape:
        raise ShapeError(f"targets shape {t.shape} does not match outputs {out.shape}")
    return float(0.5 * np.mean(np.sum((t - out) ** 2, axis=1)))


def _sgd_epoch(wh, bh, wo, bo, x, y, order, batch_size, eta):
    # One shuffled pass of mini-batch SGD for input->hidden->output nets.
    # Batched matrix form of the per-sample update; last batch may be
    # smaller and each batch divides by its own size.
    n = x.shape[0]
    for start in range(0, n, batch_size):
        idx = order[start : start + batch_size]
        xb = x[idx]
        yb = y[idx]
        m = xb.shape[0]
        z1 = np.dot(xb, np.ascontiguousarray(wh.T))
        for j in range(z1.shape[1]):
            z1[:, j] += bh[j]
        a1 = 1.0 / (1.0 + np.exp(-z1))
        z2 = np.dot(a1, np.ascontiguousarray(wo.T))
        for j in range(z2.shape[1]):
            z2[:, j] += bo[j]
        d2 = z2 - yb
        gwo = np.dot(np.ascontiguousarray(d2.T), a1)
        gbo = np.sum(d2, axis=0)
        d1 = np.dot(d2, wo) * (a1 * (1.0 - a1))
        gwh = np.dot(np.ascontiguousarray(d1.T), xb)
        gbh = np.sum(d1, axis=0)
        s = eta / m
        wo -= s * gwo
        bo -= s * gbo
        wh -= s * gwh
        bh -= s * gbh


_sgd_epoch_compiled = njit(cache=True)(_sgd_epoch)


def _train_samples(net: BpNetwork, inputs, targets) -> tuple[np.ndarray, np.ndarray]:
    x = np.ascontiguousarray(np.asarray(inputs, dtype=np.float64))
    t = np.asarray(targets, dtype=np.float64)
    if t.ndim == 1:
        t = t[:, None]
    if x.ndim != 2 or x.shape[1] != net.layer_sizes[0]:
        raise ShapeError(f"inputs must be (n, {net.layer_sizes[0]}), got {x.shape}")
    if t.shape != (x.shape[0], net.layer_sizes[-1]):
        raise ShapeError(f"targets must be (n, {net.layer_sizes[-1]}), got {t.shape}")
    if x.shape[0] == 0:
        raise DomainError("no training samples")
    return x, np.ascontiguousarray(t)


def train(net: BpNetwork, inputs, targets, cfg: SgdConfig) -> BpNetwork:
    """Mini-batch SGD in place; returns the same network.

    Raises DivergenceError as soon as the epoch-end training cost stops
    being finite.
    """
    x, t = _train_samples(net, inputs, targets)
    rng = np.random.default_rng(cfg.seed)
    n = x.shape[0]
    if len(net.layer_sizes) == 3:
        step = _sgd_epoch_compiled
        args = (net.weights[0], net.biases[0], net.weights[1], net.biases[1])
    else:
        step = None
        args = ()
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        if step is not None:
            step(*args, x, t, order, cfg.batch_size, cfg.eta)
        else:
            _generic_epoch(net, x, t, order, cfg.batch_size, cfg.eta)
        with np.errstate(over="ignore", invalid="ignore"):
            cost = training_cost(net, x, t)
        if not math.isfinite(cost):
            raise DivergenceError(f"training cost became non-finite ({cost})")
    return net


def _generic_epoch(net, x, t, order, batch_size, eta):
    # Arbitrary-depth fallback: mean of per-sample gradients, batch by batch.
    for start in range(0, x.shape[0], batch_size):
        idx = order[start : start + batch_size]
        acc_w = [np.zeros_like(w) for w in net.weights]
        acc_b = [np.zeros_like(b) for b in net.biases]
        for i in idx:
            gw, gb = backprop(net, x[i], t[i])
            for l in range(len(acc_w)):
                acc_w[l] += gw[l]
                acc_b[l] += gb[l]
        s = eta / idx.shape[0]
        for l in range(len(acc_w)):
            net.weights[l] -= s * acc_w[l]
            net.biases[l] -= s * acc_b[l]
