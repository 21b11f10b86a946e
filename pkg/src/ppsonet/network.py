"""One-hidden-layer sigmoid network driven by a flat parameter vector.

Flat layout for a p-q-r topology (D = pq + qr + q + r)::

    [0, pq)                  W1, q x p, row-major (hidden unit j, input i)
    [pq, pq+q)               hidden biases b1
    [pq+q, pq+q+qr)          W2, r x q, row-major (output k, hidden unit j)
    [pq+q+qr, D)             output biases b2
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from . import kernels
from .errors import DimensionError, EmptyInputError


@dataclass(frozen=True)
class Topology:
    p: int
    q: int
    r: int

    def __post_init__(self):
        for name in ("p", "q", "r"):
            if int(getattr(self, name)) < 1:
                raise DimensionError(f"topology size {name} must be >= 1, got {getattr(self, name)}")

    @property
    def D(self):
        return self.p * self.q + self.q * self.r + self.q + self.r

    @classmethod
    def for_data(cls, n_features, n_classes, hidden=None):
        """Default hidden size is 2p + 1."""
        return cls(n_features, 2 * n_features + 1 if hidden is None else hidden, n_classes)


@dataclass(frozen=True)
class NetworkWeights:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    @property
    def topology(self):
        q, p = self.W1.shape
        return Topology(p, q, self.W2.shape[0])


def decode(params, topo):
    params = np.asarray(params, dtype=float)
    if params.shape != (topo.D,):
        raise DimensionError(f"parameter vector has shape {params.shape}, topology needs ({topo.D},)")
    p, q, r = topo.p, topo.q, topo.r
    pq = p * q
    return NetworkWeights(
        W1=params[:pq].reshape(q, p).copy(),
        b1=params[pq:pq + q].copy(),
        W2=params[pq + q:pq + q + q * r].reshape(r, q).copy(),
        b2=params[pq + q + q * r:].copy(),
    )


def encode(net):
    return np.concatenate([net.W1.ravel(), net.b1, net.W2.ravel(), net.b2])


def sigmoid(x):
    """Logistic function; saturates to 0/1 instead of overflowing."""
    return expit(x)


def forward(net, inputs):
    """Network outputs for one input vector (p,) or a batch (N, p)."""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.shape[-1] != net.W1.shape[1]:
        raise DimensionError(f"input has {inputs.shape[-1]} features, network expects {net.W1.shape[1]}")
    hidden = sigmoid(inputs @ net.W1.T + net.b1)
    return sigmoid(hidden @ net.W2.T + net.b2)


def _check_samples(inputs, targets):
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if inputs.shape[0] == 0:
        raise EmptyInputError("sample list is empty")
    if inputs.shape[0] != targets.shape[0]:
        raise DimensionError(f"{inputs.shape[0]} inputs but {targets.shape[0]} targets")
    return inputs, targets


def total_error(net, inputs, targets):
    """Half the summed squared error over all samples and outputs."""
    inputs, targets = _check_samples(inputs, targets)
    err = targets - forward(net, inputs)
    return 0.5 * float(np.sum(err * err))


def mse_fitness(params, topo, inputs, targets):
    """Squared error summed over outputs, averaged over samples."""
    inputs, targets = _check_samples(inputs, targets)
    err = targets - forward(decode(params, topo), inputs)
    return float(np.sum(err * err)) / inputs.shape[0]


def population_fitness(positions, topo, inputs, targets):
    """mse_fitness for every row of an (n, D) position matrix at once."""
    positions = np.ascontiguousarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[1] != topo.D:
        raise DimensionError(f"positions have shape {positions.shape}, topology needs (n, {topo.D})")
    inputs, targets = _check_samples(inputs, targets)
    return kernels.population_mse(
        positions, topo.p, topo.q, topo.r,
        np.ascontiguousarray(inputs), np.ascontiguousarray(targets))


def network_objective(topo, inputs, targets):
    """Batch objective ``f(positions) -> fitness vector`` for the optimisers."""
    inputs, targets = _check_samples(inputs, targets)
    if inputs.shape[1] != topo.p or targets.shape[1] != topo.r:
        raise DimensionError(
            f"data is {inputs.shape[1]}-in/{targets.shape[1]}-out, topology is {topo.p}-{topo.q}-{topo.r}")
    inputs = np.ascontiguousarray(inputs)
    targets = np.ascontiguousarray(targets)

    def objective(positions):
        return population_fitness(positions, topo, inputs, targets)

    return objective


def predict(net, inputs):
    """Argmax class index; ties go to the lowest index."""
    return np.argmax(forward(net, inputs), axis=-1)
