"""Hot inner loops, each in two flavours.

Every kernel ``foo`` has a ``foo_numpy`` (vectorised, always available) and a
``foo_numba`` (explicit loops under ``@njit``) implementation. The public name
is bound to one of them at import time. With numba available, each kernel uses
the flavour listed in :data:`PREFERRED` (picked from
``benchmarks/bench_kernels.py`` timings); ``PPSONET_DISABLE_NUMBA=1`` forces the
numpy flavour everywhere. Both flavours are exercised by the test suite.
"""
import math

import numpy as np
from scipy.spatial.distance import cdist

from ._accel import USE_NUMBA, njit

SOBOL_BITS = 32


# --------------------------------------------------------------------------
# Sobol points (Gray-code order), as unsigned 32-bit integers
# --------------------------------------------------------------------------

def sobol_ints_numpy(directions, start, count):
    n = np.arange(start, start + count, dtype=np.uint64)
    gray = n ^ (n >> np.uint64(1))
    out = np.zeros((count, directions.shape[0]), dtype=np.uint32)
    for bit in range(SOBOL_BITS):
        rows = ((gray >> np.uint64(bit)) & np.uint64(1)).astype(bool)
        if rows.any():
            out[rows] ^= directions[:, bit]
    return out


@njit
def sobol_ints_numba(directions, start, count):
    dim = directions.shape[0]
    out = np.zeros((count, dim), dtype=np.uint32)
    gray = start ^ (start >> 1)
    state = np.zeros(dim, dtype=np.uint32)
    for bit in range(SOBOL_BITS):
        if (gray >> bit) & 1:
            for d in range(dim):
                state[d] ^= directions[d, bit]
    for k in range(count):
        for d in range(dim):
            out[k, d] = state[d]
        # next index flips the direction number of the lowest zero bit
        n = start + k
        c = 0
        while (n >> c) & 1:
            c += 1
        if c < SOBOL_BITS:
            for d in range(dim):
                state[d] ^= directions[d, c]
    return out


# --------------------------------------------------------------------------
# Population fitness: MSE of a one-hidden-layer sigmoid network per particle
# --------------------------------------------------------------------------

def _sigmoid_inplace(a):
    with np.errstate(over="ignore"):
        np.negative(a, out=a)
        np.exp(a, out=a)
    a += 1.0
    np.reciprocal(a, out=a)
    return a


def population_mse_numpy(positions, p, q, r, inputs, targets):
    n = positions.shape[0]
    samples = inputs.shape[0]
    pq = p * q
    w1 = positions[:, :pq].reshape(n * q, p)
    b1 = positions[:, pq:pq + q].reshape(n * q)
    w2 = positions[:, pq + q:pq + q + q * r].reshape(n, r, q)
    b2 = positions[:, pq + q + q * r:]
    # one GEMM for the whole swarm: columns are (particle, hidden unit)
    hidden = inputs @ w1.T
    hidden += b1
    _sigmoid_inplace(hidden)
    hidden = hidden.reshape(samples, n, q).transpose(1, 0, 2)
    out = np.matmul(hidden, w2.transpose(0, 2, 1))
    out += b2[:, None, :]
    _sigmoid_inplace(out)
    out -= targets[None, :, :]
    return np.einsum("nsr,nsr->n", out, out) / samples


@njit
def _sigmoid_scalar(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@njit
def population_mse_numba(positions, p, q, r, inputs, targets):
    n = positions.shape[0]
    samples = inputs.shape[0]
    pq = p * q
    out = np.empty(n)
    for k in range(n):
        row = positions[k]
        w1t = np.ascontiguousarray(row[:pq].reshape(q, p).T)
        b1 = row[pq:pq + q]
        w2 = row[pq + q:pq + q + q * r].reshape(r, q)
        b2 = row[pq + q + q * r:]
        pre = np.dot(inputs, w1t)
        total = 0.0
        for s in range(samples):
            for j in range(q):
                pre[s, j] = _sigmoid_scalar(pre[s, j] + b1[j])
            for o in range(r):
                acc = b2[o]
                for j in range(q):
                    acc += w2[o, j] * pre[s, j]
                diff = targets[s, o] - _sigmoid_scalar(acc)
                total += diff * diff
        out[k] = total / samples
    return out


# --------------------------------------------------------------------------
# GSA acceleration: sum_j rand_ij * M_j * (x_j - x_i) / (R_ij + eps), scaled by G
# --------------------------------------------------------------------------

def gsa_acceleration_numpy(positions, masses, active, weights, grav, eps):
    elite = positions[active]
    dist = cdist(positions, elite)
    coef = weights * masses[active][None, :] / (dist + eps)
    # no self-attraction
    coef[active, np.arange(active.shape[0])] = 0.0
    return grav * (coef @ elite - coef.sum(axis=1)[:, None] * positions)


@njit
def gsa_acceleration_numba(positions, masses, active, weights, grav, eps):
    n, dim = positions.shape
    acc = np.zeros((n, dim))
    for i in range(n):
        for jj in range(active.shape[0]):
            j = active[jj]
            if j == i:
                continue
            dist = 0.0
            for d in range(dim):
                diff = positions[j, d] - positions[i, d]
                dist += diff * diff
            coef = weights[i, jj] * masses[j] / (math.sqrt(dist) + eps)
            for d in range(dim):
                acc[i, d] += coef * (positions[j, d] - positions[i, d])
    for i in range(n):
        for d in range(dim):
            acc[i, d] *= grav
    return acc


# --------------------------------------------------------------------------
# Reduced one-dimensional PSO dynamics: v' = w v - psi y ; y' = w v + (1 - psi) y
# --------------------------------------------------------------------------

def trajectory_numpy(omega, psi, v0, y0, steps, limit):
    v_hist = np.empty(steps + 1)
    y_hist = np.empty(steps + 1)
    v_hist[0], y_hist[0] = v0, y0
    v, y = v0, y0
    for t in range(steps):
        v, y = omega * v - psi * y, omega * v + (1.0 - psi) * y
        v_hist[t + 1], y_hist[t + 1] = v, y
        if not (abs(v) <= limit and abs(y) <= limit):
            return v_hist[:t + 2], y_hist[:t + 2], True
    return v_hist, y_hist, False


@njit
def _trajectory_loop(omega, psi, v0, y0, steps, limit):
    v_hist = np.empty(steps + 1)
    y_hist = np.empty(steps + 1)
    v_hist[0] = v0
    y_hist[0] = y0
    v = v0
    y = y0
    for t in range(steps):
        v_next = omega * v - psi * y
        y = omega * v + (1.0 - psi) * y
        v = v_next
        v_hist[t + 1] = v
        y_hist[t + 1] = y
        if not (abs(v) <= limit and abs(y) <= limit):
            return v_hist, y_hist, t + 2, True
    return v_hist, y_hist, steps + 1, False


def trajectory_numba(omega, psi, v0, y0, steps, limit):
    v_hist, y_hist, n, diverged = _trajectory_loop(
        float(omega), float(psi), float(v0), float(y0), int(steps), float(limit))
    return v_hist[:n], y_hist[:n], diverged


def sweep_numpy(omegas, psis, v0, y0, steps, limit):
    """Iterate every (omega, psi) cell at once; returns final and peak norms."""
    v = np.full(omegas.shape, float(v0))
    y = np.full(omegas.shape, float(y0))
    peak = np.hypot(v, y)
    alive = np.ones(omegas.shape, dtype=bool)
    for _ in range(steps):
        v_new = omegas * v - psis * y
        y_new = omegas * v + (1.0 - psis) * y
        v = np.where(alive, v_new, v)
        y = np.where(alive, y_new, y)
        norm = np.hypot(v, y)
        peak = np.maximum(peak, norm)
        alive &= norm <= limit
    return np.hypot(v, y), peak


@njit
def sweep_numba(omegas, psis, v0, y0, steps, limit):
    flat_w = omegas.ravel()
    flat_p = psis.ravel()
    final = np.empty(flat_w.shape[0])
    peak = np.empty(flat_w.shape[0])
    for c in range(flat_w.shape[0]):
        w = flat_w[c]
        ps = flat_p[c]
        v = v0
        y = y0
        top = math.hypot(v, y)
        for _ in range(steps):
            v_next = w * v - ps * y
            y = w * v + (1.0 - ps) * y
            v = v_next
            norm = math.hypot(v, y)
            if norm > top:
                top = norm
            if norm > limit:
                break
        final[c] = math.hypot(v, y)
        peak[c] = top
    return final.reshape(omegas.shape), peak.reshape(omegas.shape)


IMPLEMENTATIONS = {
    "sobol_ints": (sobol_ints_numpy, sobol_ints_numba),
    "population_mse": (population_mse_numpy, population_mse_numba),
    "gsa_acceleration": (gsa_acceleration_numpy, gsa_acceleration_numba),
    "trajectory": (trajectory_numpy, trajectory_numba),
    "sweep": (sweep_numpy, sweep_numba),
}

# The fitness kernel is dominated by exp(), where numpy's vectorised exp beats
# the scalar libm call numba emits; GSA acceleration is a BLAS product in numpy.
# Both stay on numpy even with numba present.
PREFERRED = {
    "sobol_ints": "numba",
    "population_mse": "numpy",
    "gsa_acceleration": "numpy",
    "trajectory": "numba",
    "sweep": "numba",
}

ACTIVE = {name: (PREFERRED[name] if USE_NUMBA else "numpy") for name in IMPLEMENTATIONS}


def _bound(name):
    return IMPLEMENTATIONS[name][ACTIVE[name] == "numba"]


sobol_ints = _bound("sobol_ints")
population_mse = _bound("population_mse")
gsa_acceleration = _bound("gsa_acceleration")
trajectory = _bound("trajectory")
sweep = _bound("sweep")
